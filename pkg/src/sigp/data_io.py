"""Dataset ingestion, standardization, splitting, and synthetic generators.

CSV files are RFC-4180 style, UTF-8, with '.' as the decimal separator. All
randomness flows from a single 64-bit seed through one named generator per
function, so generated datasets are bit-reproducible.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError, DomainError
from .serialize import write_atomic

__all__ = [
    "Dataset",
    "FeatureStats",
    "binary_pm1",
    "infer_label_kind",
    "load_csv",
    "save_csv",
    "split",
    "standardize",
    "synth_four_class",
    "synth_sinusoid",
]

logger = logging.getLogger("sigp.data_io")

_LABEL_KINDS = ("real", "binary", "multiclass")

# Columns whose standard deviation is at or below this are dropped.
_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class Dataset:
    """Immutable numeric dataset: one row per observation, labels in y."""

    X: np.ndarray
    y: np.ndarray
    label_kind: str
    feature_means: np.ndarray | None = None
    feature_stds: np.ndarray | None = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float).reshape(-1))
        if self.X.ndim != 2:
            raise DimensionError("X must be a 2-d array of row observations")
        if self.y.shape[0] != self.X.shape[0]:
            raise DimensionError(
                f"X has {self.X.shape[0]} rows but y has length {self.y.shape[0]}"
            )
        if self.label_kind not in _LABEL_KINDS:
            raise DomainError(
                f"unknown label_kind {self.label_kind!r}; choose from {_LABEL_KINDS}"
            )
        if not np.all(np.isfinite(self.X)):
            raise DataError("X contains NaN or infinite values")
        if not np.all(np.isfinite(self.y)):
            raise DataError("y contains NaN or infinite values")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class FeatureStats:
    """Standardization statistics over the retained feature columns."""

    means: np.ndarray
    stds: np.ndarray
    kept: np.ndarray


def infer_label_kind(y) -> str:
    """binary for two distinct values, multiclass for a few integer levels,
    real otherwise."""
    y = np.asarray(y, dtype=float).reshape(-1)
    distinct = np.unique(y)
    if distinct.shape[0] == 2:
        return "binary"
    if (
        3 <= distinct.shape[0] <= 10
        and np.all(distinct == np.round(distinct))
    ):
        return "multiclass"
    return "real"


def binary_pm1(y) -> np.ndarray:
    """Map a two-valued label vector to -1 (lower value) and +1 (higher)."""
    y = np.asarray(y, dtype=float).reshape(-1)
    distinct = np.unique(y)
    if distinct.shape[0] != 2:
        raise DomainError(
            f"binary labels require exactly two distinct values, got {distinct.shape[0]}"
        )
    return np.where(y == distinct[1], 1.0, -1.0)


def load_csv(path, header: bool = False, label_column="last",
             delimiter: str = ",") -> Dataset:
    """Parse a numeric CSV into features and a label column.

    Row order follows the file. Errors carry 1-based physical line numbers.
    """
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        for lineno, row in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            if not row:
                continue
            rows.append((lineno, row))
    if not rows:
        raise DataError("no data rows in file")
    width = len(rows[0][1])
    if width < 2:
        raise DataError(
            f"need at least two columns (features plus label), got {width}",
            line=rows[0][0],
        )
    if label_column == "last":
        label_idx = width - 1
    else:
        label_idx = int(label_column)
    if not 0 <= label_idx < width:
        raise DataError(f"label column {label_column} out of range for {width} columns")
    values = np.empty((len(rows), width))
    for i, (lineno, row) in enumerate(rows):
        if len(row) != width:
            raise DataError(
                f"line {lineno}: expected {width} fields, got {len(row)}", line=lineno
            )
        for j, token in enumerate(row):
            try:
                v = float(token)
            except ValueError:
                raise DataError(
                    f"line {lineno}: non-numeric field {token.strip()!r}", line=lineno
                ) from None
            if not math.isfinite(v):
                raise DataError(
                    f"line {lineno}: non-finite field {token.strip()!r}", line=lineno
                )
            values[i, j] = v
    y = values[:, label_idx]
    X = np.delete(values, label_idx, axis=1)
    return Dataset(X=X, y=y, label_kind=infer_label_kind(y))


def save_csv(ds: Dataset, path, header=None):
    """Write features plus a trailing label column; atomic replace on write.

    Floats keep 17 significant digits so a load after save is exact.
    """
    lines = []
    if header is not None:
        lines.append(",".join(header))
    for i in range(ds.n):
        fields = [f"{v:.17g}" for v in ds.X[i]]
        fields.append(f"{ds.y[i]:.17g}")
        lines.append(",".join(fields))
    write_atomic(path, "\n".join(lines) + "\n")


def split(ds: Dataset, test_count: int, seed: int):
    """Seeded uniform split without replacement; rows keep file order within
    each part. Returns (train, test)."""
    test_count = int(test_count)
    if not 0 <= test_count < ds.n:
        raise DomainError(
            f"test_count must be in [0, {ds.n - 1}], got {test_count}"
        )
    perm = np.random.default_rng(seed).permutation(ds.n)
    test_idx = np.sort(perm[:test_count])
    train_idx = np.sort(perm[test_count:])

    def take(idx):
        return Dataset(
            X=ds.X[idx], y=ds.y[idx], label_kind=ds.label_kind,
            feature_means=ds.feature_means, feature_stds=ds.feature_stds,
        )

    return take(train_idx), take(test_idx)


def standardize(ds: Dataset, stats: FeatureStats | None = None):
    """Center and scale features to zero mean and unit standard deviation.

    With stats=None the statistics come from ds itself and zero-variance
    columns are dropped (logged); pass the returned stats to transform a
    test set with the training statistics. Returns (dataset, stats).
    """
    if stats is None:
        means = ds.X.mean(axis=0)
        stds = ds.X.std(axis=0)
        kept = np.flatnonzero(stds > _STD_FLOOR)
        if kept.shape[0] < ds.d:
            dropped = np.setdiff1d(np.arange(ds.d), kept)
            logger.warning(
                "dropping %d zero variance column(s): %s",
                dropped.shape[0], dropped.tolist(),
            )
        if kept.shape[0] == 0:
            raise DataError("all feature columns have zero variance")
        stats = FeatureStats(means=means[kept], stds=stds[kept], kept=kept)
    else:
        if np.any(stats.kept >= ds.d):
            raise DimensionError(
                f"standardization statistics index column {int(stats.kept.max())} "
                f"but data has {ds.d} columns"
            )
    X = (ds.X[:, stats.kept] - stats.means) / stats.stds
    out = Dataset(
        X=X, y=ds.y, label_kind=ds.label_kind,
        feature_means=stats.means, feature_stds=stats.stds,
    )
    return out, stats


def synth_sinusoid(n: int, x_ranges=((0.0, 7.0),), noise_var: float = 0.01,
                   seed: int = 0) -> Dataset:
    """y = sin(x) + noise with x uniform on a union of intervals.

    Sampling is uniform over the union (intervals weighted by length), so
    disjoint ranges model training data observed at different locations.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if noise_var < 0:
        raise DomainError(f"noise_var must be nonnegative, got {noise_var}")
    ranges = [(float(lo), float(hi)) for lo, hi in x_ranges]
    if not ranges:
        raise DomainError("x_ranges must contain at least one interval")
    for lo, hi in ranges:
        if not hi > lo:
            raise DomainError(f"empty interval ({lo}, {hi}) in x_ranges")
    lengths = np.array([hi - lo for lo, hi in ranges])
    offsets = np.concatenate([[0.0], np.cumsum(lengths)])
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, offsets[-1], n)
    idx = np.clip(np.searchsorted(offsets, u, side="right") - 1, 0, len(ranges) - 1)
    x = np.array([ranges[k][0] for k in idx]) + (u - offsets[idx])
    y = np.sin(x)
    if noise_var > 0:
        y = y + math.sqrt(noise_var) * rng.standard_normal(n)
    return Dataset(X=x[:, None], y=y, label_kind="real")


def synth_four_class(n_per_class: int, seed: int = 0, std: float = 0.25,
                     gap: float = 0.2, inner_cap: float = 0.45) -> Dataset:
    """Four classes around the corners (+-1, +-1), two classes per corner.

    Classes are paired across the diagonals: classes 1 and 2 occupy both
    corners of the main diagonal, classes 3 and 4 the anti-diagonal. At each
    corner the offset along the diagonal is a centered normal (std) folded
    away from the corner by at least gap for the first class of the pair and
    toward the origin for the second (the inward magnitude is capped at
    inner_cap so the inner clusters of the two diagonals stay apart); the
    perpendicular offset is plain normal. Labels are 1 to 4, n_per_class
    points each, emitted class by class.
    """
    if n_per_class < 1:
        raise DomainError(f"n_per_class must be at least 1, got {n_per_class}")
    if not std > 0:
        raise DomainError(f"std must be positive, got {std}")
    if gap < 0:
        raise DomainError(f"gap must be nonnegative, got {gap}")
    if inner_cap < gap:
        raise DomainError(f"inner_cap must be at least gap, got {inner_cap} < {gap}")
    r2 = math.sqrt(2.0)
    diag_main = np.array([1.0, 1.0]) / r2
    diag_anti = np.array([1.0, -1.0]) / r2
    spec = [
        (1.0, diag_main, +1.0),
        (2.0, diag_main, -1.0),
        (3.0, diag_anti, +1.0),
        (4.0, diag_anti, -1.0),
    ]
    rng = np.random.default_rng(seed)
    points, labels = [], []
    for label, u, orientation in spec:
        v = np.array([-u[1], u[0]])
        first = (n_per_class + 1) // 2
        for corner_sign, count in ((1.0, first), (-1.0, n_per_class - first)):
            for _ in range(count):
                t = abs(std * rng.standard_normal()) + gap
                if orientation < 0:
                    t = min(t, inner_cap)
                w = std * rng.standard_normal()
                along = corner_sign * (r2 + orientation * t)
                points.append(along * u + w * v)
                labels.append(label)
    return Dataset(X=np.vstack(points), y=np.array(labels), label_kind="multiclass")
