"""Exact Gaussian process regression baseline.

A deliberately simple reference model: fixed kernel, optional linear mean
fitted by generalized least squares, and a noise variance chosen by grid
search over the exact marginal likelihood. Serves as an independent sanity
check for the low-rank model and as the comparison baseline in the
experiment scripts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, SingularityError
from .kernels import GramCache, KernelSpec, gram, gram_diag
from .model import PredictiveDistribution
from .serialize import doc_text, read_doc, require, write_atomic

__all__ = [
    "GP_MODEL_FORMAT",
    "ExactGpModel",
    "gp_fit",
    "gp_predict",
    "save_gp_model",
    "load_gp_model",
]

GP_MODEL_FORMAT = "gp-model-v1"

# Relative ridge added to the noisy Gram matrix before factorization.
_JITTER_SCALE = 1e-8

_MEAN_KINDS = ("zero", "linear")


@dataclass(frozen=True)
class ExactGpModel:
    """Fitted exact GP: dual weights against the noisy training Gram matrix.

    dual_weights solve (K + (noise2 + jitter) I) dual = y - mean(X); chol is
    the cached lower Cholesky factor of that same matrix.
    """

    kernel: KernelSpec
    X_train: np.ndarray
    noise2: float
    mean_kind: str
    mean_coef: np.ndarray
    dual_weights: np.ndarray
    loglik: float
    chol: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "X_train", np.asarray(self.X_train, dtype=float))
        object.__setattr__(self, "noise2", float(self.noise2))
        object.__setattr__(self, "mean_coef", np.asarray(self.mean_coef, dtype=float))
        object.__setattr__(self, "dual_weights", np.asarray(self.dual_weights, dtype=float))
        object.__setattr__(self, "loglik", float(self.loglik))
        object.__setattr__(self, "chol", np.asarray(self.chol, dtype=float))
        if self.X_train.ndim != 2:
            raise DimensionError("X_train must be a 2-d array of row points")
        n = self.X_train.shape[0]
        if not self.noise2 > 0:
            raise DomainError(f"noise2 must be positive, got {self.noise2}")
        if self.mean_kind not in _MEAN_KINDS:
            raise DomainError(
                f"unknown mean_kind {self.mean_kind!r}; choose from {_MEAN_KINDS}"
            )
        want_coef = 0 if self.mean_kind == "zero" else self.X_train.shape[1] + 1
        if self.mean_coef.shape != (want_coef,):
            raise DimensionError(
                f"mean_coef must have shape ({want_coef},), got {self.mean_coef.shape}"
            )
        if self.dual_weights.shape != (n,):
            raise DimensionError(
                f"dual_weights must have shape ({n},), got {self.dual_weights.shape}"
            )
        if self.chol.shape != (n, n):
            raise DimensionError(f"chol must have shape ({n}, {n}), got {self.chol.shape}")

    @property
    def n(self) -> int:
        return self.X_train.shape[0]

    @property
    def d(self) -> int:
        return self.X_train.shape[1]


def _jitter(K: np.ndarray) -> float:
    return _JITTER_SCALE * float(np.trace(K)) / K.shape[0]


def _chol_solve(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.linalg.solve(L.T, np.linalg.solve(L, B))


def _design(X: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(X.shape[0]), X])


def _mean_values(model: ExactGpModel, Z: np.ndarray) -> np.ndarray:
    if model.mean_kind == "zero":
        return np.zeros(Z.shape[0])
    return model.mean_coef[0] + Z @ model.mean_coef[1:]


def gp_fit(K: GramCache, y, noise_grid=None, mean: str = "linear") -> ExactGpModel:
    """Fit the baseline by scanning noise variances for the best evidence.

    For each grid value the mean coefficients are the generalized least
    squares solution under covariance K + (noise2 + jitter) I, and the grid
    point with the highest exact marginal log likelihood wins.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    n = K.n
    if y.shape[0] != n:
        raise DimensionError(f"y has length {y.shape[0]}, expected {n}")
    if mean not in _MEAN_KINDS:
        raise DomainError(f"unknown mean {mean!r}; choose from {_MEAN_KINDS}")
    if noise_grid is None:
        noise_grid = np.logspace(-4.0, 0.0, 7)
    grid = np.asarray(noise_grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise DomainError("noise grid must be non-empty")
    if np.any(grid <= 0):
        raise DomainError("noise grid values must be positive")

    jit = _jitter(K.K)
    H = _design(K.X) if mean == "linear" else None
    eye = np.eye(n)
    best = None
    for s2 in grid:
        C = K.K + (float(s2) + jit) * eye
        try:
            L = np.linalg.cholesky(C)
        except np.linalg.LinAlgError as exc:
            raise SingularityError(
                f"noisy Gram matrix is not positive definite at noise2={s2}"
            ) from exc
        if H is not None:
            CiH = _chol_solve(L, H)
            A = H.T @ CiH
            A = 0.5 * (A + A.T)
            try:
                coef = np.linalg.solve(A, CiH.T @ y)
            except np.linalg.LinAlgError as exc:
                raise SingularityError(
                    "linear mean design is collinear; use mean='zero'"
                ) from exc
            r = y - H @ coef
        else:
            coef = np.zeros(0)
            r = y
        dual = _chol_solve(L, r)
        ll = (
            -0.5 * float(r @ dual)
            - float(np.sum(np.log(np.diag(L))))
            - 0.5 * n * math.log(2.0 * math.pi)
        )
        if best is None or ll > best[0]:
            best = (ll, float(s2), coef, dual, L)

    ll, s2, coef, dual, L = best
    return ExactGpModel(
        kernel=K.kernel, X_train=K.X, noise2=s2, mean_kind=mean,
        mean_coef=coef, dual_weights=dual, loglik=ll, chol=L,
    )


def gp_predict(model: ExactGpModel, Z) -> PredictiveDistribution:
    """Posterior mean and per-point variance (observation noise included).

    Variances are clamped to [noise2, kappa(z,z) + noise2], the exact range
    of the formula, to absorb factorization rounding at the extremes.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    cross = gram(model.kernel, model.X_train, Z)
    mean = cross.T @ model.dual_weights + _mean_values(model, Z)
    sol = _chol_solve(model.chol, cross)
    prior = gram_diag(model.kernel, Z)
    variance = prior - np.einsum("ij,ij->j", cross, sol) + model.noise2
    np.clip(variance, model.noise2, prior + model.noise2, out=variance)
    return PredictiveDistribution(mean=mean, variance=variance)


def _gp_text(model: ExactGpModel) -> str:
    doc = {
        "format": GP_MODEL_FORMAT,
        "kernel": {
            "family": model.kernel.family,
            "lengthscale": model.kernel.lengthscale,
            "variance_scale": model.kernel.variance_scale,
        },
        "n": model.n, "d": model.d,
        "mean_kind": model.mean_kind,
        "noise2": model.noise2,
        "loglik": model.loglik,
        "mean_coef": model.mean_coef,
        "X_train": model.X_train,
        "dual_weights": model.dual_weights,
    }
    return doc_text(doc)


def save_gp_model(model: ExactGpModel, path):
    """Serialize with 17-significant-digit decimals; atomic replace on write."""
    write_atomic(path, _gp_text(model))


def load_gp_model(path) -> ExactGpModel:
    """Load a serialized baseline and rebuild its cached Cholesky factor."""
    doc = read_doc(path, GP_MODEL_FORMAT)
    kspec = require(doc, "kernel")
    kernel = KernelSpec(
        family=require(kspec, "family"),
        lengthscale=float(require(kspec, "lengthscale")),
        variance_scale=float(require(kspec, "variance_scale")),
    )
    n, d = int(require(doc, "n")), int(require(doc, "d"))
    mean_kind = require(doc, "mean_kind")
    noise2 = float(require(doc, "noise2"))
    loglik = float(require(doc, "loglik"))
    n_coef = 0 if mean_kind == "zero" else d + 1
    coef = np.array(require(doc, "mean_coef"), dtype=float).reshape(n_coef)
    X = np.array(require(doc, "X_train"), dtype=float).reshape(n, d)
    dual = np.array(require(doc, "dual_weights"), dtype=float).reshape(n)
    cache = GramCache(kernel, X)
    L = np.linalg.cholesky(cache.K + (noise2 + _jitter(cache.K)) * np.eye(n))
    return ExactGpModel(
        kernel=kernel, X_train=X, noise2=noise2, mean_kind=mean_kind,
        mean_coef=coef, dual_weights=dual, loglik=loglik, chol=L,
    )
