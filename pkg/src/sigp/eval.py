"""Metrics and multi-class scoring.

Regression is scored by mean squared error and negative log predictive
density; binary classification by F1 of the positive class after a
threshold-at-zero decision on the predictive mean. Multi-class problems are
handled by a one-vs-rest ensemble of low-rank models that share a single
subspace basis estimated from the class labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError, DomainError
from .kernels import GramCache
from .model import (
    EmConfig,
    SigpModel,
    em_fit,
    model_doc,
    model_from_doc,
    predict,
)
from .sdr import fit_sdr
from .serialize import doc_text, read_doc, require, write_atomic

__all__ = [
    "OVR_MODEL_FORMAT",
    "OneVsRestModel",
    "accuracy",
    "f1",
    "load_ovr_model",
    "mse",
    "nlpd",
    "ovr_fit",
    "ovr_predict",
    "ovr_scores",
    "save_ovr_model",
    "threshold_binary",
]

OVR_MODEL_FORMAT = "sigp-ovr-v1"


def _paired_vectors(a, b, name_a, name_b):
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(
            f"{name_a} has length {a.shape[0]} but {name_b} has length {b.shape[0]}"
        )
    if a.shape[0] == 0:
        raise DataError(f"{name_a} and {name_b} are empty")
    return a, b


def f1(pred, truth) -> float:
    """F1 score of the +1 class for label vectors in {-1, +1}."""
    pred, truth = _paired_vectors(pred, truth, "pred", "truth")
    for name, v in (("pred", pred), ("truth", truth)):
        if not np.all(np.isin(v, (-1.0, 1.0))):
            raise DomainError(f"{name} must contain only -1 and +1 labels")
    tp = float(np.sum((pred == 1.0) & (truth == 1.0)))
    n_pred_pos = float(np.sum(pred == 1.0))
    n_true_pos = float(np.sum(truth == 1.0))
    precision = tp / n_pred_pos if n_pred_pos > 0 else 0.0
    recall = tp / n_true_pos if n_true_pos > 0 else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def mse(pred, y) -> float:
    """Mean squared residual."""
    pred, y = _paired_vectors(pred, y, "pred", "y")
    return float(np.mean((pred - y) ** 2))


def accuracy(pred, truth) -> float:
    """Fraction of exactly matching labels."""
    pred, truth = _paired_vectors(pred, truth, "pred", "truth")
    return float(np.mean(pred == truth))


def nlpd(dist, y) -> float:
    """Mean negative log density of y under per-point normal predictions."""
    mean = np.asarray(dist.mean, dtype=float).reshape(-1)
    var = np.asarray(dist.variance, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if mean.shape[0] != var.shape[0] or mean.shape[0] != y.shape[0]:
        raise DimensionError(
            f"prediction has {mean.shape[0]} points ({var.shape[0]} variances) "
            f"but y has length {y.shape[0]}"
        )
    if y.shape[0] == 0:
        raise DataError("cannot score an empty test set")
    if np.any(var <= 0):
        raise DomainError("predictive variances must be positive")
    return float(np.mean(0.5 * (np.log(2.0 * math.pi * var) + (y - mean) ** 2 / var)))


def threshold_binary(values) -> np.ndarray:
    """Map real scores to {-1, +1} labels with the decision boundary at 0."""
    return np.where(np.asarray(values, dtype=float) >= 0.0, 1.0, -1.0)


@dataclass(frozen=True)
class OneVsRestModel:
    """One fitted model per class, all sharing the same subspace basis."""

    classes: np.ndarray
    models: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", np.asarray(self.classes, dtype=float))
        object.__setattr__(self, "models", tuple(self.models))
        if self.classes.ndim != 1 or self.classes.shape[0] != len(self.models):
            raise DimensionError(
                f"{len(self.models)} models for {self.classes.shape} classes"
            )
        if len(self.models) < 2:
            raise DomainError("one-vs-rest needs at least two classes")


def ovr_fit(K: GramCache, y, m, method: str = "sliced", zeta=None,
            config: EmConfig | None = None):
    """Fit a one-vs-rest ensemble; returns (model, per-class EM traces).

    One basis is estimated from the class labels (one slice per class) and
    reused by every per-class fit on +1/-1 targets.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape[0] != K.n:
        raise DimensionError(f"y has length {y.shape[0]}, expected {K.n}")
    classes = np.unique(y)
    if classes.shape[0] < 2:
        raise DomainError("one-vs-rest needs at least two classes in y")
    basis = fit_sdr(K, y, m, method=method, zeta=zeta, n_classes=classes.shape[0])
    models, traces = [], []
    for c in classes:
        targets = np.where(y == c, 1.0, -1.0)
        sub, trace = em_fit(K, targets, basis, config)
        models.append(sub)
        traces.append(trace)
    return OneVsRestModel(classes=classes, models=tuple(models)), traces


def ovr_scores(model: OneVsRestModel, Z) -> np.ndarray:
    """Per-class predictive means, one column per class in label order."""
    return np.column_stack([predict(sub, Z).mean for sub in model.models])


def ovr_predict(model: OneVsRestModel, Z) -> np.ndarray:
    """Labels of the highest-scoring class (first class wins ties)."""
    return model.classes[np.argmax(ovr_scores(model, Z), axis=1)]


def save_ovr_model(model: OneVsRestModel, path):
    """Serialize the ensemble; same envelope as single models."""
    doc = {
        "format": OVR_MODEL_FORMAT,
        "classes": model.classes,
        "models": [model_doc(sub) for sub in model.models],
    }
    write_atomic(path, doc_text(doc))


def load_ovr_model(path) -> OneVsRestModel:
    doc = read_doc(path, OVR_MODEL_FORMAT)
    classes = np.array(require(doc, "classes"), dtype=float)
    models = tuple(model_from_doc(sub) for sub in require(doc, "models"))
    return OneVsRestModel(classes=classes, models=models)
