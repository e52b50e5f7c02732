"""Kernel functions, Gram matrices with cached decompositions, and the
sample-level covariance of the integral-operator GP construction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import SymEig, matrix_power, sym_eig

_FAMILIES = ("rbf", "linear", "brownian_bridge")

# Positive entries below this are flushed to exact zero to avoid denormals.
_FLUSH = 1e-300


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyper-parameters.

    lengthscale applies to the rbf family only; variance_scale multiplies
    every kernel value. brownian_bridge is defined for scalar inputs in
    [0, 1] and vanishes at the endpoints.
    """

    family: str
    lengthscale: float = 1.0
    variance_scale: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(
                f"unknown kernel family {self.family!r}; choose from {_FAMILIES}"
            )
        if not self.lengthscale > 0:
            raise DomainError(f"lengthscale must be positive, got {self.lengthscale}")
        if not self.variance_scale > 0:
            raise DomainError(
                f"variance_scale must be positive, got {self.variance_scale}"
            )


def _as_points(X, name):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionError(f"{name} must be a 2-d array of row points")
    return X


def gram(spec: KernelSpec, X, Z) -> np.ndarray:
    """Kernel matrix with entry (i, j) = kappa(X_i, Z_j)."""
    X = _as_points(X, "X")
    Z = _as_points(Z, "Z")
    if X.shape[1] != Z.shape[1]:
        raise DimensionError(
            f"X has {X.shape[1]} columns but Z has {Z.shape[1]}"
        )
    if spec.family == "rbf":
        d2 = (
            np.sum(X * X, axis=1)[:, None]
            + np.sum(Z * Z, axis=1)[None, :]
            - 2.0 * (X @ Z.T)
        )
        np.clip(d2, 0.0, None, out=d2)
        K = np.exp(-d2 / (2.0 * spec.lengthscale**2))
        K[K < _FLUSH] = 0.0
    elif spec.family == "linear":
        K = X @ Z.T
    else:  # brownian_bridge
        if X.shape[1] != 1:
            raise DomainError("brownian_bridge kernel requires scalar inputs")
        x, z = X[:, 0], Z[:, 0]
        if np.any((x < 0) | (x > 1)) or np.any((z < 0) | (z > 1)):
            raise DomainError("brownian_bridge inputs must lie in [0, 1]")
        K = np.minimum.outer(x, z) - np.outer(x, z)
    return spec.variance_scale * K


def gram_diag(spec: KernelSpec, Z) -> np.ndarray:
    """Vector of kappa(z, z) for each row point of Z."""
    Z = _as_points(Z, "Z")
    if spec.family == "rbf":
        out = np.ones(Z.shape[0])
    elif spec.family == "linear":
        out = np.sum(Z * Z, axis=1)
    else:  # brownian_bridge
        if Z.shape[1] != 1:
            raise DomainError("brownian_bridge kernel requires scalar inputs")
        z = Z[:, 0]
        if np.any((z < 0) | (z > 1)):
            raise DomainError("brownian_bridge inputs must lie in [0, 1]")
        out = z - z * z
    return spec.variance_scale * out


class GramCache:
    """Training Gram matrix with lazily computed derived quantities.

    Immutable once built: the eigendecomposition, the row-centered matrix
    Gamma_n K, and the per-column means are computed on first use and
    cached. Gamma_n denotes the centering projector I - 11^T/n.
    """

    def __init__(self, kernel: KernelSpec, X):
        self.kernel = kernel
        self.X = _as_points(X, "X")
        K = gram(kernel, self.X, self.X)
        self.K = 0.5 * (K + K.T)
        self._eig = None
        self._centered = None
        self._col_means = None

    @property
    def n(self) -> int:
        return self.K.shape[0]

    @property
    def eig(self) -> SymEig:
        if self._eig is None:
            self._eig = sym_eig(self.K)
        return self._eig

    @property
    def col_means(self) -> np.ndarray:
        """Column means of K; the mean correction used by the projection."""
        if self._col_means is None:
            self._col_means = self.K.mean(axis=0)
        return self._col_means

    @property
    def centered(self) -> np.ndarray:
        """Gamma_n K, i.e. K with column means subtracted from every row."""
        if self._centered is None:
            self._centered = self.K - self.col_means[None, :]
        return self._centered


def gram_cache(spec: KernelSpec, X) -> GramCache:
    return GramCache(spec, X)


def igp_covariance(K: GramCache, K_nu, p) -> np.ndarray:
    """Sample covariance n^(-2p) K^p K_nu K^p of the projected process."""
    K_nu = np.asarray(K_nu, dtype=float)
    n = K.n
    if K_nu.shape != (n, n):
        raise DimensionError(f"K_nu must be {n} x {n}, got {K_nu.shape}")
    Kp = matrix_power(K.K, p)
    C = Kp @ K_nu @ Kp / float(n) ** (2.0 * float(p))
    return 0.5 * (C + C.T)


def brownian_bridge_eigensystem(j, x):
    """Closed-form eigenpair of the Brownian-bridge kernel on [0, 1].

    Returns (1/(pi^2 j^2), sqrt(2) sin(j pi x)); the analytic reference the
    test suite compares dense decompositions against.
    """
    if int(j) != j or j < 1:
        raise DomainError(f"eigenvalue index must be an integer >= 1, got {j}")
    j = int(j)
    lam = 1.0 / (math.pi**2 * j**2)
    return lam, math.sqrt(2.0) * np.sin(j * math.pi * np.asarray(x, dtype=float))


def median_heuristic(X) -> float:
    """Median pairwise Euclidean distance; default rbf lengthscale scale."""
    X = _as_points(X, "X")
    n = X.shape[0]
    if n < 2:
        return 1.0
    d2 = (
        np.sum(X * X, axis=1)[:, None]
        + np.sum(X * X, axis=1)[None, :]
        - 2.0 * (X @ X.T)
    )
    np.clip(d2, 0.0, None, out=d2)
    iu = np.triu_indices(n, k=1)
    med = float(np.median(np.sqrt(d2[iu])))
    return med if med > 0 else 1.0
