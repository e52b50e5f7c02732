"""Dense symmetric linear algebra: eigendecompositions, fractional matrix
powers, generalized eigenproblems by whitening, determinant-quotient
minimization, and the low-rank Woodbury inverse operator.

Conventions used throughout the package:

* eigenvalues are reported in descending order;
* each eigenvector's largest-magnitude entry is made positive, so
  decompositions (and everything serialized downstream) are reproducible
  across runs and BLAS builds;
* generalized problems ``B w = tau A w`` with positive definite ``A`` are
  solved by symmetric whitening with ``A^{-1/2}``, never by forming the
  nonsymmetric product ``A^{-1} B``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, SingularityError

_SYM_RTOL = 1e-10
_PSD_CLAMP_RTOL = 1e-10


def _as_square_symmetric(A, name, rtol=_SYM_RTOL):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {A.shape}")
    scale = np.abs(A).max() if A.size else 0.0
    asym = np.abs(A - A.T).max() if A.size else 0.0
    if asym > rtol * max(scale, 1e-300):
        raise DimensionError(
            f"{name} is not symmetric: max asymmetry {asym:.3e} exceeds "
            f"{rtol:.0e} relative tolerance"
        )
    return 0.5 * (A + A.T)


def _fix_signs(vectors):
    """Flip columns so the largest-magnitude entry of each is positive."""
    V = np.array(vectors, dtype=float, copy=True)
    for j in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        if V[i, j] < 0:
            V[:, j] = -V[:, j]
    return V


@dataclass(frozen=True)
class SymEig:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class GenEigBasis:
    """Top eigenpairs of B w = tau A w; vectors are A-orthonormal columns."""

    vectors: np.ndarray
    values: np.ndarray


def sym_eig(A) -> SymEig:
    """Full eigendecomposition of a symmetric matrix.

    Returns eigenvalues in descending order with sign-fixed orthonormal
    eigenvectors (columns). Raises :class:`DimensionError` for non-square
    or asymmetric input.
    """
    A = _as_square_symmetric(A, "A")
    values, vectors = np.linalg.eigh(A)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = _fix_signs(vectors[:, order])
    return SymEig(values=values, vectors=vectors)


def matrix_power(A, p) -> np.ndarray:
    """Fractional power ``U D^p U^T`` of a symmetric PSD matrix, p in [1/2, 1].

    Eigenvalues in [-1e-10 * lam_max, 0) are clamped to zero; anything more
    negative means the input is not PSD and raises :class:`DomainError`.
    """
    p = float(p)
    if not 0.5 <= p <= 1.0:
        raise DomainError(f"power p must lie in [0.5, 1], got {p}")
    A = _as_square_symmetric(A, "A")
    eig = sym_eig(A)
    lam_max = max(float(eig.values[0]), 0.0)
    floor = -_PSD_CLAMP_RTOL * lam_max
    if np.any(eig.values < floor):
        worst = float(eig.values.min())
        raise DomainError(
            f"matrix is not PSD within tolerance: smallest eigenvalue {worst:.3e}"
        )
    if p == 1.0:
        return A
    lam = np.clip(eig.values, 0.0, None) ** p
    R = (eig.vectors * lam) @ eig.vectors.T
    return 0.5 * (R + R.T)


def _inv_sqrt(A, name, reg_hint):
    """Symmetric inverse square root of a PD matrix via its eigensystem."""
    eig = sym_eig(A)
    lam_max = float(eig.values[0])
    if lam_max <= 0 or float(eig.values[-1]) <= lam_max * 1e-14:
        raise SingularityError(
            f"{name} is not positive definite (smallest eigenvalue "
            f"{float(eig.values[-1]):.3e}); {reg_hint}"
        )
    return (eig.vectors / np.sqrt(eig.values)) @ eig.vectors.T


def gen_eig_top(B, A, m) -> GenEigBasis:
    """Top-m eigenpairs of ``B w = tau A w`` with A positive definite.

    Whitens with the symmetric inverse square root of ``A``, solves the
    resulting ordinary symmetric problem, and maps back; the returned
    columns satisfy ``W^T A W = I``.
    """
    B = _as_square_symmetric(B, "B")
    A = _as_square_symmetric(A, "A")
    if B.shape != A.shape:
        raise DimensionError(f"B and A must match, got {B.shape} vs {A.shape}")
    n = A.shape[0]
    m = int(m)
    if not 1 <= m <= n:
        raise DomainError(f"m must lie in [1, {n}], got {m}")
    Ais = _inv_sqrt(A, "A", "increase the regularization (zeta) and retry")
    C = Ais @ B @ Ais
    eig = sym_eig(0.5 * (C + C.T))
    W = _fix_signs(Ais @ eig.vectors[:, :m])
    return GenEigBasis(vectors=W, values=eig.values[:m].copy())


def det_quotient_argmin(M, N, m) -> np.ndarray:
    """Minimizer of det(S^T M S) / det(S^T N S) over full-rank n x m bases.

    The minimizing span is the top-m eigenspace of M^{-1} N; the returned
    basis is M-orthonormal. Callers maximizing the quotient swap the roles
    of M and N.
    """
    return gen_eig_top(N, M, m).vectors


class WoodburyInverse:
    """Operator applying ``V^{-1}`` for ``V = Pi Sigma_beta Pi^T + sigma2 I``.

    Setup costs O(n m^2 + m^3); each application costs O(n m). The identity
    used is ``V^{-1} = [I - Pi (sigma2 Sigma_beta^{-1} + Pi^T Pi)^{-1} Pi^T]
    / sigma2``.
    """

    def __init__(self, sigma2, Pi, Sigma_beta):
        sigma2 = float(sigma2)
        if sigma2 <= 0:
            raise DomainError(f"sigma2 must be positive, got {sigma2}")
        Pi = np.asarray(Pi, dtype=float)
        if Pi.ndim != 2:
            raise DimensionError("Pi must be a 2-d matrix")
        Sigma_beta = _as_square_symmetric(Sigma_beta, "Sigma_beta")
        if Sigma_beta.shape[0] != Pi.shape[1]:
            raise DimensionError(
                f"Sigma_beta is {Sigma_beta.shape} but Pi has {Pi.shape[1]} columns"
            )
        try:
            Lb = np.linalg.cholesky(Sigma_beta)
        except np.linalg.LinAlgError as exc:
            raise SingularityError("Sigma_beta is not positive definite") from exc
        m = Pi.shape[1]
        Sb_inv = np.linalg.solve(Sigma_beta, np.eye(m))
        self.sigma2 = sigma2
        self.Pi = Pi
        self.Lambda = Pi.T @ Pi
        self._core = sigma2 * Sb_inv + self.Lambda
        try:
            Lc = np.linalg.cholesky(0.5 * (self._core + self._core.T))
        except np.linalg.LinAlgError as exc:
            raise SingularityError("Woodbury core matrix is not positive definite") from exc
        self._logdet_sb = 2.0 * float(np.sum(np.log(np.diag(Lb))))
        self._logdet_core = 2.0 * float(np.sum(np.log(np.diag(Lc))))

    @property
    def n(self):
        return self.Pi.shape[0]

    @property
    def m(self):
        return self.Pi.shape[1]

    def matmat(self, X):
        """Apply V^{-1} to a matrix (or vector) of compatible leading size."""
        X = np.asarray(X, dtype=float)
        squeeze = X.ndim == 1
        if squeeze:
            X = X[:, None]
        if X.shape[0] != self.n:
            raise DimensionError(f"operand has {X.shape[0]} rows, expected {self.n}")
        Y = (X - self.Pi @ np.linalg.solve(self._core, self.Pi.T @ X)) / self.sigma2
        return Y[:, 0] if squeeze else Y

    def matvec(self, v):
        return self.matmat(v)

    def dense(self, out=None):
        """Materialize V^{-1}; O(n^2 m) time, used by the EM inner loop.

        out, when given, must be an (n, n) float array and is overwritten
        and returned; reusing one buffer across calls avoids repeated
        large allocations. The result is symmetric up to rounding.
        """
        core_PiT = np.linalg.solve(self._core, self.Pi.T)
        if out is None:
            out = np.empty((self.n, self.n))
        elif out.shape != (self.n, self.n) or out.dtype != np.float64:
            raise DimensionError(f"out must be float64 {(self.n, self.n)}")
        np.matmul(self.Pi, core_PiT, out=out)
        out *= -1.0 / self.sigma2
        diag = np.einsum("ii->i", out)
        diag += 1.0 / self.sigma2
        return out

    def trace(self):
        core_lam = np.linalg.solve(self._core, self.Lambda)
        return (self.n - float(np.trace(core_lam))) / self.sigma2

    def logdet_v(self):
        """log det V through the matrix determinant lemma, O(m^3)."""
        return (
            (self.n - self.m) * np.log(self.sigma2)
            + self._logdet_sb
            + self._logdet_core
        )

    def quad(self, v):
        """v^T V^{-1} v."""
        v = np.asarray(v, dtype=float)
        return float(v @ self.matvec(v))


def woodbury_inverse(sigma2, Pi, Sigma_beta) -> WoodburyInverse:
    """Build the implicit inverse of ``Pi Sigma_beta Pi^T + sigma2 I``."""
    return WoodburyInverse(sigma2, Pi, Sigma_beta)
