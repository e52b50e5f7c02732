"""Supervised subspace estimation in the RKHS.

Two routes produce the matrix pair (M, N) whose generalized eigenvectors
span the response-informative subspace of the kernel feature space: a
slicing route (sort responses, center within slices) and a slicing-free
route built from a response kernel. The basis maximizes

    g(W) = -(n/2) log det(W^T M W) / det(W^T N W),

and the leading directions solve N w = tau' M w; values are reported as
tau = 1 - 1/tau', which lies in (0, 1) for directions carrying response
information and decays to about zero for uninformative ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, RankError, SingularityError
from .kernels import GramCache, KernelSpec, gram, median_heuristic
from .linalg import gen_eig_top

_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class SlicePlan:
    """Ordering of observations by response and contiguous slice sizes."""

    ordering: np.ndarray
    sizes: tuple

    def __post_init__(self):
        if sum(self.sizes) != len(self.ordering):
            raise DimensionError("slice sizes must sum to the number of points")
        if any(s < 1 for s in self.sizes):
            raise DomainError("every slice must be non-empty")

    @property
    def boundaries(self):
        """(start, stop) index ranges into the ordered sequence."""
        out, start = [], 0
        for s in self.sizes:
            out.append((start, start + s))
            start += s
        return tuple(out)


@dataclass(frozen=True)
class SdrBasis:
    """Estimated basis W with its eigenvalue diagnostics.

    tau is descending; zeta/method/slice_sizes record how the (M, N) pair
    was assembled when the basis came from the full pipeline (None when
    estimate_basis was called on bare matrices).
    """

    W: np.ndarray
    tau: np.ndarray
    zeta: float | None = None
    method: str | None = None
    slice_sizes: tuple | None = None

    def __post_init__(self):
        sv = np.linalg.svd(self.W, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise RankError(
                "basis columns are numerically dependent", detected_rank=int(np.sum(sv > 1e-10 * sv[0]))
            )

    @property
    def m(self) -> int:
        return self.W.shape[1]


def make_slices(y, s) -> SlicePlan:
    """Sort responses ascending (stable) and cut into s near-equal slices."""
    y = np.asarray(y, dtype=float).ravel()
    n = len(y)
    s = int(s)
    if not 2 <= s <= n:
        raise DomainError(f"slice count must satisfy 2 <= s <= {n}, got {s}")
    ordering = np.argsort(y, kind="stable")
    q, r = divmod(n, s)
    sizes = tuple([q + 1] * r + [q] * (s - r))
    return SlicePlan(ordering=ordering, sizes=sizes)


def _block_centering(plan: SlicePlan, n) -> np.ndarray:
    """Per-slice centering projectors scattered back to original order."""
    B = np.zeros((n, n))
    for start, stop in plan.boundaries:
        idx = np.asarray(plan.ordering[start:stop])
        sz = len(idx)
        B[np.ix_(idx, idx)] = np.eye(sz) - np.ones((sz, sz)) / sz
    return B


def _n_matrix(K: GramCache) -> np.ndarray:
    N = K.K @ K.centered
    return 0.5 * (N + N.T)


def sdr_matrices_sliced(K: GramCache, plan: SlicePlan, zeta) -> tuple:
    """(M, N) for the slicing route: M = K blockdiag(Gamma_s) K + n zeta K.

    Matrices are returned in the original observation order (the sorted-order
    block structure is scattered back through the plan), so downstream bases
    stay aligned with unpermuted y.
    """
    zeta = float(zeta)
    if zeta <= 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    n = K.n
    if sum(plan.sizes) != n:
        raise DimensionError("slice plan does not match the Gram matrix size")
    B = _block_centering(plan, n)
    M = K.K @ B @ K.K + n * zeta * K.K
    return 0.5 * (M + M.T), _n_matrix(K)


def _response_inner(n, Ky, zeta1) -> np.ndarray:
    """Middle matrix of the slicing-free route: Gamma minus the smoothed
    response-kernel hat matrix."""
    zeta1 = float(zeta1)
    if zeta1 <= 0:
        raise DomainError(f"zeta1 must be positive, got {zeta1}")
    Ky = np.asarray(Ky, dtype=float)
    if Ky.shape != (n, n):
        raise DimensionError(f"Ky must be {n} x {n}, got {Ky.shape}")
    G = np.eye(n) - np.ones((n, n)) / n
    Kbar = G @ Ky @ G
    Kbar = 0.5 * (Kbar + Kbar.T)
    try:
        return G - np.linalg.solve(Kbar + n * zeta1 * np.eye(n), Kbar)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(
            "response-kernel system is singular; increase zeta1"
        ) from exc


def sdr_matrices_response_kernel(K: GramCache, Ky, zeta, zeta1) -> tuple:
    """(M, N) for the slicing-free route using a response Gram matrix Ky."""
    zeta = float(zeta)
    if zeta <= 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    T = _response_inner(K.n, Ky, zeta1)
    M = K.K @ T @ K.K + K.n * zeta * K.K
    return 0.5 * (M + M.T), _n_matrix(K)


def estimate_basis(M, N, m, *, zeta=None, method=None, slice_sizes=None) -> SdrBasis:
    """Top-m basis of the subspace maximizing g, with tau = 1 - 1/tau'.

    Solves N w = tau' M w by whitening M; raises :class:`RankError` when m
    exceeds the numerically detected rank of N and :class:`SingularityError`
    when M is not positive definite (raise zeta).
    """
    N = np.asarray(N, dtype=float)
    m = int(m)
    lam_N = np.linalg.eigvalsh(0.5 * (N + N.T))
    detected = int(np.sum(lam_N > _RANK_RTOL * max(lam_N.max(), 0.0)))
    if m > detected:
        raise RankError(
            f"requested rank {m} exceeds detected rank {detected} of N",
            detected_rank=detected,
        )
    basis = gen_eig_top(N, M, m)
    tau = 1.0 - 1.0 / basis.values
    return SdrBasis(
        W=basis.vectors, tau=tau, zeta=zeta, method=method,
        slice_sizes=tuple(slice_sizes) if slice_sizes is not None else None,
    )


def _sqrt_from_eig(eig) -> np.ndarray:
    lam = np.clip(eig.values, 0.0, None)
    return (eig.vectors * np.sqrt(lam)) @ eig.vectors.T


def _pinv_sqrt_from_eig(eig, rtol=1e-12) -> np.ndarray:
    lam = np.clip(eig.values, 0.0, None)
    if lam[0] <= 0:
        raise SingularityError("kernel matrix is numerically zero")
    inv = np.zeros_like(lam)
    keep = lam > rtol * lam[0]
    inv[keep] = 1.0 / np.sqrt(lam[keep])
    return (eig.vectors * inv) @ eig.vectors.T


def _estimate_from_inner(K: GramCache, inner, zeta, m, method, sizes) -> SdrBasis:
    """Solve the subspace problem in the square-root-of-K parameterization.

    Writing M = K^{1/2} (K^{1/2} inner K^{1/2} + n zeta I) K^{1/2} and
    N = K^{1/2} (K^{1/2} Gamma K^{1/2}) K^{1/2}, the pencil is congruent to
    one whose left-hand matrix is bounded below by n zeta I, so whitening
    stays well posed even when K itself is numerically rank deficient
    (which K inner K + n zeta K is not: its smallest eigenvalues scale with
    those of K). Solutions map back through the truncated inverse square
    root of K; the optimum places no mass on the truncated directions
    because they contribute nothing to the objective numerator.
    """
    n = K.n
    S = _sqrt_from_eig(K.eig)
    CS = S - S.mean(axis=0, keepdims=True)
    Nt = CS.T @ CS
    Mt = S @ inner @ S + n * zeta * np.eye(n)
    Mt = 0.5 * (Mt + Mt.T)
    lam_N = np.linalg.eigvalsh(Nt)
    detected = int(np.sum(lam_N > _RANK_RTOL * max(lam_N.max(), 0.0)))
    if m > detected:
        raise RankError(
            f"requested rank {m} exceeds detected rank {detected} of N",
            detected_rank=detected,
        )
    basis = gen_eig_top(Nt, Mt, m)
    W = _pinv_sqrt_from_eig(K.eig) @ basis.vectors
    tau = 1.0 - 1.0 / basis.values
    return SdrBasis(
        W=W, tau=tau, zeta=zeta, method=method,
        slice_sizes=tuple(sizes) if sizes is not None else None,
    )


def sdr_loglik(W, M, N) -> float:
    """g(W) = -(n/2) log [det(W^T M W) / det(W^T N W)]; basis invariant."""
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    sm, ldm = np.linalg.slogdet(W.T @ M @ W)
    sn, ldn = np.linalg.slogdet(W.T @ N @ W)
    if sm <= 0 or sn <= 0:
        raise SingularityError("projected matrix is singular in sdr_loglik")
    return -0.5 * n * (ldm - ldn)


def rank_bound(n, delta) -> float:
    """High-probability lower bound on the smallest informative tau.

    The count of tau values exceeding this bound suggests the subspace rank;
    the returned value may be negative for tiny n (report-clamp at zero).
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    return 1.0 / n - math.sqrt(8.0 / n**3 * math.log(2.0 / delta))


def suggest_rank(tau, n, delta=0.05) -> int:
    """Count of tau values exceeding the rank bound."""
    bound = rank_bound(n, delta)
    return int(np.sum(np.asarray(tau, dtype=float) > bound))


def default_zeta(K: GramCache) -> float:
    """1e-4 trace(K)/n; keeps M positive definite at a scale-free size."""
    return 1e-4 * float(np.trace(K.K)) / K.n


def default_slices(m, n, n_classes=None) -> int:
    """max(m+2, 10) for regression, the class count for classification."""
    if n_classes is not None:
        return int(n_classes)
    return min(max(m + 2, 10), n)


def response_kernel(y) -> np.ndarray:
    """RBF Gram matrix on standardized responses, median-heuristic scale."""
    y = np.asarray(y, dtype=float).ravel()[:, None]
    sd = y.std()
    ys = (y - y.mean()) / (sd if sd > 0 else 1.0)
    spec = KernelSpec("rbf", lengthscale=median_heuristic(ys))
    return gram(spec, ys, ys)


def fit_sdr(K: GramCache, y, m, method="sliced", slices=None, zeta=None,
            zeta1=None, n_classes=None) -> SdrBasis:
    """Full pipeline: assemble the middle matrix by the chosen route, then
    solve in the square-root parameterization (numerically equivalent to
    estimate_basis on the assembled (M, N) pair but stable for Gram
    matrices of any conditioning).

    method is "sliced" or "response_kernel". slices overrides the default
    slice count; zeta/zeta1 override the trace-scaled defaults.
    """
    y = np.asarray(y, dtype=float).ravel()
    if len(y) != K.n:
        raise DimensionError("y length does not match the Gram matrix")
    zeta = default_zeta(K) if zeta is None else float(zeta)
    if zeta <= 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    if method == "sliced":
        s = default_slices(m, K.n, n_classes) if slices is None else int(slices)
        plan = make_slices(y, s)
        inner = _block_centering(plan, K.n)
        sizes = plan.sizes
    elif method == "response_kernel":
        Ky = response_kernel(y)
        if zeta1 is None:
            zeta1 = 1e-4 * float(np.trace(Ky)) / K.n
        inner = _response_inner(K.n, Ky, zeta1)
        sizes = None
    else:
        raise DomainError(f"unknown SDR method {method!r}")
    return _estimate_from_inner(K, inner, zeta, m, method, sizes)
