"""Low-rank Gaussian process regression on a supervised kernel subspace.

The model places a Gaussian prior with covariance Sigma_beta on the m
coefficients of the projected feature map Pi(z) = (kappa(z, X) - mean
correction) W, adds a ridge-regularized affine mean Pi(z) alpha + c, and
observes y with noise variance sigma2. Training runs expectation
maximization whose per-iteration cost is dominated by materializing the
n x n inverse of V = Pi Sigma_beta Pi^T + sigma2 I through its low-rank
factorization, so one iteration costs O(n^2 m).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, NumericalError, RankError, SingularityError
from .kernels import GramCache, KernelSpec, gram
from .linalg import matrix_power, woodbury_inverse
from .serialize import doc_text, read_doc, require as _require, write_atomic

_LOG_2PI = math.log(2.0 * math.pi)
_VAR_FLOOR = 1e-12

logger = logging.getLogger("sigp")

MODEL_FORMAT = "sigp-model-v1"


@dataclass(frozen=True)
class SigpModel:
    """Trained model; immutable and safe for concurrent predict calls.

    Delta is the posterior coefficient covariance (Sigma_beta^{-1} +
    Pi^T Pi / sigma2)^{-1}; it is derived from the other fields and is
    rebuilt rather than serialized. beta is the posterior mean of the
    coefficients, needed to evaluate the predictive mean without y.
    """

    kernel: KernelSpec
    X_train: np.ndarray
    W: np.ndarray
    Sigma_beta: np.ndarray
    sigma2: float
    alpha: np.ndarray
    c: float
    beta: np.ndarray
    train_K_row_means: np.ndarray
    Delta: np.ndarray

    def __post_init__(self):
        for name in ("X_train", "W", "Sigma_beta", "alpha", "beta",
                     "train_K_row_means", "Delta"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        object.__setattr__(self, "c", float(self.c))
        n, m = self.W.shape
        if self.X_train.ndim != 2 or self.X_train.shape[0] != n:
            raise DimensionError("X_train must have one row per column of K")
        if not 1 <= m <= n:
            raise DimensionError(f"rank m={m} must lie in [1, n={n}]")
        if self.Sigma_beta.shape != (m, m) or self.Delta.shape != (m, m):
            raise DimensionError("Sigma_beta and Delta must be m x m")
        if self.alpha.shape != (m,) or self.beta.shape != (m,):
            raise DimensionError("alpha and beta must be length-m vectors")
        if self.train_K_row_means.shape != (n,):
            raise DimensionError("train_K_row_means must be a length-n vector")
        if self.sigma2 <= 0:
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")
        try:
            np.linalg.cholesky(self.Sigma_beta)
        except np.linalg.LinAlgError as exc:
            raise SingularityError("Sigma_beta must be positive definite") from exc

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def d(self) -> int:
        return self.X_train.shape[1]

    @property
    def m(self) -> int:
        return self.W.shape[1]


@dataclass(frozen=True)
class PredictiveDistribution:
    mean: np.ndarray
    variance: np.ndarray


@dataclass
class EmTrace:
    """Per-iteration diagnostics; loglik[0] is the value at initialization.

    loglik records the observed-data marginal used for the convergence and
    monotonicity checks; complete_loglik records the penalized data fit at
    the posterior-mode coefficients under the same parameters (a different,
    not necessarily monotone, quantity kept for inspection).
    """

    loglik: list = field(default_factory=list)
    complete_loglik: list = field(default_factory=list)
    n_iter: int = 0
    converged: bool = False
    sigma2_reverts: int = 0
    sigma2_floored: int = 0
    sigma_beta_jittered: int = 0
    stopped_on_decrease: bool = False


@dataclass(frozen=True)
class EmInit:
    Sigma_beta: np.ndarray
    sigma2: float
    alpha: np.ndarray
    c: float


@dataclass(frozen=True)
class EmConfig:
    max_iter: int = 500
    tol: float = 1e-6
    xi: float = 1e-4
    init: EmInit | None = None


def projection_parts(kernel: KernelSpec, X_train, col_means, W, Z) -> np.ndarray:
    """Pi(Z) = (kappa(Z, X_train) - 1 col_means^T) W, one row per z."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    Kzx = gram(kernel, Z, np.asarray(X_train, dtype=float))
    return (Kzx - np.asarray(col_means, dtype=float)[None, :]) @ np.asarray(W, dtype=float)


def projection(model: SigpModel, Z) -> np.ndarray:
    return projection_parts(model.kernel, model.X_train, model.train_K_row_means, model.W, Z)


def sigp_prior_density(K: GramCache, K_nu, p, f_values) -> float:
    """Log density of f_values under the zero-mean prior on function values.

    The covariance is the kernel-power sample covariance built from K and
    K_nu; a jitter of 1e-10 trace/n is added before factorization.
    """
    from .kernels import igp_covariance

    f = np.asarray(f_values, dtype=float).ravel()
    n = K.n
    if f.shape != (n,):
        raise DimensionError(f"f_values must have length {n}, got {f.shape}")
    cov = igp_covariance(K, K_nu, p)
    cov = cov + (1e-10 * np.trace(cov) / n) * np.eye(n)
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularityError("prior covariance is singular even after jitter") from exc
    half = np.linalg.solve(L, f)
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    return -0.5 * (n * _LOG_2PI + logdet + float(half @ half))


def _delta_from(Lambda, Sigma_beta, sigma2):
    """Delta = sigma2 (sigma2 Sigma_beta^{-1} + Lambda)^{-1}, symmetrized."""
    m = Lambda.shape[0]
    Sb_inv = np.linalg.solve(Sigma_beta, np.eye(m))
    G = np.linalg.solve(sigma2 * Sb_inv + Lambda, np.eye(m))
    G = 0.5 * (G + G.T)
    return sigma2 * G, G


def _marginal_parts(Pi, y, alpha, c, Sigma_beta, sigma2) -> float:
    """log N(y | Pi alpha + c 1, Pi Sigma_beta Pi^T + sigma2 I) in O(n m^2)."""
    op = woodbury_inverse(sigma2, Pi, Sigma_beta)
    r = y - Pi @ alpha - c
    return -0.5 * (len(y) * _LOG_2PI + op.logdet_v() + op.quad(r))


def _complete_loglik_parts(Pi, Lambda, y, alpha, c, Sigma_beta, sigma2) -> float:
    """Penalized fit at the posterior-mode coefficients (diagnostic only)."""
    r = y - Pi @ alpha - c
    _, G = _delta_from(Lambda, Sigma_beta, sigma2)
    beta = G @ (Pi.T @ r)
    _, logdet_sb = np.linalg.slogdet(Sigma_beta)
    quad_prior = float(beta @ np.linalg.solve(Sigma_beta, beta))
    eps = r - Pi @ beta
    return -0.5 * (logdet_sb + len(y) * math.log(sigma2)
                   + quad_prior + float(eps @ eps) / sigma2)


def marginal_loglik(model: SigpModel, K: GramCache, y) -> float:
    """Observed-data log marginal likelihood of y under the model."""
    y = np.asarray(y, dtype=float).ravel()
    Pi = K.centered @ model.W
    return _marginal_parts(Pi, y, model.alpha, model.c, model.Sigma_beta, model.sigma2)


def em_fit(K: GramCache, y, basis, config: EmConfig | None = None):
    """Fit by expectation maximization; returns (SigpModel, EmTrace).

    basis is a fitted subspace (anything with a W attribute) or a plain
    n x m matrix with full column rank. Each iteration materializes the
    dense inverse of V from its rank-m factorization, refits the affine
    mean by generalized least squares with the coefficient ridge xi,
    takes the posterior moments of the coefficients, and updates
    (Sigma_beta, sigma2). If an update would lower the observed-data
    marginal likelihood, the sigma2 step is undone for that iteration;
    if the decrease persists the whole iteration is rolled back and the
    loop stops.
    """
    config = config or EmConfig()
    if config.xi <= 0:
        raise DomainError(f"xi must be positive, got {config.xi}")
    if config.max_iter < 0:
        raise DomainError("max_iter must be non-negative")
    y = np.asarray(y, dtype=float).ravel()
    n = K.n
    if y.shape != (n,):
        raise DimensionError(f"y must have length {n}, got {y.shape}")
    W = np.asarray(getattr(basis, "W", basis), dtype=float)
    if W.ndim != 2 or W.shape[0] != n:
        raise DimensionError(f"W must be {n} x m, got {W.shape}")
    m = W.shape[1]
    sv = np.linalg.svd(W, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise RankError("W must have full column rank",
                        detected_rank=int(np.sum(sv > 1e-10 * sv[0])))

    Pi = K.centered @ W
    Lambda = Pi.T @ Pi
    Lambda = 0.5 * (Lambda + Lambda.T)
    WKW = W.T @ K.K @ W
    WKW = 0.5 * (WKW + WKW.T)
    ones = np.ones(n)
    # Buffers reused by every iteration: the dense V^{-1} and its product
    # with [1 | Pi], so the per-iteration cost stays a small number of
    # passes over one n x n array instead of fresh allocations.
    ones_Pi = np.empty((n, m + 1))
    ones_Pi[:, 0] = 1.0
    ones_Pi[:, 1:] = Pi
    vinv_buf = np.empty((n, n))
    applied_buf = np.empty((n, m + 1))

    if config.init is not None:
        Sigma_beta = np.asarray(config.init.Sigma_beta, dtype=float).copy()
        sigma2 = float(config.init.sigma2)
        alpha = np.asarray(config.init.alpha, dtype=float).copy()
        c = float(config.init.c)
        if Sigma_beta.shape != (m, m) or alpha.shape != (m,):
            raise DimensionError("init shapes do not match the basis rank")
        if sigma2 <= 0:
            raise DomainError("initial sigma2 must be positive")
    else:
        var_y = max(float(np.var(y)), _VAR_FLOOR)
        Sigma_beta = var_y * np.eye(m)
        sigma2 = max(0.5 * var_y, _VAR_FLOOR)
        alpha = np.zeros(m)
        c = float(np.mean(y))

    trace = EmTrace()
    ll = _marginal_parts(Pi, y, alpha, c, Sigma_beta, sigma2)
    trace.loglik.append(ll)
    trace.complete_loglik.append(
        _complete_loglik_parts(Pi, Lambda, y, alpha, c, Sigma_beta, sigma2))

    for _ in range(config.max_iter):
        op = woodbury_inverse(sigma2, Pi, Sigma_beta)
        Vinv = op.dense(out=vinv_buf)
        np.matmul(Vinv, ones_Pi, out=applied_buf)
        v1 = applied_buf[:, 0]
        s11 = float(v1 @ ones)
        if s11 <= 0:
            raise NumericalError("1^T V^{-1} 1 is not positive")
        VPi = applied_buf[:, 1:]
        Pv1 = Pi.T @ v1
        A = Pi.T @ VPi - np.outer(Pv1, Pv1) / s11 + n * config.xi * WKW
        b = VPi.T @ y - Pv1 * (float(v1 @ y) / s11)
        try:
            alpha_new = np.linalg.solve(0.5 * (A + A.T), b)
        except np.linalg.LinAlgError as exc:
            raise SingularityError("mean-function system is singular; increase xi") from exc
        c_new = float((y - Pi @ alpha_new) @ v1) / s11
        r = y - Pi @ alpha_new - c_new
        Delta, G = _delta_from(Lambda, Sigma_beta, sigma2)
        beta = G @ (Pi.T @ r)
        Sigma_beta_new = np.outer(beta, beta) + Delta
        Sigma_beta_new = 0.5 * (Sigma_beta_new + Sigma_beta_new.T)
        try:
            np.linalg.cholesky(Sigma_beta_new)
        except np.linalg.LinAlgError:
            jitter = 1e-10 * np.trace(Sigma_beta_new) / m
            Sigma_beta_new = Sigma_beta_new + jitter * np.eye(m)
            trace.sigma_beta_jittered += 1
            logger.info("Sigma_beta lost positive definiteness; added jitter %.3e", jitter)
        eps = r - Pi @ beta
        sigma2_new = sigma2 + (float(eps @ eps) - sigma2**2 * op.trace()) / n
        if sigma2_new < _VAR_FLOOR:
            sigma2_new = _VAR_FLOOR
            trace.sigma2_floored += 1
            warnings.warn("sigma2 update collapsed; floored at 1e-12",
                          RuntimeWarning, stacklevel=2)

        # Decreases within rounding slack (well inside the 1e-8 monotonicity
        # contract) are accepted; genuine decreases first retry with the
        # previous sigma2, then roll the iteration back entirely.
        slack = 1e-9
        ll_new = _marginal_parts(Pi, y, alpha_new, c_new, Sigma_beta_new, sigma2_new)
        if ll_new < ll - slack:
            ll_keep = _marginal_parts(Pi, y, alpha_new, c_new, Sigma_beta_new, sigma2)
            if ll_keep >= ll - slack:
                sigma2_new, ll_new = sigma2, ll_keep
                trace.sigma2_reverts += 1
                logger.info("sigma2 update decreased the marginal likelihood; kept previous value")
            else:
                trace.stopped_on_decrease = True
                logger.info("iteration decreased the marginal likelihood; rolled back and stopped")
                break
        alpha, c, Sigma_beta, sigma2 = alpha_new, c_new, Sigma_beta_new, sigma2_new
        trace.n_iter += 1
        trace.loglik.append(ll_new)
        trace.complete_loglik.append(
            _complete_loglik_parts(Pi, Lambda, y, alpha, c, Sigma_beta, sigma2))
        if abs(ll_new - ll) < config.tol * (1.0 + abs(ll_new)):
            trace.converged = True
            ll = ll_new
            break
        ll = ll_new

    Delta, G = _delta_from(Lambda, Sigma_beta, sigma2)
    beta = G @ (Pi.T @ (y - Pi @ alpha - c))
    model = SigpModel(
        kernel=K.kernel, X_train=K.X, W=W, Sigma_beta=Sigma_beta, sigma2=sigma2,
        alpha=alpha, c=c, beta=beta, train_K_row_means=K.col_means, Delta=Delta,
    )
    return model, trace


def posterior_beta(model: SigpModel, K: GramCache, y):
    """Posterior mean and covariance of the subspace coefficients.

    mean = Sigma_beta Pi^T V^{-1} (y - u(X)); the covariance computed the
    same way is checked against the stored Delta and must agree to 1e-9.
    """
    y = np.asarray(y, dtype=float).ravel()
    Pi = K.centered @ model.W
    op = woodbury_inverse(model.sigma2, Pi, model.Sigma_beta)
    r = y - Pi @ model.alpha - model.c
    mean = model.Sigma_beta @ (Pi.T @ op.matvec(r))
    cov = model.Sigma_beta - model.Sigma_beta @ (Pi.T @ op.matmat(Pi)) @ model.Sigma_beta
    cov = 0.5 * (cov + cov.T)
    gap = float(np.max(np.abs(cov - model.Delta)))
    if gap > 1e-9 * (1.0 + float(np.max(np.abs(model.Delta)))):
        raise NumericalError(
            f"posterior covariance disagrees with stored Delta by {gap:.3e}")
    return mean, cov


def predict(model: SigpModel, Z) -> PredictiveDistribution:
    """Predictive mean and per-point variance at new inputs, in O(t n m)."""
    PiZ = projection(model, Z)
    mean = PiZ @ (model.alpha + model.beta) + model.c
    root = matrix_power(model.Delta, 0.5)
    S = PiZ @ root
    variance = np.sum(S * S, axis=1) + model.sigma2
    return PredictiveDistribution(mean=mean, variance=variance)


def model_doc(model: SigpModel) -> dict:
    """Serializable document for one fitted model (no format tag)."""
    return {
        "kernel": {
            "family": model.kernel.family,
            "lengthscale": model.kernel.lengthscale,
            "variance_scale": model.kernel.variance_scale,
        },
        "n": model.n, "d": model.d, "m": model.m,
        "X_train": model.X_train,
        "W": model.W,
        "Sigma_beta": model.Sigma_beta,
        "sigma2": model.sigma2,
        "alpha": model.alpha,
        "c": model.c,
        "beta": model.beta,
        "train_K_row_means": model.train_K_row_means,
    }


def _model_text(model: SigpModel) -> str:
    return doc_text({"format": MODEL_FORMAT, **model_doc(model)})


def save_model(model: SigpModel, path):
    """Serialize with 17-significant-digit decimals; atomic replace on write."""
    write_atomic(path, _model_text(model))


def load_model(path) -> SigpModel:
    """Load a serialized model and rebuild its derived posterior covariance."""
    return model_from_doc(read_doc(path, MODEL_FORMAT))


def model_from_doc(doc: dict) -> SigpModel:
    """Rebuild a model (including its posterior covariance) from a document."""
    kspec = _require(doc, "kernel")
    kernel = KernelSpec(
        family=_require(kspec, "family"),
        lengthscale=float(_require(kspec, "lengthscale")),
        variance_scale=float(_require(kspec, "variance_scale")),
    )
    n, d, m = (int(_require(doc, k)) for k in ("n", "d", "m"))
    X = np.array(_require(doc, "X_train"), dtype=float).reshape(n, d)
    W = np.array(_require(doc, "W"), dtype=float).reshape(n, m)
    Sigma_beta = np.array(_require(doc, "Sigma_beta"), dtype=float).reshape(m, m)
    sigma2 = float(_require(doc, "sigma2"))
    alpha = np.array(_require(doc, "alpha"), dtype=float).reshape(m)
    c = float(_require(doc, "c"))
    beta = np.array(_require(doc, "beta"), dtype=float).reshape(m)
    row_means = np.array(_require(doc, "train_K_row_means"), dtype=float).reshape(n)
    cache = GramCache(kernel, X)
    Pi = cache.centered @ W
    Lambda = Pi.T @ Pi
    Lambda = 0.5 * (Lambda + Lambda.T)
    Delta, _ = _delta_from(Lambda, Sigma_beta, sigma2)
    return SigpModel(
        kernel=kernel, X_train=X, W=W, Sigma_beta=Sigma_beta, sigma2=sigma2,
        alpha=alpha, c=c, beta=beta, train_K_row_means=row_means, Delta=Delta,
    )
