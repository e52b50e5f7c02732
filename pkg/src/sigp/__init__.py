"""Low-rank Gaussian process regression on a supervised subspace of the RKHS.

The model projects the kernel feature map onto a small basis found by
sufficient dimension reduction, trains variance components with an EM
loop whose per-iteration cost is quadratic in the sample count, and
produces Gaussian predictive distributions. An exact GP baseline,
metrics, CSV and synthetic data utilities, and a CLI round it out.
"""

from .baseline import ExactGpModel, gp_fit, gp_predict, load_gp_model, save_gp_model
from .data_io import (
    Dataset,
    FeatureStats,
    load_csv,
    save_csv,
    split,
    standardize,
    synth_four_class,
    synth_sinusoid,
)
from .errors import (
    DataError,
    DimensionError,
    DomainError,
    NumericalError,
    RankError,
    SigpError,
    SingularityError,
)
from .eval import (
    OneVsRestModel,
    accuracy,
    f1,
    load_ovr_model,
    mse,
    nlpd,
    ovr_fit,
    ovr_predict,
    ovr_scores,
    save_ovr_model,
    threshold_binary,
)
from .kernels import (
    GramCache,
    KernelSpec,
    brownian_bridge_eigensystem,
    gram,
    gram_diag,
    igp_covariance,
    median_heuristic,
)
from .model import (
    EmConfig,
    EmTrace,
    PredictiveDistribution,
    SigpModel,
    em_fit,
    load_model,
    marginal_loglik,
    posterior_beta,
    predict,
    save_model,
)
from .sdr import (
    SdrBasis,
    estimate_basis,
    fit_sdr,
    make_slices,
    rank_bound,
    sdr_loglik,
    suggest_rank,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "Dataset",
    "DimensionError",
    "DomainError",
    "EmConfig",
    "EmTrace",
    "ExactGpModel",
    "FeatureStats",
    "GramCache",
    "KernelSpec",
    "NumericalError",
    "OneVsRestModel",
    "PredictiveDistribution",
    "RankError",
    "SdrBasis",
    "SigpError",
    "SigpModel",
    "SingularityError",
    "accuracy",
    "brownian_bridge_eigensystem",
    "em_fit",
    "estimate_basis",
    "f1",
    "fit_sdr",
    "gp_fit",
    "gp_predict",
    "gram",
    "gram_diag",
    "igp_covariance",
    "load_csv",
    "load_gp_model",
    "load_model",
    "load_ovr_model",
    "make_slices",
    "marginal_loglik",
    "median_heuristic",
    "mse",
    "nlpd",
    "ovr_fit",
    "ovr_predict",
    "ovr_scores",
    "posterior_beta",
    "predict",
    "rank_bound",
    "save_csv",
    "save_gp_model",
    "save_model",
    "save_ovr_model",
    "sdr_loglik",
    "split",
    "standardize",
    "suggest_rank",
    "synth_four_class",
    "synth_sinusoid",
    "threshold_binary",
]
