"""Fitting over-dispersed count distributions to frequency data.

Closed-form maximum likelihood for zero-inflated/deflated geometric and
hurdle geometric models, numerical MLE for the negative binomial shape,
chi-squared goodness of fit with tail pooling, AIC comparison, and a
simulation harness.
"""

__version__ = "0.1.0"

from .dist import (
    CountModel,
    Geometric,
    Hurdle,
    Moments,
    NegBinomial,
    Poisson,
    ZeroInflated,
    log_pmf,
    make_hurdle,
    make_zero_inflated,
    moments,
    pgf,
    pmf,
)
from .errors import (
    AllZerosError,
    CountFitError,
    DegenerateBinningError,
    DomainError,
    EstimationError,
    InputFormatError,
    InvalidModelError,
    NoSignChangeError,
    ParameterBoundError,
    UnderDispersedError,
)
from .estimate import (
    FitResult,
    FrequencySample,
    SolverInfo,
    hg_zig_reparam,
    loglik,
    mle_geometric,
    mle_hg,
    mle_nb,
    mle_poisson,
    mle_zig,
    mom_nb,
    score_residuals,
    summarize,
    zig_hg_reparam,
)
from .gof import (
    ComparisonReport,
    GofResult,
    aic,
    chi2_statistic,
    compare_models,
    expected_counts,
    gof_test,
    pool_tail,
)
from .sim import RecoveryReport, grid_oracle, recovery_experiment, sample
from .specfn import chi2_survival, digamma, ln_gamma, trigamma
