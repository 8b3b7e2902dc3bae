"""Gamma-kernel estimation of a density and its derivative on the positive semi-axis."""

from .bandwidth import (
    Bandwidth,
    BandwidthLaw,
    BandwidthSource,
    DensityFunctionals,
    PdfFunctionals,
    functionals_of,
    optimal_bandwidth,
    pdf_functionals_of,
    pdf_law_bandwidth,
    rule_of_thumb,
)
from .distributions import Gamma, Maxwell, ReferenceDistribution, Weibull, parse_distribution
from .errors import (
    DegenerateSampleError,
    DivergedFunctionalError,
    DomainError,
    GammaKernelError,
    GenerationError,
    IngestionError,
    UsageError,
)
from .estimator import (
    EvalGrid,
    Sample,
    SampleMode,
    Which,
    default_grid,
    density_estimate,
    derivative_estimate,
    estimate_on_grid,
    read_sample,
)
from .kernel import gamma_kernel, gamma_kernel_derivative, log_correction, shape_param
from .simulation import (
    AR1Config,
    DataMode,
    ErrorSummary,
    MHConfig,
    StudyConfig,
    ar1_chain,
    error_metric,
    mh_chain,
    replication_study,
)
from .special import digamma, ln_gamma
from .theory import (
    MixingSpec,
    covariance_bound,
    covariance_constants,
    mise_leading_term,
    mise_upper_bound_dependent,
    mixing_integral,
    pointwise_P,
)

__version__ = "0.1.0"
