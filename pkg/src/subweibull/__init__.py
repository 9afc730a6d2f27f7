"""Sub-Weibull distributions: tail functions, samplers, moment and tail-index
estimation, concentration bounds, and Bayesian MLP prior experiments."""

from .core import (
    TailParams,
    log_quantile,
    symmetric_subweibull_isf,
    symmetric_subweibull_survival,
    weibull_cdf,
    weibull_quantile,
    weibull_survival,
)
from .errors import DegenerateSampleError, DomainError, SubWeibullError, ValidityError
from .sampling import (
    RngStream,
    SampleSet,
    read_sample_csv,
    sample_gaussian,
    sample_symmetric_subweibull,
    sample_uniform,
    sample_weibull,
    write_sample_csv,
)
from .moments import (
    MomentGrowthFit,
    MomentProfile,
    analytic_abs_moment,
    empirical_moment_norm,
    fit_theta_from_moments,
    moment_growth_profile,
)
from .tail_estimation import TailEstimate, estimate_theta, order_statistics_desc, qq_data
from .concentration import (
    AuditReport,
    ConstantChain,
    boucheron_bound,
    calibrate_K4,
    chain_from_K2,
    confidence_radius,
    property_audit,
    sum_tail_bound,
)

__version__ = "0.1.0"
