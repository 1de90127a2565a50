"""lsnfit: log skew normal fits to sums of correlated lognormals.

Fits the three-parameter log skew normal to the distribution of
sum_i 10^(X_i/10) for jointly Gaussian X_i (dB-domain shadowing model) by
matching the sum's exact first two moments together with its lower tail
slope on lognormal probability scale, and validates the fit against a
built-in Monte Carlo sampler and a moment-matched lognormal baseline.
"""
from ._kernels import BACKEND
from .baselines import LognormalParams, fit_fw, fw_ccdf, fw_cdf
from .corrstruct import (
    XI, LognormalSumSpec, NaturalParams, PrecisionSummary,
    build_natural, precision_summary,
)
from .dist import (
    LsnParams, SnParams, inv_std_normal_cdf, inv_std_normal_logcdf, lsn_ccdf,
    lsn_cdf, lsn_logcdf, lsn_moments, lsn_pdf, owens_t, sn_ccdf, sn_cdf,
    sn_logcdf, sn_pdf, std_normal_ccdf, std_normal_cdf, std_normal_pdf,
)
from .errors import (
    DimensionMismatch, DomainError, EmptyReducedSet, InputError, InvalidSigma,
    LsnError, MomentOverflow, NoRoot, NonConvergence, NonPositiveDefinite,
    NumericalError, SingularMatrix,
)
from .fit import (
    FitReport, SumMoments, fit_lsn, lambda_equation_rhs, lambda_seed,
    solve_lambda, sum_moments,
)
from .mc import (
    ComparisonMetrics, EmpiricalCdf, compare, ecdf_at, ks_distance, quantile,
    sample_components, sample_sum,
)
from .probscale import (
    TailSlopes, empirical_probit_slope, lsn_tail_slopes, scln_tail_slopes,
    to_probit_scale,
)
from .scenario import Grid, Scenario, load_scenario

__version__ = "0.1.0"
