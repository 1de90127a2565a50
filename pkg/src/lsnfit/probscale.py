"""Lognormal probability scale: the probit transform and tail slopes.

Plotting a cdf F through x -> Phi^-1(F(e^x)) (x the natural-log abscissa)
maps every lognormal onto a straight line with slope 1/sigma. On this scale
the correlated lognormal sum and the log skew normal both approach straight
asymptotes, whose slopes are available in closed form from the precision
row sums and from (lam, omega) respectively. The empirical probe here
measures those slopes by central differences, for diagnostics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .corrstruct import PrecisionSummary
from .dist import LsnParams, inv_std_normal_cdf, inv_std_normal_logcdf
from .errors import DomainError


@dataclass(frozen=True)
class TailSlopes:
    """Asymptotic probit-scale slopes; lower >= upper for right-skewed sums."""

    upper: float
    lower: float


def to_probit_scale(cdf_value):
    """Phi^-1 of a cdf value; compose with F(e^x) for the lognormal scale."""
    return inv_std_normal_cdf(cdf_value)


def scln_tail_slopes(ps: PrecisionSummary) -> TailSlopes:
    """Theoretical probit-scale tail slopes of the correlated lognormal sum.

    lower: sqrt of the total of the reduced precision row sums.
    upper: reciprocal of the largest reduced precision diagonal, as the
    closed form states it; for a single component this disagrees
    dimensionally with the exact 1/sigma line (it gives 1/sigma^2) and is
    used here only as a seed/diagnostic quantity.
    """
    return TailSlopes(upper=1.0 / ps.max_diag_b_tilde,
                      lower=math.sqrt(ps.sum_b_tilde))


def lsn_tail_slopes(p: LsnParams) -> TailSlopes:
    """Probit-scale tail slopes of the log skew normal: 1/omega above,
    sqrt(1+lam^2)/omega below."""
    return TailSlopes(upper=1.0 / p.omega,
                      lower=math.hypot(1.0, p.lam) / p.omega)


def empirical_probit_slope(cdf_evaluator, x0, h=1e-3, ccdf_evaluator=None,
                           logcdf_evaluator=None):
    """Central-difference slope of x -> Phi^-1(F(e^x)) at x0.

    ``cdf_evaluator`` maps a linear-domain value to its cdf. The plain cdf
    saturates in double precision at the probe extremes: to 1.0 far in the
    upper tail, to 0.0 far in the lower tail. Passing ``ccdf_evaluator``
    covers the upper side through Phi^-1(F) = -Phi^-1(1-F); passing
    ``logcdf_evaluator`` covers the lower side through the log-probability
    quantile. Raises DomainError when the available evaluations saturate at
    a probe point.
    """
    if h <= 0.0:
        raise DomainError(f"probe step must be > 0, got {h}")

    def probit(x):
        c = float(cdf_evaluator(math.exp(x)))
        if 0.0 < c <= 0.5:
            return to_probit_scale(c)
        if c > 0.5 and ccdf_evaluator is not None:
            cc = float(ccdf_evaluator(math.exp(x)))
            if 0.0 < cc < 1.0:
                return -to_probit_scale(cc)
        if 0.0 < c < 1.0:
            return to_probit_scale(c)
        if c <= 0.0 and logcdf_evaluator is not None:
            lp = float(logcdf_evaluator(math.exp(x)))
            if math.isfinite(lp):
                return inv_std_normal_logcdf(lp)
        raise DomainError(
            f"cdf saturates to {c} at probe x={x}; slope undefined there")

    return (probit(x0 + h) - probit(x0 - h)) / (2.0 * h)
