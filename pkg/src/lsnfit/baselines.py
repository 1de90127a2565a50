"""Moment-matched single-lognormal baseline for the correlated sum.

Inverts the lognormal moment formulas against the sum's exact mean and
variance, so the baseline reproduces both by construction. This is the
comparison foil for the log skew normal fit; on probit scale it is an exact
straight line with slope 1/sqrt(sigma2_z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .corrstruct import XI, LognormalSumSpec, build_natural
from .fit import sum_moments


@dataclass(frozen=True)
class LognormalParams:
    """Natural-scale Gaussian mean/variance of the matched lognormal."""

    mu_z: float
    sigma2_z: float

    @property
    def mu_db(self):
        return self.mu_z / XI

    @property
    def sigma_db(self):
        return math.sqrt(self.sigma2_z) / XI


def fit_fw(spec: LognormalSumSpec) -> LognormalParams:
    """Match a single lognormal to the sum's exact first two moments."""
    sm = sum_moments(build_natural(spec))
    sigma2_z = math.log1p(sm.ratio)
    mu_z = math.log(sm.mean) - 0.5 * sigma2_z
    return LognormalParams(mu_z=mu_z, sigma2_z=sigma2_z)


def _z(l, p):
    l = np.asarray(l, dtype=np.float64)
    pos = l > 0.0
    z = (np.log(np.where(pos, l, 1.0)) - p.mu_z) / math.sqrt(p.sigma2_z)
    return l, pos, z


def fw_cdf(l, p: LognormalParams):
    l, pos, z = _z(l, p)
    val = K.norm_cdf(np.atleast_1d(z).ravel()).reshape(np.shape(z))
    out = np.where(pos, val, 0.0)
    return float(out) if np.ndim(l) == 0 else out


def fw_ccdf(l, p: LognormalParams):
    l, pos, z = _z(l, p)
    val = K.norm_ccdf(np.atleast_1d(z).ravel()).reshape(np.shape(z))
    out = np.where(pos, val, 1.0)
    return float(out) if np.ndim(l) == 0 else out
