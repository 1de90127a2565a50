"""Natural-scale Gaussian structure behind a sum of correlated lognormals.

Takes the user-facing dB parameterization (per-component mean/std in dB
plus a correlation matrix), builds the natural-log mean vector and
covariance matrix, and derives the precision-matrix quantities that control
the tail behaviour of the sum: row sums, the reduced system restricted to
rows with nonzero row sum, and the weight vector of the reduced system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch, EmptyReducedSet, InputError, InvalidSigma,
    NonPositiveDefinite, SingularMatrix,
)

#: dB-to-natural scale factor: X_natural = XI * X_dB.
XI = math.log(10.0) / 10.0

_SYM_TOL = 1e-12


def _readonly(a, dtype=np.float64):
    a = np.asarray(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LognormalSumSpec:
    """Problem statement: N correlated lognormal components in dB units.

    ``corr`` is the correlation matrix of the underlying Gaussian (dB-domain)
    components. It must be symmetric with unit diagonal; strict positive
    definiteness is only required once a fit or a Cholesky factor is needed.
    """

    n: int
    mu_db: np.ndarray
    sigma_db: np.ndarray
    corr: np.ndarray

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise InputError(f"need at least one component, got n={n}")
        mu = np.atleast_1d(np.asarray(self.mu_db, dtype=np.float64))
        sig = np.atleast_1d(np.asarray(self.sigma_db, dtype=np.float64))
        corr = np.asarray(self.corr, dtype=np.float64)
        if mu.shape != (n,) or sig.shape != (n,):
            raise DimensionMismatch(
                f"mu_db/sigma_db must have length n={n}, "
                f"got {mu.shape} and {sig.shape}")
        if corr.shape != (n, n):
            raise DimensionMismatch(f"corr must be {n}x{n}, got {corr.shape}")
        if not np.all(np.isfinite(mu)) or not np.all(np.isfinite(corr)):
            raise InputError("non-finite entries in spec")
        if not np.all(np.isfinite(sig)) or np.any(sig <= 0.0):
            raise InvalidSigma("every sigma_db must be finite and > 0")
        if np.max(np.abs(corr - corr.T)) > _SYM_TOL:
            raise InputError(f"corr not symmetric within {_SYM_TOL}")
        if np.any(np.abs(corr) > 1.0 + _SYM_TOL):
            raise InputError("corr entries must lie in [-1, 1]")
        # normalize: exact symmetry, unit diagonal, clipped entries
        corr = np.clip(0.5 * (corr + corr.T), -1.0, 1.0)
        np.fill_diagonal(corr, 1.0)
        object.__setattr__(self, "mu_db", _readonly(mu))
        object.__setattr__(self, "sigma_db", _readonly(sig))
        object.__setattr__(self, "corr", _readonly(corr))

    @classmethod
    def homogeneous(cls, n, mu_db, sigma_db, rho):
        """Equicorrelated components with common mean and spread."""
        corr = np.full((n, n), float(rho))
        np.fill_diagonal(corr, 1.0)
        return cls(n=n, mu_db=np.full(n, float(mu_db)),
                   sigma_db=np.full(n, float(sigma_db)), corr=corr)


@dataclass(frozen=True)
class NaturalParams:
    """Natural-log-scale mean vector, covariance matrix and its factor.

    ``chol`` is lower triangular with ``chol @ chol.T == m_cov``. In the
    semidefinite case (perfectly correlated components) it is a triangular
    factor of the rank-deficient covariance rather than a strict Cholesky
    factor.
    """

    mu: np.ndarray
    m_cov: np.ndarray
    chol: np.ndarray

    @property
    def n(self):
        return self.mu.shape[0]

    @property
    def sigma2(self):
        return np.diag(self.m_cov)


def build_natural(spec: LognormalSumSpec, *, allow_semidefinite=False) -> NaturalParams:
    """Convert a dB-domain spec into natural units and factor the covariance.

    Raises NonPositiveDefinite when the covariance has no Cholesky factor;
    with ``allow_semidefinite=True`` a positive semidefinite covariance
    (e.g. a correlation of exactly 1) is factored through its eigensystem
    instead, which is what Monte Carlo sampling needs.
    """
    mu = XI * spec.mu_db
    sig = XI * spec.sigma_db
    m_cov = spec.corr * np.outer(sig, sig)
    try:
        chol = np.linalg.cholesky(m_cov)
    except np.linalg.LinAlgError:
        if not allow_semidefinite:
            raise NonPositiveDefinite(
                "covariance matrix is not positive definite "
                "(perfectly correlated components? merge them into a single "
                "component with scaled mean instead)") from None
        w, v = np.linalg.eigh(m_cov)
        tol = 1e-12 * max(w[-1], 0.0)
        if w[0] < -max(tol, 1e-300):
            raise NonPositiveDefinite(
                f"covariance has negative eigenvalue {w[0]:.3e}") from None
        f = v * np.sqrt(np.clip(w, 0.0, None))
        # rotate the square root back to lower-triangular form
        r = np.linalg.qr(f.T, mode="r")
        chol = (r * np.sign(np.where(np.diag(r) == 0.0, 1.0, np.diag(r)))[:, None]).T
    return NaturalParams(mu=_readonly(mu), m_cov=_readonly(m_cov),
                         chol=_readonly(chol))


@dataclass(frozen=True)
class PrecisionSummary:
    """Precision matrix B = M^-1 and the reduced system on nonzero row sums.

    ``reduced_index`` lists (strictly increasing, original indices) the rows
    whose row sum is nonzero relative to ``zero_tol``; ``b_tilde`` is the
    inverse of the covariance restricted to those rows/columns. ``w`` is the
    reduced weight vector, proportional to the restricted covariance's row
    sums and normalized to total 1. ``assumption_ok`` records whether every
    excluded direction couples to w through B (the regularity condition the
    tail-slope formulas need); it is reported, not enforced.
    """

    b: np.ndarray
    row_sums: np.ndarray
    reduced_index: np.ndarray
    b_tilde: np.ndarray
    b_tilde_row_sums: np.ndarray
    sum_b_tilde: float
    max_diag_b_tilde: float
    w: np.ndarray
    assumption_ok: bool
    zero_tol: float = field(default=1e-10)


def _spd_inverse(m, what):
    try:
        L = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise SingularMatrix(f"{what} is not positive definite") from None
    linv = np.linalg.solve(L, np.eye(m.shape[0]))
    b = linv.T @ linv
    return 0.5 * (b + b.T)


def precision_summary(nat: NaturalParams, zero_tol: float = 1e-10) -> PrecisionSummary:
    """Invert the covariance and summarize its row-sum structure.

    A row sum B_i counts as zero when |B_i| < zero_tol * max_j |B_j|.
    """
    n = nat.n
    b = _spd_inverse(nat.m_cov, "covariance matrix")
    row_sums = b.sum(axis=1)
    scale = np.max(np.abs(row_sums))
    if not np.isfinite(scale) or scale <= 0.0:
        raise EmptyReducedSet("all precision row sums vanish")
    keep = np.abs(row_sums) >= zero_tol * scale
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        raise EmptyReducedSet("all precision row sums vanish")
    if idx.size == n:
        b_tilde = b
    else:
        b_tilde = _spd_inverse(nat.m_cov[np.ix_(idx, idx)], "reduced covariance")
    bt_row_sums = b_tilde.sum(axis=1)
    sum_bt = float(bt_row_sums.sum())
    if sum_bt <= 0.0:
        raise SingularMatrix(f"reduced precision row sums total {sum_bt:.3e} <= 0")
    # w = B~^-1 1 / (1^T B~^-1 1); B~^-1 is just the restricted covariance
    m_rows = nat.m_cov[np.ix_(idx, idx)].sum(axis=1)
    w = m_rows / m_rows.sum()
    assumption_ok = True
    if idx.size < n:
        w_pad = np.zeros(n)
        w_pad[idx] = w
        bw = b @ w_pad
        for i in range(n):
            if keep[i]:
                continue
            e = np.zeros(n)
            e[i] = 1.0
            if abs((e - w_pad) @ bw) <= zero_tol:
                assumption_ok = False
                break
    return PrecisionSummary(
        b=_readonly(b), row_sums=_readonly(row_sums),
        reduced_index=_readonly(idx, dtype=np.int64),
        b_tilde=_readonly(b_tilde), b_tilde_row_sums=_readonly(bt_row_sums),
        sum_b_tilde=sum_bt, max_diag_b_tilde=float(np.max(np.diag(b_tilde))),
        w=_readonly(w), assumption_ok=assumption_ok, zero_tol=float(zero_tol),
    )
