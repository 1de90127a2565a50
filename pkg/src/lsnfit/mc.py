"""Monte Carlo oracle for the correlated lognormal sum.

Sampling is chunked: chunk c of a run with seed s draws its uniforms from a
counter-based generator keyed by (s, c), so the stream is reproducible
bit-for-bit for a fixed (seed, n_samples, chunk_size) regardless of thread
count, and chunks could be generated in any order. Normal variates come
from the inverse cdf applied to open-interval uniforms (one 64-bit draw
each), which keeps the draw count per chunk exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .corrstruct import NaturalParams
from .errors import DomainError, InputError, NonConvergence

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class EmpiricalCdf:
    """Sorted sum samples (linear domain)."""

    sorted_samples: np.ndarray
    n: int

    def __post_init__(self):
        s = np.asarray(self.sorted_samples, dtype=np.float64)
        s.flags.writeable = False
        object.__setattr__(self, "sorted_samples", s)
        object.__setattr__(self, "n", int(s.shape[0]))


@dataclass(frozen=True)
class ComparisonMetrics:
    """Fit-vs-sample accuracy: KS distance and per-level quantile gaps (dB).

    ``db_deviation[i]`` is 10*log10(q_fit / q_emp) at ``levels[i]``, NaN for
    levels the sample cannot resolve.
    """

    ks_distance: float
    db_deviation: np.ndarray
    levels: np.ndarray


def _chunk_uniforms(seed, chunk_index, count):
    key = np.array([seed, chunk_index], dtype=np.uint64)
    raw = np.random.Philox(key=key).random_raw(count)
    # (k + 0.5) * 2^-53 with k in [0, 2^53): open-interval uniforms
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * (2.0 ** -53)


def _iter_chunks(nat, n_samples, seed, chunk_size):
    if n_samples < 1:
        raise InputError(f"need n_samples >= 1, got {n_samples}")
    if chunk_size < 1:
        raise InputError(f"need chunk_size >= 1, got {chunk_size}")
    seed = int(seed)
    if seed < 0:
        raise InputError(f"need a nonnegative seed, got {seed}")
    n = nat.n
    done = 0
    c = 0
    while done < n_samples:
        b = min(chunk_size, n_samples - done)
        u = _chunk_uniforms(seed, c, b * n).reshape(b, n)
        yield u
        done += b
        c += 1


def sample_sum(nat: NaturalParams, n_samples, seed, chunk_size=DEFAULT_CHUNK) -> EmpiricalCdf:
    """Draw sums of exp of correlated Gaussians; returns them sorted."""
    out = np.empty(int(n_samples))
    done = 0
    for u in _iter_chunks(nat, int(n_samples), seed, int(chunk_size)):
        b = u.shape[0]
        out[done:done + b] = K.chunk_sums(u, nat.mu, nat.chol)
        done += b
    out.sort()
    return EmpiricalCdf(sorted_samples=out, n=int(n_samples))


def sample_components(nat: NaturalParams, n_samples, seed, chunk_size=DEFAULT_CHUNK):
    """The underlying correlated Gaussian components, in generation order.

    Same uniform stream as sample_sum for identical (seed, chunk_size);
    summing exp over rows reproduces that run up to summation-order
    rounding.
    """
    out = np.empty((int(n_samples), nat.n))
    done = 0
    for u in _iter_chunks(nat, int(n_samples), seed, int(chunk_size)):
        b = u.shape[0]
        out[done:done + b] = K.chunk_components(u, nat.mu, nat.chol)
        done += b
    return out


def ecdf_at(e: EmpiricalCdf, x):
    """Right-continuous empirical cdf by binary search."""
    pos = np.searchsorted(e.sorted_samples, np.asarray(x, dtype=np.float64),
                          side="right")
    out = pos / e.n
    return float(out) if np.ndim(x) == 0 else out


def quantile(e: EmpiricalCdf, p):
    """Order statistic at ceil(p*n)."""
    if not (0.0 < p < 1.0):
        raise DomainError(f"quantile level must be in (0, 1), got {p}")
    k = int(math.ceil(p * e.n))
    return float(e.sorted_samples[max(k, 1) - 1])


def ks_distance(cdf_values_at_sorted, n):
    """Largest |F_fit - F_emp| over the sample points, with the empirical
    cdf taken right-continuously (i/n at the i-th order statistic)."""
    f = np.asarray(cdf_values_at_sorted, dtype=np.float64)
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(np.max(np.abs(f - i / n)))


def _invert_cdf(cdf_evaluator, p, x_lo, x_hi, tol=1e-10, maxiter=200):
    """Bisection for the fitted quantile in the log domain."""
    lo, hi = math.log(x_lo), math.log(x_hi)
    flo = float(cdf_evaluator(math.exp(lo)))
    fhi = float(cdf_evaluator(math.exp(hi)))
    it = 0
    while flo > p:
        lo -= 5.0
        flo = float(cdf_evaluator(math.exp(lo)))
        it += 1
        if it > maxiter:
            raise NonConvergence(f"cannot bracket quantile {p} from below")
    while fhi < p:
        hi += 5.0
        fhi = float(cdf_evaluator(math.exp(hi)))
        it += 1
        if it > maxiter:
            raise NonConvergence(f"cannot bracket quantile {p} from above")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = float(cdf_evaluator(math.exp(mid)))
        if abs(fm - p) <= tol or (hi - lo) < 1e-13:
            return math.exp(mid)
        if fm < p:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def compare(cdf_evaluator, e: EmpiricalCdf, levels) -> ComparisonMetrics:
    """KS distance over all sample points plus dB quantile gaps at ``levels``.

    Levels must be resolvable by the sample: 1/n < level < 1 - 1/n.
    """
    levels = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    lo_ok = 1.0 / e.n
    if np.any(levels <= lo_ok) or np.any(levels >= 1.0 - lo_ok):
        raise DomainError(
            f"levels must lie strictly inside (1/n, 1-1/n) = ({lo_ok:.3g}, "
            f"{1 - lo_ok:.3g}) for n={e.n}")
    f = np.asarray(cdf_evaluator(e.sorted_samples), dtype=np.float64)
    ks = ks_distance(f, e.n)
    dev = np.empty(levels.shape)
    for i, p in enumerate(levels):
        q_emp = quantile(e, float(p))
        q_fit = _invert_cdf(cdf_evaluator, float(p),
                            float(e.sorted_samples[0]),
                            float(e.sorted_samples[-1]))
        dev[i] = 10.0 * (math.log10(q_fit) - math.log10(q_emp))
    return ComparisonMetrics(ks_distance=ks, db_deviation=dev, levels=levels)
