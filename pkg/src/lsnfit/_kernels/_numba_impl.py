"""numba backend: scalar kernels compiled with @njit, array entry points with prange.

Every array entry point is embarrassingly parallel over elements, so results
are bitwise independent of the thread count.
"""
import math

import numpy as np
from numba import njit, prange

from ._constants import (
    ERF_A, ERF_B, ERF_C, ERF_D, ERF_P, ERF_Q,
    ERF_SMALL_BOUND, ERFC_ZERO_BOUND, ERFCX_LARGE_BOUND, INV_SQRT_PI,
    PPF_A, PPF_B, PPF_C, PPF_D, PPF_P_LOW,
    GL_NODES, GL_WEIGHTS, N_GL,
    OWENS_H_SWITCH, OWENS_T_EDGES, OWENS_U_EDGES,
    SN_TAIL_EDGES, SN_TAIL_RATIO,
    SQRT1_2, INV_SQRT_2PI, LOG_SQRT_2PI, TWO_PI,
)

BACKEND = "numba"

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _erf_small_s(x):
    # |x| <= 0.46875
    z = x * x
    xnum = ERF_A[4] * z
    xden = z
    for i in range(3):
        xnum = (xnum + ERF_A[i]) * z
        xden = (xden + ERF_B[i]) * z
    return x * (xnum + ERF_A[3]) / (xden + ERF_B[3])


@njit(**_JIT)
def _erfcx_mid_s(y):
    # scaled complementary error function, y >= 0.46875
    if y <= 4.0:
        xnum = ERF_C[8] * y
        xden = y
        for i in range(7):
            xnum = (xnum + ERF_C[i]) * y
            xden = (xden + ERF_D[i]) * y
        return (xnum + ERF_C[7]) / (xden + ERF_D[7])
    if y >= ERFCX_LARGE_BOUND:
        return INV_SQRT_PI / y
    z = 1.0 / (y * y)
    xnum = ERF_P[5] * z
    xden = z
    for i in range(4):
        xnum = (xnum + ERF_P[i]) * z
        xden = (xden + ERF_Q[i]) * z
    r = z * (xnum + ERF_P[4]) / (xden + ERF_Q[4])
    return (INV_SQRT_PI - r) / y


@njit(**_JIT)
def _erfc_s(x):
    y = abs(x)
    if y <= ERF_SMALL_BOUND:
        return 1.0 - _erf_small_s(x)
    if y > ERFC_ZERO_BOUND:
        return 0.0 if x > 0.0 else 2.0
    # split exp(-y^2) to keep the argument reduction exact
    ysq = math.floor(y * 16.0) / 16.0
    dely = (y - ysq) * (y + ysq)
    r = math.exp(-ysq * ysq) * math.exp(-dely) * _erfcx_mid_s(y)
    return r if x > 0.0 else 2.0 - r


@njit(**_JIT)
def _erfcx_s(x):
    y = abs(x)
    if y <= ERF_SMALL_BOUND:
        return math.exp(x * x) * (1.0 - _erf_small_s(x))
    if x < 0.0:
        return 2.0 * math.exp(x * x) - _erfcx_mid_s(y)  # overflows to inf
    return _erfcx_mid_s(y)


@njit(**_JIT)
def _norm_pdf_s(x):
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


@njit(**_JIT)
def _norm_cdf_s(x):
    return 0.5 * _erfc_s(-x * SQRT1_2)


@njit(**_JIT)
def _norm_ccdf_s(x):
    return 0.5 * _erfc_s(x * SQRT1_2)


@njit(**_JIT)
def _norm_logcdf_s(x):
    if x > -1.0:
        return math.log1p(-0.5 * _erfc_s(x * SQRT1_2))
    return -0.5 * x * x + math.log(0.5 * _erfcx_s(-x * SQRT1_2))


@njit(**_JIT)
def _norm_ppf_s(p):
    # rational initial guess, then two Newton polish steps on the cdf
    if p < PPF_P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((PPF_C[0] * q + PPF_C[1]) * q + PPF_C[2]) * q + PPF_C[3]) * q
              + PPF_C[4]) * q + PPF_C[5]) / \
            ((((PPF_D[0] * q + PPF_D[1]) * q + PPF_D[2]) * q + PPF_D[3]) * q + 1.0)
    elif p <= 1.0 - PPF_P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((PPF_A[0] * r + PPF_A[1]) * r + PPF_A[2]) * r + PPF_A[3]) * r
              + PPF_A[4]) * r + PPF_A[5]) * q / \
            (((((PPF_B[0] * r + PPF_B[1]) * r + PPF_B[2]) * r + PPF_B[3]) * r
              + PPF_B[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((PPF_C[0] * q + PPF_C[1]) * q + PPF_C[2]) * q + PPF_C[3]) * q
               + PPF_C[4]) * q + PPF_C[5]) / \
            ((((PPF_D[0] * q + PPF_D[1]) * q + PPF_D[2]) * q + PPF_D[3]) * q + 1.0)
    for _ in range(2):
        d = _norm_pdf_s(x)
        if d <= 0.0:
            break
        x -= (_norm_cdf_s(x) - p) / d
    return x


@njit(**_JIT)
def _owens_t_quad_s(h, a):
    # 0 < a <= 1, h >= 0; exact panel-for-panel with the numpy backend
    if h <= OWENS_H_SWITCH:
        hh = -0.5 * h * h
        acc = 0.0
        for k in range(len(OWENS_T_EDGES) - 1):
            lo = a * OWENS_T_EDGES[k]
            hi = a * OWENS_T_EDGES[k + 1]
            half = 0.5 * (hi - lo)
            mid = 0.5 * (hi + lo)
            for j in range(N_GL):
                t = mid + half * GL_NODES[j]
                acc += GL_WEIGHTS[j] * half * math.exp(hh * t * t) / (1.0 + t * t)
        return math.exp(hh) * acc / TWO_PI
    # substitute u = h*t so the Gaussian factor sets the scale
    umax = a * h
    h2 = h * h
    acc = 0.0
    for k in range(len(OWENS_U_EDGES) - 1):
        lo = min(OWENS_U_EDGES[k], umax)
        hi = min(OWENS_U_EDGES[k + 1], umax)
        if hi <= lo:
            break
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for j in range(N_GL):
            u = mid + half * GL_NODES[j]
            acc += GL_WEIGHTS[j] * half * math.exp(-0.5 * u * u) * h2 / (h2 + u * u)
    return math.exp(-0.5 * h2) * acc / (TWO_PI * h)


@njit(**_JIT)
def _owens_t_s(h, a):
    if a != a or h != h:
        return math.nan
    if a == 0.0:
        return 0.0
    sgn = 1.0
    if a < 0.0:
        sgn = -1.0
        a = -a
    h = abs(h)
    if h == 0.0:
        return sgn * math.atan(a) / TWO_PI
    if a <= 1.0:
        return sgn * _owens_t_quad_s(h, a)
    # reduce a > 1 through the complementary identity (stable for h >= 0)
    ah = a * h
    ch = _norm_ccdf_s(h)
    cah = _norm_ccdf_s(ah)
    return sgn * (0.5 * (ch + cah) - ch * cah - _owens_t_quad_s(ah, 1.0 / a))


@njit(**_JIT)
def _sn_cdf_lower_s(z, lam):
    # z < 0, lam > 0: integrate the density directly, factored in log space
    # so severe cancellation in cdf = Phi - 2T never enters.
    az = -z
    lc0 = _norm_logcdf_s(lam * z)
    lgz = math.log(2.0) - 0.5 * z * z - LOG_SQRT_2PI + lc0
    kappa = (1.0 + lam * lam) * az
    acc = 0.0
    for k in range(len(SN_TAIL_EDGES) - 1):
        lo = SN_TAIL_EDGES[k] / kappa
        hi = SN_TAIL_EDGES[k + 1] / kappa
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for j in range(N_GL):
            s = mid + half * GL_NODES[j]
            d = -0.5 * s * s - az * s + _norm_logcdf_s(lam * (z - s)) - lc0
            acc += GL_WEIGHTS[j] * half * math.exp(d)
    if acc <= 0.0:
        return 0.0
    return math.exp(lgz + math.log(acc))


@njit(**_JIT)
def _sn_cdf_pos_s(z, lam):
    # lam > 0
    c = _norm_cdf_s(z)
    f = c - 2.0 * _owens_t_s(z, lam)
    if z < 0.0 and f < SN_TAIL_RATIO * c:
        return _sn_cdf_lower_s(z, lam)
    if f < 0.0:
        return 0.0
    if f > 1.0:
        return 1.0
    return f


@njit(**_JIT)
def _sn_ccdf_pos_s(z, lam):
    # lam > 0; both terms positive, no cancellation in the upper tail
    f = _norm_ccdf_s(z) + 2.0 * _owens_t_s(z, lam)
    if f < 0.0:
        return 0.0
    if f > 1.0:
        return 1.0
    return f


@njit(**_JIT)
def _sn_cdf_s(z, lam):
    if lam == 0.0:
        return _norm_cdf_s(z)
    if lam < 0.0:
        return _sn_ccdf_pos_s(-z, -lam)  # mirror symmetry in (z, lam)
    return _sn_cdf_pos_s(z, lam)


@njit(**_JIT)
def _sn_logcdf_lower_s(z, lam):
    # log of the tail integral; identical nodes to _sn_cdf_lower_s
    az = -z
    lc0 = _norm_logcdf_s(lam * z)
    lgz = math.log(2.0) - 0.5 * z * z - LOG_SQRT_2PI + lc0
    kappa = (1.0 + lam * lam) * az
    acc = 0.0
    for k in range(len(SN_TAIL_EDGES) - 1):
        lo = SN_TAIL_EDGES[k] / kappa
        hi = SN_TAIL_EDGES[k + 1] / kappa
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for j in range(N_GL):
            s = mid + half * GL_NODES[j]
            d = -0.5 * s * s - az * s + _norm_logcdf_s(lam * (z - s)) - lc0
            acc += GL_WEIGHTS[j] * half * math.exp(d)
    if acc <= 0.0:
        return -math.inf
    return lgz + math.log(acc)


@njit(**_JIT)
def _sn_logcdf_s(z, lam):
    # log-domain cdf, finite far beyond where the linear cdf underflows
    if lam == 0.0:
        return _norm_logcdf_s(z)
    if lam > 0.0:
        if z >= 0.0:
            return math.log1p(-_sn_ccdf_pos_s(z, lam))
        c = _norm_cdf_s(z)
        f = c - 2.0 * _owens_t_s(z, lam)
        if f >= SN_TAIL_RATIO * c and f > 0.0:
            return math.log(f)
        return _sn_logcdf_lower_s(z, lam)
    v = _sn_cdf_s(z, lam)
    if v > 0.0:
        return math.log(v)
    # heavy lower tail of a left-skewed variate: cdf -> 2 Phi(z)
    return math.log(2.0) + _norm_logcdf_s(z)


@njit(**_JIT)
def _sn_ccdf_s(z, lam):
    if lam == 0.0:
        return _norm_ccdf_s(z)
    if lam < 0.0:
        return _sn_cdf_pos_s(-z, -lam)
    return _sn_ccdf_pos_s(z, lam)


# ---------------------------------------------------------------------------
# array entry points


@njit(parallel=True, **_JIT)
def erfc(x):
    out = np.empty_like(x)
    for i in prange(x.size):
        out[i] = _erfc_s(x[i])
    return out


@njit(parallel=True, **_JIT)
def erfcx(x):
    out = np.empty_like(x)
    for i in prange(x.size):
        out[i] = _erfcx_s(x[i])
    return out


@njit(parallel=True, **_JIT)
def norm_pdf(x):
    out = np.empty_like(x)
    for i in prange(x.size):
        out[i] = _norm_pdf_s(x[i])
    return out


@njit(parallel=True, **_JIT)
def norm_cdf(x):
    out = np.empty_like(x)
    for i in prange(x.size):
        out[i] = _norm_cdf_s(x[i])
    return out


@njit(parallel=True, **_JIT)
def norm_ccdf(x):
    out = np.empty_like(x)
    for i in prange(x.size):
        out[i] = _norm_ccdf_s(x[i])
    return out


@njit(parallel=True, **_JIT)
def norm_logcdf(x):
    out = np.empty_like(x)
    for i in prange(x.size):
        out[i] = _norm_logcdf_s(x[i])
    return out


@njit(parallel=True, **_JIT)
def norm_ppf(p):
    out = np.empty_like(p)
    for i in prange(p.size):
        out[i] = _norm_ppf_s(p[i])
    return out


@njit(parallel=True, **_JIT)
def owens_t(h, a):
    out = np.empty_like(h)
    for i in prange(h.size):
        out[i] = _owens_t_s(h[i], a)
    return out


@njit(parallel=True, **_JIT)
def sn_cdf(z, lam):
    out = np.empty_like(z)
    for i in prange(z.size):
        out[i] = _sn_cdf_s(z[i], lam)
    return out


@njit(parallel=True, **_JIT)
def sn_ccdf(z, lam):
    out = np.empty_like(z)
    for i in prange(z.size):
        out[i] = _sn_ccdf_s(z[i], lam)
    return out


@njit(parallel=True, **_JIT)
def sn_logcdf(z, lam):
    out = np.empty_like(z)
    for i in prange(z.size):
        out[i] = _sn_logcdf_s(z[i], lam)
    return out


@njit(parallel=True, **_JIT)
def chunk_components(u, mu, chol):
    # u: (b, n) uniforms in (0,1) -> correlated Gaussian components
    b, n = u.shape
    out = np.empty((b, n))
    for s in prange(b):
        z = np.empty(n)
        for i in range(n):
            z[i] = _norm_ppf_s(u[s, i])
        for i in range(n):
            acc = mu[i]
            for k in range(i + 1):  # chol is lower triangular
                acc += chol[i, k] * z[k]
            out[s, i] = acc
    return out


@njit(parallel=True, **_JIT)
def chunk_sums(u, mu, chol):
    # u: (b, n) uniforms in (0,1) -> sum_i exp(X_i) per sample
    b, n = u.shape
    out = np.empty(b)
    for s in prange(b):
        z = np.empty(n)
        for i in range(n):
            z[i] = _norm_ppf_s(u[s, i])
        tot = 0.0
        for i in range(n):
            acc = mu[i]
            for k in range(i + 1):
                acc += chol[i, k] * z[k]
            tot += math.exp(acc)
        out[s] = tot
    return out
