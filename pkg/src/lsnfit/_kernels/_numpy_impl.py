"""Pure-numpy backend: the same approximations as the numba backend,
vectorized with masks instead of per-element branches.

Used when numba is unavailable or explicitly disabled; also serves as the
reference the benchmark compares against.
"""
import numpy as np

from ._constants import (
    ERF_A, ERF_B, ERF_C, ERF_D, ERF_P, ERF_Q,
    ERF_SMALL_BOUND, ERFC_ZERO_BOUND, ERFCX_LARGE_BOUND, INV_SQRT_PI,
    PPF_A, PPF_B, PPF_C, PPF_D, PPF_P_LOW,
    GL_NODES, GL_WEIGHTS, N_GL,
    OWENS_H_SWITCH, OWENS_T_EDGES, OWENS_U_EDGES,
    SN_TAIL_EDGES, SN_TAIL_RATIO,
    SQRT1_2, INV_SQRT_2PI, LOG_SQRT_2PI, TWO_PI,
)

BACKEND = "numpy"


def _erf_small(x):
    z = x * x
    xnum = ERF_A[4] * z
    xden = z.copy()
    for i in range(3):
        xnum = (xnum + ERF_A[i]) * z
        xden = (xden + ERF_B[i]) * z
    return x * (xnum + ERF_A[3]) / (xden + ERF_B[3])


def _erfcx_mid(y):
    # y >= 0.46875
    out = np.empty_like(y)
    lo = y <= 4.0
    if lo.any():
        yy = y[lo]
        xnum = ERF_C[8] * yy
        xden = yy.copy()
        for i in range(7):
            xnum = (xnum + ERF_C[i]) * yy
            xden = (xden + ERF_D[i]) * yy
        out[lo] = (xnum + ERF_C[7]) / (xden + ERF_D[7])
    hi = ~lo
    if hi.any():
        yy = y[hi]
        z = 1.0 / (yy * yy)
        xnum = ERF_P[5] * z
        xden = z.copy()
        for i in range(4):
            xnum = (xnum + ERF_P[i]) * z
            xden = (xden + ERF_Q[i]) * z
        r = z * (xnum + ERF_P[4]) / (xden + ERF_Q[4])
        res = (INV_SQRT_PI - r) / yy
        res[yy >= ERFCX_LARGE_BOUND] = INV_SQRT_PI / yy[yy >= ERFCX_LARGE_BOUND]
        out[hi] = res
    return out


def erfc(x):
    y = np.abs(x)
    out = np.empty_like(x)
    small = y <= ERF_SMALL_BOUND
    if small.any():
        out[small] = 1.0 - _erf_small(x[small])
    big = ~small
    if big.any():
        yy = y[big]
        ysq = np.floor(yy * 16.0) / 16.0
        dely = (yy - ysq) * (yy + ysq)
        r = np.exp(-ysq * ysq) * np.exp(-dely) * _erfcx_mid(yy)
        r[yy > ERFC_ZERO_BOUND] = 0.0
        out[big] = np.where(x[big] > 0.0, r, 2.0 - r)
    return out


def erfcx(x):
    y = np.abs(x)
    out = np.empty_like(x)
    small = y <= ERF_SMALL_BOUND
    if small.any():
        out[small] = np.exp(x[small] ** 2) * (1.0 - _erf_small(x[small]))
    big = ~small
    if big.any():
        r = _erfcx_mid(y[big])
        xb = x[big]
        neg = xb < 0.0
        with np.errstate(over="ignore"):
            r = np.where(neg, 2.0 * np.exp(xb * xb) - r, r)
        out[big] = r
    return out


def norm_pdf(x):
    return INV_SQRT_2PI * np.exp(-0.5 * x * x)


def norm_cdf(x):
    return 0.5 * erfc(-x * SQRT1_2)


def norm_ccdf(x):
    return 0.5 * erfc(x * SQRT1_2)


def norm_logcdf(x):
    out = np.empty_like(x)
    hi = x > -1.0
    if hi.any():
        out[hi] = np.log1p(-0.5 * erfc(x[hi] * SQRT1_2))
    lo = ~hi
    if lo.any():
        xl = x[lo]
        out[lo] = -0.5 * xl * xl + np.log(0.5 * erfcx(-xl * SQRT1_2))
    return out


def norm_ppf(p):
    x = np.empty_like(p)
    lo = p < PPF_P_LOW
    hi = p > 1.0 - PPF_P_LOW
    mid = ~(lo | hi)
    if lo.any():
        q = np.sqrt(-2.0 * np.log(p[lo]))
        x[lo] = (((((PPF_C[0] * q + PPF_C[1]) * q + PPF_C[2]) * q + PPF_C[3]) * q
                  + PPF_C[4]) * q + PPF_C[5]) / \
                ((((PPF_D[0] * q + PPF_D[1]) * q + PPF_D[2]) * q + PPF_D[3]) * q + 1.0)
    if hi.any():
        q = np.sqrt(-2.0 * np.log1p(-p[hi]))
        x[hi] = -(((((PPF_C[0] * q + PPF_C[1]) * q + PPF_C[2]) * q + PPF_C[3]) * q
                   + PPF_C[4]) * q + PPF_C[5]) / \
                ((((PPF_D[0] * q + PPF_D[1]) * q + PPF_D[2]) * q + PPF_D[3]) * q + 1.0)
    if mid.any():
        q = p[mid] - 0.5
        r = q * q
        x[mid] = (((((PPF_A[0] * r + PPF_A[1]) * r + PPF_A[2]) * r + PPF_A[3]) * r
                   + PPF_A[4]) * r + PPF_A[5]) * q / \
                 (((((PPF_B[0] * r + PPF_B[1]) * r + PPF_B[2]) * r + PPF_B[3]) * r
                   + PPF_B[4]) * r + 1.0)
    for _ in range(2):
        d = norm_pdf(x)
        step = np.where(d > 0.0, (norm_cdf(x) - p) / np.where(d > 0.0, d, 1.0), 0.0)
        x -= step
    return x


def _owens_t_quad(h, a):
    # 0 < a <= 1 scalar, h >= 0 array; node loop, vectorized over points
    out = np.empty_like(h)
    small = h <= OWENS_H_SWITCH
    if small.any():
        hh = -0.5 * h[small] ** 2
        acc = np.zeros(small.sum())
        for k in range(len(OWENS_T_EDGES) - 1):
            lo = a * OWENS_T_EDGES[k]
            hi = a * OWENS_T_EDGES[k + 1]
            half = 0.5 * (hi - lo)
            mid = 0.5 * (hi + lo)
            for j in range(N_GL):
                t = mid + half * GL_NODES[j]
                acc += GL_WEIGHTS[j] * half * np.exp(hh * t * t) / (1.0 + t * t)
        out[small] = np.exp(hh) * acc / TWO_PI
    big = ~small
    if big.any():
        hb = h[big]
        umax = a * hb
        h2 = hb * hb
        acc = np.zeros(hb.size)
        for k in range(len(OWENS_U_EDGES) - 1):
            lo = np.minimum(OWENS_U_EDGES[k], umax)
            hi = np.minimum(OWENS_U_EDGES[k + 1], umax)
            half = 0.5 * (hi - lo)   # collapses to zero width past umax
            mid = 0.5 * (hi + lo)
            for j in range(N_GL):
                u = mid + half * GL_NODES[j]
                acc += GL_WEIGHTS[j] * half * np.exp(-0.5 * u * u) * h2 / (h2 + u * u)
        out[big] = np.exp(-0.5 * h2) * acc / (TWO_PI * hb)
    return out


def owens_t(h, a):
    if a != a:
        return np.full_like(h, np.nan)
    if a == 0.0:
        return np.zeros_like(h)
    sgn = 1.0
    if a < 0.0:
        sgn = -1.0
        a = -a
    h = np.abs(h)
    out = np.empty_like(h)
    zero = h == 0.0
    if zero.any():
        out[zero] = np.arctan(a) / TWO_PI
    nz = ~zero
    if nz.any():
        hh = h[nz]
        if a <= 1.0:
            out[nz] = _owens_t_quad(hh, a)
        else:
            ah = a * hh
            ch = norm_ccdf(hh)
            cah = norm_ccdf(ah)
            out[nz] = 0.5 * (ch + cah) - ch * cah - _owens_t_quad(ah, 1.0 / a)
    return sgn * out


def _sn_logcdf_lower(z, lam):
    # z < 0 array, lam > 0 scalar; log of the tail integral
    az = -z
    lc0 = norm_logcdf(lam * z)
    lgz = np.log(2.0) - 0.5 * z * z - LOG_SQRT_2PI + lc0
    kappa = (1.0 + lam * lam) * az
    acc = np.zeros_like(z)
    for k in range(len(SN_TAIL_EDGES) - 1):
        lo = SN_TAIL_EDGES[k] / kappa
        hi = SN_TAIL_EDGES[k + 1] / kappa
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for j in range(N_GL):
            s = mid + half * GL_NODES[j]
            d = -0.5 * s * s - az * s + norm_logcdf(lam * (z - s)) - lc0
            acc += GL_WEIGHTS[j] * half * np.exp(d)
    out = np.full_like(z, -np.inf)
    pos = acc > 0.0
    out[pos] = lgz[pos] + np.log(acc[pos])
    return out


def _sn_cdf_lower(z, lam):
    lg = _sn_logcdf_lower(z, lam)
    out = np.zeros_like(z)
    ok = lg > -745.0
    out[ok] = np.exp(lg[ok])
    return out


def _sn_cdf_pos(z, lam):
    c = norm_cdf(z)
    f = c - 2.0 * owens_t(z, lam)
    tail = (z < 0.0) & (f < SN_TAIL_RATIO * c)
    if tail.any():
        f[tail] = _sn_cdf_lower(z[tail], lam)
    return np.clip(f, 0.0, 1.0)


def _sn_ccdf_pos(z, lam):
    return np.clip(norm_ccdf(z) + 2.0 * owens_t(z, lam), 0.0, 1.0)


def sn_cdf(z, lam):
    if lam == 0.0:
        return norm_cdf(z)
    if lam < 0.0:
        return _sn_ccdf_pos(-z, -lam)
    return _sn_cdf_pos(z, lam)


def sn_ccdf(z, lam):
    if lam == 0.0:
        return norm_ccdf(z)
    if lam < 0.0:
        return _sn_cdf_pos(-z, -lam)
    return _sn_ccdf_pos(z, lam)


def sn_logcdf(z, lam):
    # log-domain cdf, finite far beyond where the linear cdf underflows
    if lam == 0.0:
        return norm_logcdf(z)
    if lam < 0.0:
        v = sn_cdf(z, lam)
        out = np.full_like(z, -np.inf)
        pos = v > 0.0
        with np.errstate(divide="ignore"):
            out[pos] = np.log(v[pos])
        # heavy lower tail of a left-skewed variate: cdf -> 2 Phi(z)
        out[~pos] = np.log(2.0) + norm_logcdf(z[~pos])
        return out
    out = np.empty_like(z)
    up = z >= 0.0
    if up.any():
        out[up] = np.log1p(-_sn_ccdf_pos(z[up], lam))
    dn = ~up
    if dn.any():
        zd = z[dn]
        c = norm_cdf(zd)
        f = c - 2.0 * owens_t(zd, lam)
        direct = (f >= SN_TAIL_RATIO * c) & (f > 0.0)
        res = np.empty_like(zd)
        with np.errstate(divide="ignore"):
            res[direct] = np.log(f[direct])
        if (~direct).any():
            res[~direct] = _sn_logcdf_lower(zd[~direct], lam)
        out[dn] = res
    return out


def chunk_components(u, mu, chol):
    z = norm_ppf(u.reshape(-1)).reshape(u.shape)
    return z @ chol.T + mu


def chunk_sums(u, mu, chol):
    return np.exp(chunk_components(u, mu, chol)).sum(axis=1)
