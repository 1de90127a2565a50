"""Kernel backend selection.

The numba backend is the default. Set LSNFIT_DISABLE_NUMBA=1 to force the
pure-numpy implementation; it is also used automatically when numba is not
importable. Both backends expose the same array-in/array-out functions and
agree to a few ulps.
"""
import os

_want_numpy = os.environ.get("LSNFIT_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)

if _want_numpy:
    from . import _numpy_impl as _impl
else:
    try:
        from . import _numba_impl as _impl
    except ImportError:
        from . import _numpy_impl as _impl

BACKEND = _impl.BACKEND
erfc = _impl.erfc
erfcx = _impl.erfcx
norm_pdf = _impl.norm_pdf
norm_cdf = _impl.norm_cdf
norm_ccdf = _impl.norm_ccdf
norm_logcdf = _impl.norm_logcdf
norm_ppf = _impl.norm_ppf
owens_t = _impl.owens_t
sn_cdf = _impl.sn_cdf
sn_ccdf = _impl.sn_ccdf
sn_logcdf = _impl.sn_logcdf
chunk_components = _impl.chunk_components
chunk_sums = _impl.chunk_sums

__all__ = [
    "BACKEND", "erfc", "erfcx", "norm_pdf", "norm_cdf", "norm_ccdf",
    "norm_logcdf", "norm_ppf", "owens_t", "sn_cdf", "sn_ccdf", "sn_logcdf",
    "chunk_components", "chunk_sums",
]
