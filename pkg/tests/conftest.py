import numpy as np
import pytest

import lsnfit
from lsnfit import _kernels as K


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Touch every kernel once so JIT compilation happens outside timed tests."""
    x = np.linspace(-3.0, 3.0, 7)
    K.erfc(x.copy())
    K.erfcx(x.copy())
    K.norm_pdf(x.copy())
    K.norm_cdf(x.copy())
    K.norm_ccdf(x.copy())
    K.norm_logcdf(x.copy())
    K.norm_ppf(np.linspace(0.01, 0.99, 7))
    K.owens_t(x.copy(), 0.5)
    K.owens_t(x.copy(), 2.5)
    K.sn_cdf(np.array([-9.0, -1.0, 0.0, 2.0]), 3.0)
    K.sn_ccdf(np.array([-1.0, 2.0]), 3.0)
    spec = lsnfit.LognormalSumSpec.homogeneous(3, 0.0, 6.0, 0.5)
    nat = lsnfit.build_natural(spec)
    lsnfit.sample_sum(nat, 256, seed=0)
    lsnfit.sample_components(nat, 256, seed=0)
