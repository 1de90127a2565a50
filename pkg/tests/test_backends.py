"""Backend equivalence: the numba kernels and the pure-numpy fallback must
agree everywhere to a few ulps, and the env flag must select the fallback."""
import os
import subprocess
import sys

import numpy as np
import pytest

from lsnfit._kernels import _numpy_impl as ref

try:
    from lsnfit._kernels import _numba_impl as acc
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")


def _rel_diff(a, b):
    return np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300))


class TestScalarKernelAgreement:
    def test_erf_family(self):
        x = np.linspace(-26.0, 26.0, 15001)
        assert _rel_diff(ref.erfc(x.copy()), acc.erfc(x.copy())) < 5e-15
        x = np.linspace(-5.0, 200.0, 15001)
        assert _rel_diff(ref.erfcx(x.copy()), acc.erfcx(x.copy())) < 5e-15

    def test_normal_family(self):
        x = np.linspace(-37.0, 37.0, 15001)
        for name in ("norm_pdf", "norm_cdf", "norm_ccdf", "norm_logcdf"):
            a = getattr(ref, name)(x.copy())
            b = getattr(acc, name)(x.copy())
            assert _rel_diff(a, b) < 5e-15, name

    def test_quantile(self):
        p = np.linspace(1e-12, 1.0 - 1e-12, 20001)
        a = ref.norm_ppf(p.copy())
        b = acc.norm_ppf(p.copy())
        assert np.max(np.abs(a - b)) < 1e-13

    def test_owens_t(self):
        h = np.linspace(-12.0, 12.0, 4001)
        for a_par in (0.05, 0.6, 1.0, 2.5, 40.0, -1.5):
            got = _rel_diff(ref.owens_t(h.copy(), a_par),
                            acc.owens_t(h.copy(), a_par))
            assert got < 2e-13, a_par

    def test_skew_normal(self):
        z = np.linspace(-26.0, 10.0, 4001)
        for lam in (0.0, 0.4, 2.0, 9.0, -3.0):
            for fn in ("sn_cdf", "sn_ccdf"):
                a = getattr(ref, fn)(z.copy(), lam)
                b = getattr(acc, fn)(z.copy(), lam)
                assert _rel_diff(a, b) < 5e-13, (fn, lam)
            # log values near zero admit only absolute agreement
            a = ref.sn_logcdf(z.copy(), lam)
            b = acc.sn_logcdf(z.copy(), lam)
            np.testing.assert_allclose(a, b, rtol=5e-13, atol=1e-12)

    def test_chunk_kernels(self):
        rng = np.random.default_rng(1)
        u = rng.random((4000, 6)) * (1 - 2e-6) + 1e-6
        mu = rng.normal(size=6)
        a_mat = rng.normal(size=(6, 6))
        chol = np.linalg.cholesky(a_mat @ a_mat.T + 6 * np.eye(6))
        xa = ref.chunk_components(u, mu, chol)
        xb = acc.chunk_components(u, mu, chol)
        np.testing.assert_allclose(xa, xb, rtol=1e-12, atol=1e-12)
        sa = ref.chunk_sums(u, mu, chol)
        sb = acc.chunk_sums(u, mu, chol)
        np.testing.assert_allclose(sa, sb, rtol=1e-12)


class TestBackendSelection:
    def test_default_is_numba(self):
        env = {k: v for k, v in os.environ.items()
               if k != "LSNFIT_DISABLE_NUMBA"}
        r = subprocess.run(
            [sys.executable, "-c", "import lsnfit; print(lsnfit.BACKEND)"],
            capture_output=True, text=True, env=env)
        assert r.stdout.strip() == "numba"

    def test_env_flag_selects_numpy(self):
        env = dict(os.environ, LSNFIT_DISABLE_NUMBA="1")
        r = subprocess.run(
            [sys.executable, "-c", "import lsnfit; print(lsnfit.BACKEND)"],
            capture_output=True, text=True, env=env)
        assert r.stdout.strip() == "numpy"

    def test_numpy_backend_full_pipeline(self):
        env = dict(os.environ, LSNFIT_DISABLE_NUMBA="1")
        code = (
            "import lsnfit, numpy as np\n"
            "spec = lsnfit.LognormalSumSpec.homogeneous(4, 0.0, 6.0, 0.5)\n"
            "r = lsnfit.fit_lsn(spec)\n"
            "nat = lsnfit.build_natural(spec)\n"
            "e = lsnfit.sample_sum(nat, 20000, 1)\n"
            "m = lsnfit.compare(lambda l: lsnfit.lsn_cdf(l, r.params), e, [0.5])\n"
            "print(r.params.lam, m.ks_distance)\n"
        )
        r = subprocess.run([sys.executable, "-c", code], capture_output=True,
                           text=True, env=env)
        assert r.returncode == 0, r.stderr
        lam, ks = (float(v) for v in r.stdout.split())
        assert 0.0 <= lam < 1.0
        assert ks < 0.02
