"""Moment-matched lognormal baseline tests."""
import math

import numpy as np
import pytest

from lsnfit import (
    XI, LognormalSumSpec, build_natural, fit_fw, fw_ccdf, fw_cdf,
    precision_summary, scln_tail_slopes, std_normal_cdf, sum_moments,
    to_probit_scale,
)


class TestFitFw:
    def test_single_component_self_inversion(self):
        spec = LognormalSumSpec(n=1, mu_db=[2.0], sigma_db=[7.0],
                                corr=np.eye(1))
        p = fit_fw(spec)
        assert p.mu_z == pytest.approx(2.0 * XI, rel=1e-12)
        assert p.sigma2_z == pytest.approx((7.0 * XI) ** 2, rel=1e-12)
        assert p.mu_db == pytest.approx(2.0, rel=1e-12)
        assert p.sigma_db == pytest.approx(7.0, rel=1e-12)

    def test_two_iid_unit_sigma(self):
        s = 10.0 / math.log(10.0)
        spec = LognormalSumSpec(n=2, mu_db=[0.0, 0.0], sigma_db=[s, s],
                                corr=np.eye(2))
        p = fit_fw(spec)
        # ln(1 + (e-1)/2) = ln((e+1)/2)
        assert p.sigma2_z == pytest.approx(0.62011450695827752, rel=1e-12)

    def test_exact_moment_reproduction(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            n = int(rng.integers(1, 15))
            spec = LognormalSumSpec.homogeneous(
                n, float(rng.uniform(-5, 5)), float(rng.uniform(1, 12)),
                float(rng.uniform(0, 0.9)))
            sm = sum_moments(build_natural(spec))
            p = fit_fw(spec)
            mean = math.exp(p.mu_z + 0.5 * p.sigma2_z)
            var = math.exp(2 * p.mu_z + p.sigma2_z) * math.expm1(p.sigma2_z)
            assert mean == pytest.approx(sm.mean, rel=1e-12)
            assert var == pytest.approx(sm.variance, rel=1e-12)


class TestFwCdf:
    def test_median(self):
        spec = LognormalSumSpec.homogeneous(3, 0.0, 6.0, 0.5)
        p = fit_fw(spec)
        assert fw_cdf(math.exp(p.mu_z), p) == pytest.approx(0.5, abs=1e-15)

    def test_limits_and_support(self):
        p = fit_fw(LognormalSumSpec.homogeneous(3, 0.0, 6.0, 0.5))
        assert fw_cdf(0.0, p) == 0.0
        assert fw_cdf(-1.0, p) == 0.0
        assert fw_ccdf(0.0, p) == 1.0
        assert fw_cdf(1e-14, p) < 1e-10
        assert fw_cdf(1e14, p) > 1.0 - 1e-12

    def test_single_component_matches_input_lognormal(self):
        spec = LognormalSumSpec(n=1, mu_db=[1.0], sigma_db=[5.0],
                                corr=np.eye(1))
        p = fit_fw(spec)
        l = np.geomspace(1e-3, 1e3, 20)
        want = std_normal_cdf((np.log(l) - 1.0 * XI) / (5.0 * XI))
        np.testing.assert_allclose(fw_cdf(l, p), want, atol=1e-12)

    def test_cdf_ccdf_complement(self):
        p = fit_fw(LognormalSumSpec.homogeneous(4, 0.0, 9.0, 0.3))
        l = np.geomspace(1e-4, 1e6, 101)
        np.testing.assert_allclose(fw_cdf(l, p) + fw_ccdf(l, p), 1.0,
                                   atol=1e-14)

    def test_probit_line_slope_between_sum_slopes(self):
        # heterogeneous case: the baseline's single slope must sit strictly
        # inside the sum's lower/upper slope range
        spec = LognormalSumSpec(
            n=3, mu_db=[0.0, 2.0, -1.0], sigma_db=[4.0, 8.0, 12.0],
            corr=np.array([[1.0, 0.3, 0.1], [0.3, 1.0, 0.2],
                           [0.1, 0.2, 1.0]]))
        p = fit_fw(spec)
        xs = np.array([-2.0, 0.0, 2.0])
        probits = np.array([to_probit_scale(fw_cdf(math.exp(x), p))
                            for x in xs])
        slopes = np.diff(probits) / np.diff(xs)
        np.testing.assert_allclose(slopes, 1.0 / math.sqrt(p.sigma2_z),
                                   rtol=1e-9)
        ts = scln_tail_slopes(precision_summary(build_natural(spec)))
        line = 1.0 / math.sqrt(p.sigma2_z)
        # shallower than the steep lower asymptote, steeper than the true
        # upper asymptote 1/sigma_max of the dominant component
        assert 1.0 / (XI * 12.0) < line < ts.lower
