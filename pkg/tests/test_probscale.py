"""Probit-scale transform and tail-slope tests."""
import math

import numpy as np
import pytest

from lsnfit import (
    DomainError, LognormalSumSpec, LsnParams,
    build_natural, empirical_probit_slope, fit_lsn, lsn_ccdf, lsn_cdf,
    lsn_logcdf, lsn_tail_slopes, precision_summary, scln_tail_slopes,
    std_normal_cdf, to_probit_scale,
)


class TestProbitTransform:
    def test_median(self):
        assert to_probit_scale(0.5) == 0.0

    def test_inverse_round_trip(self):
        assert to_probit_scale(std_normal_cdf(2.0)) == pytest.approx(2.0,
                                                                     abs=1e-9)
        x = np.linspace(-6.0, 6.0, 25)
        np.testing.assert_allclose(to_probit_scale(std_normal_cdf(x)), x,
                                   atol=1e-9)

    def test_lognormal_maps_to_line(self):
        mu, sig = 0.4, 1.3
        xs = np.array([-2.0, -1.0, 0.0, 1.5, 3.0])
        vals = to_probit_scale(std_normal_cdf((xs - mu) / sig))
        np.testing.assert_allclose(vals, (xs - mu) / sig, atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            to_probit_scale(p)


class TestTheoreticalSlopes:
    def test_single_component(self):
        s = 10.0 / math.log(10.0)  # unit natural sigma
        spec = LognormalSumSpec(n=1, mu_db=[0.0], sigma_db=[s],
                                corr=np.eye(1))
        ps = precision_summary(build_natural(spec))
        ts = scln_tail_slopes(ps)
        assert ts.lower == pytest.approx(1.0, rel=1e-13)
        assert ts.upper == pytest.approx(1.0, rel=1e-13)

    def test_iid_lower_slope_scales_sqrt_n(self):
        s = 10.0 / math.log(10.0)
        for n in (2, 8):
            spec = LognormalSumSpec(n=n, mu_db=[0.0] * n, sigma_db=[s] * n,
                                    corr=np.eye(n))
            ts = scln_tail_slopes(precision_summary(build_natural(spec)))
            assert ts.lower == pytest.approx(math.sqrt(n), rel=1e-12)

    def test_half_correlated_2x2(self):
        s = 10.0 / math.log(10.0)
        spec = LognormalSumSpec(
            n=2, mu_db=[0.0, 0.0], sigma_db=[s, s],
            corr=np.array([[1.0, 0.5], [0.5, 1.0]]))
        ts = scln_tail_slopes(precision_summary(build_natural(spec)))
        assert ts.lower == pytest.approx(math.sqrt(4.0 / 3.0), rel=1e-13)
        assert ts.upper == pytest.approx(0.75, rel=1e-13)

    def test_lsn_slopes(self):
        p = LsnParams(lam=0.0, eps=0.0, omega=2.0)
        ts = lsn_tail_slopes(p)
        assert ts.lower == ts.upper == 0.5
        p = LsnParams(lam=1.0, eps=0.0, omega=1.0)
        ts = lsn_tail_slopes(p)
        assert ts.upper == 1.0
        assert ts.lower == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_fitted_lower_slope_equals_sum_lower_slope(self):
        spec = LognormalSumSpec.homogeneous(8, 0.0, 9.0, 0.3)
        ps = precision_summary(build_natural(spec))
        report = fit_lsn(spec)
        assert lsn_tail_slopes(report.params).lower == pytest.approx(
            scln_tail_slopes(ps).lower, rel=1e-12)


class TestEmpiricalProbe:
    def test_lognormal_is_exact_line(self):
        p = LsnParams(lam=0.0, eps=0.0, omega=1.0)
        for x0 in (-3.0, 0.0, 4.0):
            slope = empirical_probit_slope(lambda l: lsn_cdf(l, p), x0, h=1e-3)
            assert slope == pytest.approx(1.0, abs=1e-6)

    def test_lsn_lower_limit(self):
        # the linear cdf underflows at this depth; the log evaluator carries it
        p = LsnParams(lam=2.0, eps=0.0, omega=1.0)
        slope = empirical_probit_slope(
            lambda l: lsn_cdf(l, p), -30.0, h=1e-3,
            logcdf_evaluator=lambda l: lsn_logcdf(l, p))
        assert slope == pytest.approx(math.sqrt(5.0), rel=0.01)

    def test_lsn_upper_limit_needs_complement(self):
        p = LsnParams(lam=2.0, eps=0.0, omega=1.0)
        slope = empirical_probit_slope(
            lambda l: lsn_cdf(l, p), 30.0, h=1e-3,
            ccdf_evaluator=lambda l: lsn_ccdf(l, p))
        assert slope == pytest.approx(1.0, rel=0.01)

    def test_monotone_approach_to_limits(self):
        p = LsnParams(lam=2.0, eps=0.0, omega=1.0)
        lower = [empirical_probit_slope(
            lambda l: lsn_cdf(l, p), x0, h=1e-3,
            logcdf_evaluator=lambda l: lsn_logcdf(l, p))
            for x0 in (-10.0, -20.0, -30.0)]
        errs = [abs(s - math.sqrt(5.0)) for s in lower]
        assert errs[0] > errs[1] > errs[2]
        upper = [empirical_probit_slope(
            lambda l: lsn_cdf(l, p), x0, h=1e-3,
            ccdf_evaluator=lambda l: lsn_ccdf(l, p))
            for x0 in (10.0, 20.0, 30.0)]
        errs = [abs(s - 1.0) for s in upper]
        assert errs[0] > errs[1] > errs[2]

    def test_saturation_raises(self):
        p = LsnParams(lam=2.0, eps=0.0, omega=1.0)
        with pytest.raises(DomainError):
            # cdf saturates to 1.0 at e^30 without a complementary evaluator
            empirical_probit_slope(lambda l: lsn_cdf(l, p), 30.0, h=1e-3)
        with pytest.raises(DomainError):
            empirical_probit_slope(lambda l: 0.0, 0.0, h=1e-3)

    def test_bad_step_rejected(self):
        with pytest.raises(DomainError):
            empirical_probit_slope(lambda l: 0.5, 0.0, h=0.0)
