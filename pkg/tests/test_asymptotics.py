import numpy as np
import pytest
from scipy import stats as sps

from serialcorr import (
    default_t_n,
    gumbel_cdf,
    gumbel_norming,
    gumbel_quantile,
    l2_variance_plugin,
    sigma0_plugin,
    sigma_h_theoretical,
    simulate,
)
from serialcorr.asymptotics import gumbel_sf
from serialcorr.errors import InsufficientTail, InvalidIndex, LagOutOfRange
from serialcorr.estimators import AcfEstimate, acf_fast
from serialcorr.models import ModelSpec, theoretical_acf


def _ar1_gamma(b, kmax):
    return b ** np.arange(kmax + 1) / (1.0 - b * b)


class TestGumbelNorming:
    def test_m8_against_high_precision(self):
        import mpmath

        mpmath.mp.dps = 40
        lg = mpmath.log(8)
        a_ref = (2 * lg) ** mpmath.mpf("-0.5")
        b_ref = (2 * lg) ** mpmath.mpf("0.5") - (8 * lg) ** mpmath.mpf("-0.5") * (
            mpmath.log(lg) + mpmath.log(4 * mpmath.pi)
        )
        got = gumbel_norming(8)
        assert got.a == pytest.approx(float(a_ref), rel=1e-15)
        assert got.b == pytest.approx(float(b_ref), rel=1e-14)

    def test_smallest_legal_index(self):
        got = gumbel_norming(2)
        assert np.isfinite(got.a) and np.isfinite(got.b)
        assert got.a == pytest.approx((2 * np.log(2)) ** -0.5, rel=1e-15)

    def test_rejects_m_below_two(self):
        with pytest.raises(InvalidIndex):
            gumbel_norming(1)

    def test_monotone_trend(self):
        pairs = [gumbel_norming(m) for m in (10, 100, 1000, 10000)]
        a_vals = [p.a for p in pairs]
        b_vals = [p.b for p in pairs]
        assert all(x > y for x, y in zip(a_vals, a_vals[1:]))
        assert all(x < y for x, y in zip(b_vals, b_vals[1:]))


class TestGumbelDistribution:
    def test_closed_form_at_zero(self):
        assert gumbel_cdf(0.0) == pytest.approx(np.exp(-1.0), rel=1e-15)

    def test_limits_and_monotonicity(self):
        assert gumbel_cdf(40.0) == pytest.approx(1.0, abs=1e-15)
        assert gumbel_cdf(-40.0) == 0.0
        # strictly increasing wherever doubles can resolve the difference
        grid = np.linspace(-5, 8, 200)
        vals = [gumbel_cdf(x) for x in grid]
        assert all(u < v for u, v in zip(vals, vals[1:]))

    def test_quantile_roundtrip(self):
        for p in (0.01, 0.1, 0.5, 0.9, 0.95, 0.999):
            assert gumbel_cdf(gumbel_quantile(p)) == pytest.approx(p, abs=1e-12)

    def test_sf_complements_cdf(self):
        for x in (-3.0, 0.0, 2.5, 10.0):
            assert gumbel_sf(x) == pytest.approx(1.0 - gumbel_cdf(x), abs=1e-15)

    def test_gaussian_maxima_approach_gumbel(self):
        # exact CDF of max_{i<=s} |Z_i| under the (a_{2s}, b_{2s}) norming,
        # evaluated in closed form, approaches the Gumbel curve as s grows
        grid = np.linspace(-2.5, 6.0, 300)
        sup = []
        for s in (100, 1000, 10000, 100000):
            nm = gumbel_norming(2 * s)
            exact = (2.0 * sps.norm.cdf(nm.a * grid + nm.b) - 1.0) ** s
            sup.append(np.max(np.abs(exact - np.exp(-np.exp(-grid)))))
        assert all(u > v for u, v in zip(sup, sup[1:]))
        assert sup[-1] < 0.05


class TestSigmaHTheoretical:
    def test_iid_case(self):
        gamma = np.zeros(30)
        gamma[0] = 2.0
        assert sigma_h_theoretical(gamma, 0) == pytest.approx(4.0, rel=1e-14)
        for h in (1, 2, 5):
            assert sigma_h_theoretical(gamma, h) == 0.0

    def test_ar1_closed_form(self):
        b = 0.5
        gamma = _ar1_gamma(b, 60)
        closed = (1 + b * b) / (1 - b * b) ** 3
        assert sigma_h_theoretical(gamma, 0, tail_tol=1e-8) == pytest.approx(closed, rel=1e-8)

    def test_h_beyond_support_is_zero(self):
        gamma = np.zeros(10)
        gamma[0] = 1.0
        assert sigma_h_theoretical(gamma, 25) == 0.0

    def test_even_in_h(self):
        gamma = _ar1_gamma(0.4, 50)
        for h in (1, 3, 7):
            assert sigma_h_theoretical(gamma, h) == sigma_h_theoretical(gamma, -h)

    def test_cauchy_schwarz(self):
        gamma = _ar1_gamma(0.6, 80)
        s0 = sigma_h_theoretical(gamma, 0)
        assert s0 >= 0
        for h in range(1, 12):
            assert abs(sigma_h_theoretical(gamma, h)) <= s0

    def test_insufficient_tail_raises(self):
        gamma = _ar1_gamma(0.9, 5)  # barely decayed
        with pytest.raises(InsufficientTail):
            sigma_h_theoretical(gamma, 0, tail_tol=1e-10)


def _synthetic_acf(gamma, n=1000):
    gamma = np.asarray(gamma, dtype=float)
    return AcfEstimate(max_lag=gamma.size - 1, gamma=gamma, rho=gamma / gamma[0], centered=False, n=n)


class TestSigma0Plugin:
    def test_white_acf_gives_one(self):
        gamma = np.zeros(20)
        gamma[0] = 3.0
        lrv = sigma0_plugin(_synthetic_acf(gamma), t_n=10)
        assert lrv.sigma0 == 1.0
        assert lrv.sigma0_cov == pytest.approx(9.0, rel=1e-14)
        assert lrv.sigma_h[0] == lrv.sigma0

    def test_iid_monte_carlo_mean_near_one(self):
        rng = np.random.default_rng(21)
        n, t_n, reps = 4000, 15, 500
        vals = np.empty(reps)
        for i in range(reps):
            est = acf_fast(rng.standard_normal(n), t_n)
            vals[i] = sigma0_plugin(est, t_n).sigma0
        assert abs(vals.mean() - 1.0) < 0.05

    def test_ar1_covariance_scale_consistency(self):
        b = 0.5
        ts = simulate(ModelSpec.ar1(b), 20_000, seed=22)
        est = acf_fast(ts, 27, centered=True)
        lrv = sigma0_plugin(est, t_n=27)
        target = sigma_h_theoretical(_ar1_gamma(b, 60), 0)
        assert lrv.sigma0_cov == pytest.approx(target, rel=0.10)

    def test_t_n_out_of_range(self):
        gamma = np.zeros(5)
        gamma[0] = 1.0
        with pytest.raises(LagOutOfRange):
            sigma0_plugin(_synthetic_acf(gamma), t_n=7)

    def test_plugin_consistency_long_run(self):
        b = 0.5
        n = 100_000
        ts = simulate(ModelSpec.ar1(b), n, seed=23)
        t_n = default_t_n(n, 200)
        est = acf_fast(ts, t_n, centered=True)
        target = sigma_h_theoretical(_ar1_gamma(b, 80), 0)
        assert sigma0_plugin(est, t_n).sigma0_cov == pytest.approx(target, rel=0.05)


class TestL2VariancePlugin:
    def test_iid_truth_both_scales(self):
        gamma = np.zeros(30)
        gamma[0] = 2.0
        est = _synthetic_acf(gamma)
        assert l2_variance_plugin(est, t_n=10) == pytest.approx(32.0, rel=1e-13)
        assert l2_variance_plugin(est, t_n=10, scale="correlation") == pytest.approx(2.0, rel=1e-13)

    def test_nonnegative_by_construction(self):
        rng = np.random.default_rng(31)
        est = acf_fast(rng.standard_normal(500), 40)
        assert l2_variance_plugin(est, t_n=7, h_max=20) >= 0.0

    def test_ar1_matches_theoretical(self):
        b = 0.5
        gamma = _ar1_gamma(b, 100)
        target = 2.0 * sum(
            sigma_h_theoretical(gamma, h) ** 2 * (1 if h == 0 else 2) for h in range(0, 40)
        )
        ts = simulate(ModelSpec.ar1(b), 20_000, seed=32)
        t_n = 27
        est = acf_fast(ts, 2 * t_n, centered=True)
        got = l2_variance_plugin(est, t_n=t_n, h_max=t_n)
        assert got == pytest.approx(target, rel=0.15)

    def test_lag_budget_checked(self):
        gamma = np.zeros(10)
        gamma[0] = 1.0
        with pytest.raises(LagOutOfRange):
            l2_variance_plugin(_synthetic_acf(gamma), t_n=6, h_max=6)


def test_default_t_n_rule():
    assert default_t_n(1800, 42) == 12
    assert default_t_n(1800, 7) == 7
    assert default_t_n(200_000, 5000) == 58


def test_theoretical_acf_plugs_into_sigma_h():
    gamma = theoretical_acf(ModelSpec.ar1(0.5), 60)
    assert sigma_h_theoretical(gamma, 0, tail_tol=1e-8) == pytest.approx(
        (1 + 0.25) / (1 - 0.25) ** 3, rel=1e-8
    )
