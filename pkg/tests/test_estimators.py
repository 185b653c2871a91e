import numpy as np
import pytest

from conftest import brute_force_acf

from serialcorr import TimeSeries, acf, acf_fast
from serialcorr.errors import DegenerateSeries, InvalidSeries, LagOutOfRange


def test_hand_example_uncentered():
    est = acf([1, -1, 1, -1], max_lag=1)
    assert est.gamma[0] == pytest.approx(1.0, abs=1e-15)
    assert est.gamma[1] == pytest.approx(-0.75, abs=1e-15)
    assert est.rho[1] == pytest.approx(-0.75, abs=1e-15)
    assert est.rho[0] == 1.0


def test_constant_series_centered_is_degenerate():
    with pytest.raises(DegenerateSeries):
        acf(np.ones(32), max_lag=3, centered=True)


def test_all_zero_series_degenerate_uncentered():
    with pytest.raises(DegenerateSeries):
        acf(np.zeros(16), max_lag=2)


@pytest.mark.parametrize("centered", [False, True])
def test_matches_brute_force_oracle(centered):
    rng = np.random.default_rng(101)
    x = rng.standard_normal(64)
    est = acf(x, max_lag=20, centered=centered)
    oracle = brute_force_acf(x, 20, centered=centered)
    scale = oracle[0]
    assert np.max(np.abs(est.gamma - oracle)) <= 1e-10 * scale
    assert np.max(np.abs(est.rho - oracle / oracle[0])) <= 1e-10


def test_fast_equals_direct_on_random_inputs():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(2, 300))
        lag = int(rng.integers(0, n))
        x = rng.standard_normal(n) * float(rng.uniform(0.1, 10))
        for centered in (False, True):
            if centered and np.ptp(x) == 0:
                continue
            a = acf(x, lag, centered=centered)
            b = acf_fast(x, lag, centered=centered)
            assert np.max(np.abs(a.gamma - b.gamma)) <= 1e-10 * a.gamma[0]
            assert np.max(np.abs(a.rho - b.rho)) <= 1e-10


def test_fast_single_point():
    est = acf_fast([3.0], max_lag=0)
    assert est.gamma[0] == pytest.approx(9.0, rel=1e-12)
    assert est.rho.tolist() == [1.0]


def test_fast_matches_direct_ar1_long():
    rng = np.random.default_rng(11)
    eps = rng.standard_normal(4096)
    x = np.empty(4096)
    prev = 0.0
    for i in range(4096):
        prev = 0.5 * prev + eps[i]
        x[i] = prev
    a = acf(x, 512)
    b = acf_fast(x, 512)
    assert np.max(np.abs(a.gamma - b.gamma)) <= 1e-10 * a.gamma[0]


def test_shift_invariance_of_centered_estimator():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(200)
    base = acf(x, 10, centered=True)
    for c in (1.0, -7.5, 1e4):
        shifted = acf(x + c, 10, centered=True)
        assert np.max(np.abs(shifted.gamma - base.gamma)) <= 1e-9 * base.gamma[0]


def test_scale_equivariance():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(150)
    base = acf(x, 8)
    c = 3.7
    scaled = acf(c * x, 8)
    assert np.allclose(scaled.gamma, c**2 * base.gamma, rtol=1e-12, atol=0)
    assert np.allclose(scaled.rho, base.rho, rtol=1e-12, atol=1e-15)


def test_rho_bounded_by_one():
    rng = np.random.default_rng(8)
    for _ in range(20):
        x = rng.standard_normal(int(rng.integers(4, 200)))
        est = acf(x, x.size - 1, centered=True)
        assert np.max(np.abs(est.rho)) <= 1.0 + 1e-12


def test_uncentered_bias_is_one_minus_k_over_n():
    # E gamma_hat_k = (1 - k/n) gamma_k; for iid N(0,1) and k=3 that is 0
    rng = np.random.default_rng(9)
    reps, n, k = 10_000, 256, 3
    x = rng.standard_normal((reps, n))
    gamma3 = np.einsum("ri,ri->r", x[:, :-k], x[:, k:]) / n
    se = gamma3.std(ddof=1) / np.sqrt(reps)
    assert abs(gamma3.mean()) <= 4 * se


def test_max_lag_bounds():
    with pytest.raises(LagOutOfRange):
        acf([1.0, 2.0], max_lag=2)
    with pytest.raises(LagOutOfRange):
        acf_fast([1.0, 2.0], max_lag=-1)


def test_nan_rejected_eagerly():
    with pytest.raises(InvalidSeries):
        acf([1.0, np.nan, 2.0], max_lag=1)
    with pytest.raises(InvalidSeries):
        TimeSeries(np.array([np.inf, 0.0]))
    with pytest.raises(InvalidSeries):
        TimeSeries(np.array([]))


def test_max_lag_zero_returns_gamma0_only():
    est = acf([1.0, 2.0, 3.0], max_lag=0)
    assert est.gamma.shape == (1,)
    assert est.gamma[0] == pytest.approx(14.0 / 3.0, rel=1e-14)
