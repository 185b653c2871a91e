"""Serial-correlation hypothesis tests.

Two families, both for H0: r_k = r0_k over 1 <= k <= s_n with s_n allowed to
grow with n:

* max-deviation test: M = max_k |rho_hat_k - (1-k/n) r0_k|, self-normalized
  by the plug-in long-run variance and referred to the Gumbel law through the
  norming pair with index 2*s_n (two-sided maximum);
* quadratic tests: the unbounded-lag statistic
  T = s_n^(-1/2) * sum_k [n rho_hat_k^2 - (1-k/n)] with N(0, 2) calibration,
  plus the classical Box-Pierce and Ljung-Box chi-square variants.

Both reject in the upper tail.  All statistics are built from sample
autocorrelations and are therefore exactly scale invariant.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from .asymptotics import (
    default_t_n,
    gumbel_norming,
    gumbel_sf,
    l2_variance_plugin,
    sigma0_plugin,
)
from .errors import InvalidAlpha, InvalidLagCount, InvalidParams, NonpositiveTau, UnknownTheoreticalAcf
from .estimators import AcfEstimate, SeriesLike, acf_fast, as_series
from .models import ModelSpec, simulate, theoretical_acf
from .rng import substream

__all__ = [
    "NullSpec",
    "MaxTestResult",
    "L2TestResult",
    "max_test",
    "max_test_from_acf",
    "l2_test",
    "l2_test_from_acf",
    "l2_power_approx",
    "tau1_monte_carlo",
    "L2_FLAVORS",
]

L2_FLAVORS = ("bp", "lb", "normal")


@dataclass(frozen=True)
class NullSpec:
    """Null autocorrelations r0_k for k = 1..s_n; r0 = None means white noise."""

    r0: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.r0 is not None:
            r = np.asarray(self.r0, dtype=np.float64)
            if r.ndim != 1:
                raise InvalidParams("null correlations must be a 1-D sequence")
            if np.any(np.abs(r) > 1.0):
                raise InvalidParams("null correlations must satisfy |r0_k| <= 1")
            object.__setattr__(self, "r0", r)

    @property
    def white_noise(self) -> bool:
        return self.r0 is None

    def correlations(self, s_n: int) -> np.ndarray:
        """Null r0_1..r0_{s_n} as an array (zeros for white noise)."""
        if self.r0 is None:
            return np.zeros(s_n)
        if self.r0.size < s_n:
            raise InvalidParams(f"null supplies {self.r0.size} correlations, test needs {s_n}")
        return self.r0[:s_n]


@dataclass(frozen=True)
class MaxTestResult:
    s_n: int
    M: float                # max deviation on the correlation scale
    M_selfnorm: float       # M / sqrt(sigma0_hat)
    gumbel_stat: float      # (sqrt(n) * M_selfnorm - b_{2s_n}) / a_{2s_n}
    p_value: float
    sigma0_hat: float
    t_n: int
    centered: bool


@dataclass(frozen=True)
class L2TestResult:
    s_n: int
    Q: float                # n * sum rho_hat_k^2 (Ljung-Box weighted for "lb")
    T: float                # centered/scaled statistic
    variance_used: Optional[float]
    p_value: float
    flavor: str
    n: int


def _check_s_n(s_n: int, n: int, minimum: int) -> None:
    if not minimum <= s_n < n:
        raise InvalidLagCount(f"s_n={s_n} must satisfy {minimum} <= s_n < n={n}")


def max_test_from_acf(
    acf_est: AcfEstimate, s_n: int, null: Optional[NullSpec] = None, t_n: Optional[int] = None
) -> MaxTestResult:
    """Max-deviation test computed from a ready AcfEstimate (test seam)."""
    n = acf_est.n
    _check_s_n(s_n, n, 2)
    if acf_est.max_lag < s_n:
        raise InvalidLagCount(f"AcfEstimate has max_lag={acf_est.max_lag} < s_n={s_n}")
    null = null or NullSpec()
    r0 = null.correlations(s_n)
    if t_n is None:
        t_n = default_t_n(n, s_n)
    k = np.arange(1, s_n + 1)
    deviations = np.abs(acf_est.rho[1 : s_n + 1] - (1.0 - k / n) * r0)
    M = float(np.max(deviations))
    sigma0_hat = sigma0_plugin(acf_est, t_n).sigma0
    m_selfnorm = M / np.sqrt(sigma0_hat)
    norming = gumbel_norming(2 * s_n)
    gumbel_stat = (np.sqrt(n) * m_selfnorm - norming.b) / norming.a
    return MaxTestResult(
        s_n=s_n,
        M=M,
        M_selfnorm=float(m_selfnorm),
        gumbel_stat=float(gumbel_stat),
        p_value=gumbel_sf(gumbel_stat),
        sigma0_hat=float(sigma0_hat),
        t_n=t_n,
        centered=acf_est.centered,
    )


def max_test(
    series: SeriesLike,
    s_n: int,
    null: Optional[NullSpec] = None,
    centered: bool = True,
    t_n: Optional[int] = None,
) -> MaxTestResult:
    """Max-deviation serial-correlation test with asymptotic Gumbel calibration.

    Parameters
    ----------
    series : TimeSeries or array_like
        Observations; 2 <= s_n < n.
    s_n : int
        Number of lags under test.
    null : NullSpec, optional
        Null autocorrelations; defaults to white noise.
    centered : bool
        Use the mean-adjusted estimator (default).  The uncentered variant is
        kept for simulation fidelity with mean-zero models.
    t_n : int, optional
        Self-normalization truncation; default min(floor(n^(1/3)), s_n).

    Returns
    -------
    MaxTestResult
        With upper-tail p-value 1 - exp(-exp(-gumbel_stat)).
    """
    ts = as_series(series)
    _check_s_n(s_n, ts.n, 2)
    est = acf_fast(ts, s_n, centered=centered)
    return max_test_from_acf(est, s_n, null=null, t_n=t_n)


def _normal_upper(t: float, variance: float) -> float:
    return float(sps.norm.sf(t, scale=np.sqrt(variance)))


def l2_test_from_acf(
    acf_est: AcfEstimate,
    s_n: int,
    flavor: str = "normal",
    null: Optional[NullSpec] = None,
    t_n: Optional[int] = None,
) -> L2TestResult:
    """Quadratic serial-correlation test computed from a ready AcfEstimate."""
    if flavor not in L2_FLAVORS:
        raise InvalidParams(f"flavor must be one of {L2_FLAVORS}, got {flavor!r}")
    n = acf_est.n
    _check_s_n(s_n, n, 1)
    if acf_est.max_lag < s_n:
        raise InvalidLagCount(f"AcfEstimate has max_lag={acf_est.max_lag} < s_n={s_n}")
    null = null or NullSpec()
    k = np.arange(1, s_n + 1)
    rho = acf_est.rho[1 : s_n + 1]

    if flavor == "bp":
        Q = n * float(np.sum(rho**2))
        T = (Q - s_n) / np.sqrt(s_n)
        return L2TestResult(s_n, Q, float(T), None, float(sps.chi2.sf(Q, s_n)), flavor, n)
    if flavor == "lb":
        Q = n * (n + 2.0) * float(np.sum(rho**2 / (n - k)))
        T = (Q - s_n) / np.sqrt(s_n)
        return L2TestResult(s_n, Q, float(T), None, float(sps.chi2.sf(Q, s_n)), flavor, n)

    # flavor == "normal": unbounded-lag statistic with normal calibration
    Q = n * float(np.sum(rho**2))
    if null.white_noise:
        # T = (1/sqrt(s_n)) sum [n rho_k^2 - (1-k/n)]; the centering sums to
        # s_n (2n - s_n - 1) / (2n)
        T = float(np.sum(n * rho**2 - (1.0 - k / n)) / np.sqrt(s_n))
        variance = 2.0
    else:
        # center each deviation by (1-k/n) r0_k and the per-lag mean by
        # (1-k/n) sigma0/gamma0^2; calibrate with the plug-in 2*sum sigma_h^2
        if t_n is None:
            t_n = default_t_n(n, s_n)
        r0 = null.correlations(s_n)
        sigma0_corr = sigma0_plugin(acf_est, t_n).sigma0
        dev = rho - (1.0 - k / n) * r0
        T = float(np.sum(n * dev**2 - (1.0 - k / n) * sigma0_corr) / np.sqrt(s_n))
        h_max = min(t_n, acf_est.max_lag - t_n)
        variance = l2_variance_plugin(acf_est, t_n, h_max=h_max, scale="correlation")
    return L2TestResult(s_n, Q, T, variance, _normal_upper(T, variance), flavor, n)


def l2_test(
    series: SeriesLike,
    s_n: int,
    flavor: str = "normal",
    centered: bool = True,
    null: Optional[NullSpec] = None,
    t_n: Optional[int] = None,
) -> L2TestResult:
    """Quadratic (Box-Pierce-type) serial-correlation test.

    flavor "normal" is the unbounded-lag statistic with N(0, 2) null
    calibration, rejected for large T; "bp" and "lb" are the classical
    Box-Pierce and Ljung-Box statistics with chi-square(s_n) calibration.
    A non-white ``null`` is supported for the "normal" flavor only and uses
    the plug-in variance 2 * sum_h sigma_h^2 / gamma0^4.
    """
    ts = as_series(series)
    _check_s_n(s_n, ts.n, 1)
    if null is not None and not null.white_noise and flavor != "normal":
        raise InvalidParams("non-white nulls are only supported for flavor='normal'")
    extra = 0 if (null is None or null.white_noise) else 2 * default_t_n(ts.n, s_n)
    est = acf_fast(ts, min(s_n + extra, ts.n - 1), centered=centered)
    return l2_test_from_acf(est, s_n, flavor=flavor, null=null, t_n=t_n)


def l2_power_approx(r: Sequence[float], n: int, s_n: int, alpha: float, tau1: float) -> float:
    """Asymptotic power of the unbounded-lag quadratic test at level alpha.

    Evaluates P( tau1 * Z > sqrt(2 s_n) z_{1-alpha} / sqrt(n)
                 + s_n (2n - s_n - 1) / (2 n^(3/2))
                 - sqrt(n) * sum_{k<=s_n} r_k^2 )
    for the alternative with autocorrelations ``r`` (entries beyond the
    supplied length are treated as zero).
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha={alpha} must lie in (0, 1)")
    if not tau1 > 0.0:
        raise NonpositiveTau(f"tau1={tau1} must be positive")
    if not 1 <= s_n < n:
        raise InvalidLagCount(f"s_n={s_n} must satisfy 1 <= s_n < n={n}")
    rr = np.asarray(r, dtype=np.float64)[:s_n]
    sum_r2 = float(np.sum(rr**2))
    z = float(sps.norm.ppf(1.0 - alpha))
    threshold = (
        np.sqrt(2.0 * s_n) * z / np.sqrt(n)
        + s_n * (2.0 * n - s_n - 1.0) / (2.0 * n**1.5)
        - np.sqrt(n) * sum_r2
    )
    return float(sps.norm.sf(threshold / tau1))


def tau1_monte_carlo(
    model: ModelSpec,
    n: int,
    s_n: int,
    replicates: int,
    seed: int,
    burn_in: int = 1000,
) -> float:
    """Monte Carlo estimate of tau1, the standard deviation in the CLT for
    sqrt(n) * (sum_{k<=s_n} rho_hat_k^2 - sum_{k<=s_n} r_k^2).

    The limit theory only asserts tau1 exists; no closed form is available,
    so it is estimated from ``replicates`` simulated paths against the
    model's theoretical correlations.  Returns the square root of the sample
    variance.  Raises :class:`UnknownTheoreticalAcf` when the model has no
    closed-form autocovariances (bilinear): supply a long-run plug-in instead.
    """
    if replicates < 100:
        raise InvalidParams(f"replicates={replicates} must be >= 100")
    _check_s_n(s_n, n, 1)
    gamma = theoretical_acf(model, s_n)
    if gamma is None:
        raise UnknownTheoreticalAcf(f"{model.label()} has no closed-form autocorrelations")
    r_true = gamma[1:] / gamma[0]
    target = float(np.sum(r_true**2))
    values = np.empty(replicates)
    for i in range(replicates):
        ts = simulate(model, n, burn_in=burn_in, seed=substream(seed, i))
        est = acf_fast(ts, s_n, centered=False)
        values[i] = np.sqrt(n) * (float(np.sum(est.rho[1:] ** 2)) - target)
    return float(np.std(values, ddof=1))
