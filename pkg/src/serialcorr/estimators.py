"""Sample autocovariance and autocorrelation estimators.

Both estimators divide by the full series length n (not n - k), so the
uncentered estimate of the lag-k autocovariance has expectation
(1 - k/n) * gamma_k; downstream tests center against exactly that bias.
The mean-adjusted variant subtracts the full-sample mean from every factor,
including the lagged one.

With divisor n, the estimated sequence is positive semi-definite and
|rho[k]| <= 1 holds up to floating rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateSeries, InvalidSeries, LagOutOfRange

__all__ = ["TimeSeries", "AcfEstimate", "acf", "acf_fast"]

#: documented numerical slack on |rho[k]| <= 1
RHO_TOL = 1e-12


@dataclass(frozen=True)
class TimeSeries:
    """An observed or simulated real-valued series.

    Values must be finite; NaN/Inf are rejected eagerly because silent NaN
    autocovariances would poison every downstream statistic.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise InvalidSeries("series must be a non-empty 1-D array")
        if not np.all(np.isfinite(v)):
            raise InvalidSeries("series contains NaN or Inf")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size


SeriesLike = Union[TimeSeries, np.ndarray, Sequence[float]]


def as_series(series: SeriesLike) -> TimeSeries:
    """Coerce an array-like input to a validated :class:`TimeSeries`."""
    if isinstance(series, TimeSeries):
        return series
    return TimeSeries(np.asarray(series, dtype=np.float64))


@dataclass(frozen=True)
class AcfEstimate:
    """Autocovariances gamma[0..max_lag] and autocorrelations rho = gamma/gamma[0].

    ``centered`` records whether the full-sample mean was subtracted.
    Negative lags are not stored: gamma[-k] == gamma[k] by construction.
    """

    max_lag: int
    gamma: np.ndarray
    rho: np.ndarray
    centered: bool
    n: int


def _validated_input(series: SeriesLike, max_lag: int, centered: bool) -> np.ndarray:
    ts = as_series(series)
    if not 0 <= max_lag < ts.n:
        raise LagOutOfRange(f"max_lag={max_lag} must satisfy 0 <= max_lag < n={ts.n}")
    x = ts.values
    if centered:
        x = x - x.mean()
    return x


def _finish(gamma: np.ndarray, max_lag: int, centered: bool, n: int) -> AcfEstimate:
    if gamma[0] == 0.0:
        raise DegenerateSeries("lag-0 autocovariance is zero (constant series)")
    return AcfEstimate(max_lag=max_lag, gamma=gamma, rho=gamma / gamma[0], centered=centered, n=n)


def acf(series: SeriesLike, max_lag: int, centered: bool = False) -> AcfEstimate:
    """Direct time-domain estimate, O(n * max_lag).

    Parameters
    ----------
    series : TimeSeries or array_like
        Observations X_1..X_n, all finite.
    max_lag : int
        Largest lag to compute; 0 <= max_lag < n.
    centered : bool
        If True, subtract the full-sample mean from every factor.

    Returns
    -------
    AcfEstimate
        gamma[k] = (1/n) * sum_{i=k+1}^{n} X_{i-k} X_i and rho = gamma/gamma[0].
    """
    x = _validated_input(series, max_lag, centered)
    n = x.size
    gamma = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        gamma[k] = np.dot(x[: n - k], x[k:]) / n
    return _finish(gamma, max_lag, centered, n)


def acf_fast(series: SeriesLike, max_lag: int, centered: bool = False) -> AcfEstimate:
    """Transform-accelerated estimate, O(n log n); same contract as :func:`acf`.

    Zero-pads to the next power of two >= 2n so the circular convolution has
    no wrap-around aliasing, then reads the linear lag products off the
    inverse transform.
    """
    x = _validated_input(series, max_lag, centered)
    n = x.size
    size = 1 << max(1, int(2 * n - 1).bit_length())
    f = np.fft.rfft(x, size)
    full = np.fft.irfft(f * np.conj(f), size)
    gamma = full[: max_lag + 1] / n
    return _finish(gamma, max_lag, centered, n)
