"""Norming constants, limit distributions, and long-run variance quantities.

The Gumbel norming pair (a_m, b_m) and the long-run variance
sigma_h = sum_k gamma_k * gamma_{k+h} are shared by the max-deviation and
quadratic tests.  Plug-in estimates follow the flat truncated-sum rule
sigma0_hat = sum_{|k| <= t_n} rho_hat_k^2 with t_n = floor(n^(1/3)) capped at
the number of lags under test; no kernel or taper is applied (a deliberate
fidelity choice, at the price of a slightly noisier estimate).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from .errors import InsufficientTail, InvalidIndex, LagOutOfRange
from .estimators import AcfEstimate

__all__ = [
    "GumbelNorming",
    "LongRunVariance",
    "gumbel_norming",
    "gumbel_cdf",
    "gumbel_quantile",
    "default_t_n",
    "sigma_h_theoretical",
    "sigma0_plugin",
    "l2_variance_plugin",
]


@dataclass(frozen=True)
class GumbelNorming:
    """Scale a and location b such that (max - b)/a converges to Gumbel."""

    a: float
    b: float
    m: int


def gumbel_norming(m: int) -> GumbelNorming:
    """Norming constants for the maximum of m terms.

    a = (2 log m)^(-1/2)
    b = (2 log m)^(1/2) - (8 log m)^(-1/2) * (log log m + log 4*pi)

    Requires m >= 2 (both constants are finite there).
    """
    if m < 2:
        raise InvalidIndex(f"norming index m={m} must be >= 2")
    lg = math.log(m)
    a = (2.0 * lg) ** -0.5
    b = (2.0 * lg) ** 0.5 - (8.0 * lg) ** -0.5 * (math.log(lg) + math.log(4.0 * math.pi))
    return GumbelNorming(a=a, b=b, m=m)


def gumbel_cdf(x: float) -> float:
    """Standard Gumbel distribution function exp(-exp(-x))."""
    return float(np.exp(-np.exp(-np.asarray(x, dtype=np.float64))))


def gumbel_sf(x: float) -> float:
    """Upper tail 1 - exp(-exp(-x)), computed stably for large x."""
    return float(-np.expm1(-np.exp(-np.asarray(x, dtype=np.float64))))


def gumbel_quantile(p: float) -> float:
    """Exact inverse of :func:`gumbel_cdf` for 0 < p < 1."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level p={p} must lie in (0, 1)")
    return -math.log(-math.log(p))


def default_t_n(n: int, s_n: int) -> int:
    """Self-normalization truncation t_n = min(floor(n^(1/3)), s_n)."""
    return min(int(np.floor(n ** (1.0 / 3.0))), s_n)


@dataclass(frozen=True)
class LongRunVariance:
    """sigma0 and sigma_h on the correlation scale, with covariance-scale twin.

    ``sigma0`` estimates sum_k r_k^2 (the variance of large-lag sample
    autocorrelation deviations); ``sigma0_cov`` multiplies by gamma0^2 to give
    sum_k gamma_k^2.  ``sigma_h`` maps lag h >= 0 to the truncated sum
    sum_k r_k r_{k+h}.
    """

    sigma0: float
    sigma0_cov: float
    sigma_h: Dict[int, float]
    t_n: int
    source: str  # "plugin" or "theoretical"


def sigma_h_theoretical(gamma: Sequence[float], h: int, tail_tol: float = 1e-6) -> float:
    """Truncated sigma_h = sum_{k=-K}^{K} gamma_k gamma_{k+h} from gamma[0..K].

    Uses the symmetry gamma[-k] = gamma[k]; terms with |k+h| > K are dropped.
    Raises :class:`InsufficientTail` if |gamma_K| * sum|gamma| exceeds
    ``tail_tol``, i.e. the supplied sequence has not decayed enough to certify
    the truncation error.
    """
    g = np.asarray(gamma, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("gamma must be a non-empty 1-D sequence for k = 0..K")
    K = g.size - 1
    h = abs(int(h))
    total_abs = np.abs(g[0]) + 2.0 * np.sum(np.abs(g[1:]))
    if abs(g[-1]) * total_abs > tail_tol:
        raise InsufficientTail(
            f"|gamma_K|*sum|gamma| = {abs(g[-1]) * total_abs:.3e} exceeds tail_tol={tail_tol:.3e}"
        )
    # full sequence on -K..K, then one shifted inner product
    full = np.concatenate([g[::-1], g[1:]])
    if h > 2 * K:
        return 0.0
    if h == 0:
        return float(np.dot(full, full))
    return float(np.dot(full[:-h], full[h:]))


def sigma0_plugin(acf_est: AcfEstimate, t_n: int) -> LongRunVariance:
    """Plug-in long-run variance from sample autocorrelations.

    sigma0 = sum_{|k| <= t_n} rho_hat_k^2 = 1 + 2 * sum_{k=1}^{t_n} rho_hat_k^2
    on the correlation scale; the covariance-scale variant multiplies by
    gamma_hat_0^2.  Also fills sigma_h(h) = sum_{|k| <= t_n} rho_k rho_{k+h}
    for h = 0..t_n (out-of-range factors treated as zero).
    """
    if not 0 <= t_n <= acf_est.max_lag:
        raise LagOutOfRange(f"t_n={t_n} must satisfy 0 <= t_n <= max_lag={acf_est.max_lag}")
    rho = acf_est.rho[: t_n + 1]
    sigma0 = 1.0 + 2.0 * float(np.sum(rho[1:] ** 2))
    full = np.concatenate([rho[::-1], rho[1:]])
    sigma_h = {0: sigma0}
    for h in range(1, t_n + 1):
        sigma_h[h] = float(np.dot(full[:-h], full[h:]))
    g0 = float(acf_est.gamma[0])
    return LongRunVariance(
        sigma0=sigma0, sigma0_cov=sigma0 * g0 * g0, sigma_h=sigma_h, t_n=t_n, source="plugin"
    )


def l2_variance_plugin(
    acf_est: AcfEstimate, t_n: int, h_max: int | None = None, scale: str = "covariance"
) -> float:
    """Plug-in estimate of the quadratic-test variance 2 * sum_h sigma_h^2.

    Each sigma_h is the truncated sum over |k| <= t_n of sample
    autocovariances, and h runs over |h| <= h_max (default h_max = t_n; how
    many sigma_h terms to keep is not pinned down by theory, so it is exposed
    as a parameter).  ``scale="correlation"`` divides by gamma_hat_0^4.
    """
    if h_max is None:
        h_max = t_n
    if t_n < 0 or h_max < 0 or h_max + t_n > acf_est.max_lag:
        raise LagOutOfRange(
            f"need h_max + t_n <= max_lag, got {h_max} + {t_n} > {acf_est.max_lag}"
        )
    if scale not in ("covariance", "correlation"):
        raise ValueError(f"unknown scale {scale!r}")
    g = acf_est.gamma[: t_n + h_max + 1]
    full = np.concatenate([g[::-1], g[1:]])  # lags -(t_n+h_max) .. t_n+h_max
    base = t_n + h_max  # index of lag 0 in `full`
    lo, hi = base - t_n, base + t_n + 1
    # sigma_{-h} = sigma_h because gamma is even, so sum only h >= 0
    total = 0.0
    for h in range(h_max + 1):
        sig_h = float(np.dot(full[lo:hi], full[lo + h : hi + h]))
        total += sig_h * sig_h if h == 0 else 2.0 * sig_h * sig_h
    out = 2.0 * total
    if scale == "correlation":
        out /= float(acf_est.gamma[0]) ** 4
    return out
