"""Shared oracles and helpers for the test suite.

The oracles here are deliberately dumb, straight-line implementations kept
independent of the library code paths they check: term-by-term summation for
autocovariances, explicit partition enumeration for cumulants, and exhaustive
enumeration of the bootstrap population law.
"""
import math

import numpy as np


def brute_force_acf(x, max_lag, centered=False):
    """Term-by-term divisor-n autocovariances via exact fsum accumulation."""
    x = [float(v) for v in x]
    n = len(x)
    if centered:
        mean = math.fsum(x) / n
        x = [v - mean for v in x]
    gamma = []
    for k in range(max_lag + 1):
        gamma.append(math.fsum(x[i - k] * x[i] for i in range(k, n)) / n)
    return np.array(gamma)


def brute_force_max_test(x, s_n, r0, centered=True):
    """Straight-line recomputation of the max-test quantities.

    Returns (M, M_selfnorm, gumbel_stat) computed with plain Python loops and
    no calls into the library.
    """
    x = [float(v) for v in x]
    n = len(x)
    gamma = brute_force_acf(x, s_n, centered=centered)
    rho = [g / gamma[0] for g in gamma]
    M = max(abs(rho[k] - (1.0 - k / n) * r0[k - 1]) for k in range(1, s_n + 1))
    t_n = min(int(math.floor(n ** (1.0 / 3.0))), s_n)
    sigma0 = 1.0 + 2.0 * math.fsum(rho[k] ** 2 for k in range(1, t_n + 1))
    m_self = M / math.sqrt(sigma0)
    mm = 2 * s_n
    a = 1.0 / math.sqrt(2.0 * math.log(mm))
    b = math.sqrt(2.0 * math.log(mm)) - (math.log(math.log(mm)) + math.log(4.0 * math.pi)) / math.sqrt(
        8.0 * math.log(mm)
    )
    stat = (math.sqrt(n) * m_self - b) / a
    return M, m_self, stat


def enumerate_bob_population(x, s_n, block_len):
    """Exact bootstrap-population correlations by enumerating every
    (block, column) pair with equal probability."""
    x = np.asarray(x, dtype=float)
    n = x.size
    J = n - s_n - block_len + 1
    draws = []  # every equally-likely Y vector
    for j in range(J):
        for t in range(block_len):
            i = j + t
            draws.append(x[i : i + s_n + 1])
    draws = np.asarray(draws)
    r = np.empty(s_n + 1)
    r[0] = 1.0
    u = draws[:, 0]
    for k in range(1, s_n + 1):
        v = draws[:, k]
        cov = np.mean(u * v) - np.mean(u) * np.mean(v)
        vu = np.mean(u * u) - np.mean(u) ** 2
        vv = np.mean(v * v) - np.mean(v) ** 2
        r[k] = cov / np.sqrt(vu * vv)
    return r


def ks_distance(sample, cdf):
    """Kolmogorov-Smirnov sup distance between an empirical sample and cdf."""
    xs = np.sort(np.asarray(sample))
    n = xs.size
    vals = np.array([cdf(x) for x in xs])
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - vals)), np.max(np.abs((i - 1) / n - vals))))
