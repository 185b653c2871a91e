"""Blocks-of-blocks bootstrap (BOB) calibration of the max-deviation tests.

From X_1..X_n form the lag-augmented vectors Y_i = (X_i, ..., X_{i+s_n}),
i = 1..n-s_n, and overlapping blocks of block_len consecutive Y's.  The
procedure:

1. draw ceil(n/block_len) blocks uniformly with replacement, lay them
   end-to-end and truncate to exactly n vectors (Kuensch-style handling of a
   non-integer block count);
2. treating the n vectors as an iid sample, compute the Pearson correlation
   r*_k between the first and (k+1)-th entries, then
   M* = max_k |r*_k - r_e_k| and its self-normalized version
   M*/sqrt(sigma0*), sigma0* = sum_{|k|<=t_n} r*_k^2;
3. repeat N times; the p-value is the strict count #(M* > M_observed)/N
   (ties count as non-rejection).

r_e_k is the correlation of the bootstrap population itself: the law of a
uniform (block, column) pick.  Replicate statistics are centered by r_e;
the observed statistic is centered by the user's null.

Y vectors and blocks are never materialized; everything is index arithmetic
into the original series, so memory stays O(n) per batch.  Replicate i draws
from substream (seed, i), which makes reports bit-identical across runs,
chunkings, and worker counts.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .asymptotics import default_t_n
from .errors import InsufficientData, InvalidParams
from .estimators import SeriesLike, as_series
from .hypotests import NullSpec, max_test
from .rng import substream

__all__ = ["BootstrapConfig", "BootstrapReport", "bob_population_correlations", "bob_test"]


@dataclass(frozen=True)
class BootstrapConfig:
    """Configuration of one BOB run.

    t_n = None means the self-normalization truncation follows the same rule
    as the asymptotic test, min(floor(n^(1/3)), s_n).
    """

    s_n: int
    block_len: int
    replicates: int
    seed: int
    t_n: Optional[int] = None

    def __post_init__(self):
        if self.s_n < 1:
            raise InvalidParams(f"s_n={self.s_n} must be >= 1")
        if self.block_len < 1:
            raise InvalidParams(f"block_len={self.block_len} must be >= 1")
        if self.replicates < 1:
            raise InvalidParams(f"replicates={self.replicates} must be >= 1")
        if self.t_n is not None and not 0 <= self.t_n <= self.s_n:
            raise InvalidParams(f"t_n={self.t_n} must satisfy 0 <= t_n <= s_n")


@dataclass(frozen=True)
class BootstrapReport:
    observed_M: float
    observed_selfnorm: float
    replicate_M: np.ndarray
    replicate_selfnorm: np.ndarray
    p_value_M: float
    p_value_selfnorm: float
    r_e: np.ndarray  # bootstrap-population correlations, r_e[0] = 1
    config: BootstrapConfig


def _column_weights(n: int, s_n: int, block_len: int) -> np.ndarray:
    """P(Y_sharp = Y_i) for i = 0..n-s_n-1 under a uniform (block, column) pick.

    Column i belongs to blocks j in [max(0, i-block_len+1), min(J-1, i)], so
    interior columns are covered by block_len blocks and edge columns fewer.
    """
    m = n - s_n
    J = n - s_n - block_len + 1
    if J < 1:
        raise InsufficientData(
            f"need n - s_n - block_len + 1 >= 1, got n={n}, s_n={s_n}, block_len={block_len}"
        )
    i = np.arange(m)
    count = np.minimum(i, J - 1) - np.maximum(0, i - block_len + 1) + 1
    return count / (J * block_len)


def bob_population_correlations(series: SeriesLike, s_n: int, block_len: int) -> np.ndarray:
    """Correlations r_e[k] of the bootstrap population, k = 0..s_n (r_e[0] = 1).

    Means and covariances are taken under the exact discrete law of a uniform
    (block, column) pick, i.e. weighted moments of (X_i, X_{i+k}) with the
    block-coverage weights.
    """
    x = as_series(series).values
    n = x.size
    if not 1 <= s_n < n:
        raise InvalidParams(f"s_n={s_n} must satisfy 1 <= s_n < n={n}")
    w = _column_weights(n, s_n, block_len)
    m = n - s_n
    u = x[:m]
    mu_u = float(w @ u)
    du = u - mu_u
    var_u = float(w @ (du * du))
    r_e = np.empty(s_n + 1)
    r_e[0] = 1.0
    for k in range(1, s_n + 1):
        v = x[k : k + m]
        mu_v = float(w @ v)
        dv = v - mu_v
        var_v = float(w @ (dv * dv))
        r_e[k] = (w @ (du * dv)) / math.sqrt(var_u * var_v)
    return r_e


def _replicate_batch(x, s_n, block_len, t_n, r_e, seed, indices):
    """Vectorized bootstrap statistics for the replicate indices given."""
    n = x.size
    J = n - s_n - block_len + 1
    h_n = -(-n // block_len)  # ceil; concatenation is truncated to n vectors
    lag = np.arange(s_n + 1)
    offs = np.arange(block_len)
    out_M = np.empty(len(indices))
    out_sn = np.empty(len(indices))
    # keep the gathered (batch, n, s_n+1) tensor around 32 MB
    batch = max(1, min(64, (4 << 20) // max(1, n * (s_n + 1))))
    for lo in range(0, len(indices), batch):
        chunk = indices[lo : lo + batch]
        starts = np.stack([substream(seed, int(i)).integers(0, J, size=h_n) for i in chunk])
        idx = (starts[:, :, None] + offs[None, None, :]).reshape(len(chunk), -1)[:, :n]
        U = x[idx[:, :, None] + lag[None, None, :]]
        Uc = U - U.mean(axis=1, keepdims=True)
        u0 = Uc[:, :, 0]
        cross = np.einsum("bn,bnk->bk", u0, Uc)
        sq = np.einsum("bnk,bnk->bk", Uc, Uc)
        r_star = cross / np.sqrt(sq[:, :1] * sq)
        out_M[lo : lo + len(chunk)] = np.max(np.abs(r_star[:, 1:] - r_e[None, 1:]), axis=1)
        sigma0_star = 1.0 + 2.0 * np.sum(r_star[:, 1 : t_n + 1] ** 2, axis=1)
        out_sn[lo : lo + len(chunk)] = out_M[lo : lo + len(chunk)] / np.sqrt(sigma0_star)
    return out_M, out_sn


def _replicate_batch_args(args):
    return _replicate_batch(*args)


def bob_test(
    series: SeriesLike,
    config: BootstrapConfig,
    null: Optional[NullSpec] = None,
    centered: bool = True,
    threads: int = 1,
) -> BootstrapReport:
    """Run the BOB calibration of the M- and self-normalized M-tests.

    The observed statistics come from :func:`serialcorr.hypotests.max_test`
    against ``null`` (white noise by default); replicate statistics are
    centered by the bootstrap-population correlations r_e.  Results are
    bit-identical for fixed (series, config) regardless of ``threads``.
    """
    ts = as_series(series)
    x = ts.values
    n = ts.n
    if config.s_n + config.block_len > n:
        raise InsufficientData(
            f"s_n + block_len = {config.s_n + config.block_len} exceeds n = {n}"
        )
    t_n = config.t_n if config.t_n is not None else default_t_n(n, config.s_n)
    observed = max_test(ts, config.s_n, null=null, centered=centered, t_n=t_n)
    r_e = bob_population_correlations(ts, config.s_n, config.block_len)

    N = config.replicates
    indices = np.arange(N)
    if threads > 1 and N > 1:
        parts = np.array_split(indices, min(threads * 4, N))
        args = [(x, config.s_n, config.block_len, t_n, r_e, config.seed, part) for part in parts]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replicate_batch_args, args))
        rep_M = np.concatenate([r[0] for r in results])
        rep_sn = np.concatenate([r[1] for r in results])
    else:
        rep_M, rep_sn = _replicate_batch(x, config.s_n, config.block_len, t_n, r_e, config.seed, indices)

    return BootstrapReport(
        observed_M=observed.M,
        observed_selfnorm=observed.M_selfnorm,
        replicate_M=rep_M,
        replicate_selfnorm=rep_sn,
        p_value_M=float(np.sum(rep_M > observed.M)) / N,
        p_value_selfnorm=float(np.sum(rep_sn > observed.M_selfnorm)) / N,
        r_e=r_e,
        config=config,
    )
