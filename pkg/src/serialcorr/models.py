"""Simulators for the four benchmark data-generating processes.

    iid       X_i = e_i
    ar1       X_i = b * X_{i-1} + e_i
    bilinear  X_i = (a + b * e_i) * X_{i-1} + e_i
    arch      X_i = sqrt(a + b * X_{i-1}^2) * e_i

with e_i iid standard normal.  Innovations come from numpy's PCG64
``Generator.standard_normal`` (ziggurat), so a (model, n, burn_in, seed)
tuple pins the path bit-for-bit.  All four models are geometrically ergodic,
so initialization is immaterial after the default burn-in of 1000 steps;
X_0 = 0 for ar1/bilinear and X_0 = sqrt(a/(1-b)) (the stationary scale) for
arch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numba import njit

from .errors import InvalidParams, Overflow
from .estimators import TimeSeries
from .rng import substream

__all__ = ["ModelSpec", "simulate", "theoretical_acf", "OVERFLOW_CAP"]

#: bilinear paths are heavy-tailed; past this magnitude we raise Overflow
#: instead of silently producing Inf
OVERFLOW_CAP = 1e12

KINDS = ("iid", "ar1", "bilinear", "arch")


@dataclass(frozen=True)
class ModelSpec:
    """One of the four benchmark processes with its coefficients."""

    kind: str
    a: Optional[float] = None
    b: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParams(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "iid":
            return
        if self.kind == "ar1":
            if self.b is None or not abs(self.b) < 1:
                raise InvalidParams(f"ar1 requires |b| < 1, got b={self.b}")
        elif self.kind == "bilinear":
            # a^2 + b^2 < 1 is a sufficient condition for an L2 stationary solution
            if self.a is None or self.b is None or not self.a**2 + self.b**2 < 1:
                raise InvalidParams(f"bilinear requires a^2 + b^2 < 1, got a={self.a}, b={self.b}")
        elif self.kind == "arch":
            if self.a is None or self.b is None or not (self.a > 0 and 0 <= self.b < 1):
                raise InvalidParams(f"arch requires a > 0 and 0 <= b < 1, got a={self.a}, b={self.b}")

    @classmethod
    def iid(cls) -> "ModelSpec":
        return cls("iid")

    @classmethod
    def ar1(cls, b: float) -> "ModelSpec":
        return cls("ar1", b=b)

    @classmethod
    def bilinear(cls, a: float, b: float) -> "ModelSpec":
        return cls("bilinear", a=a, b=b)

    @classmethod
    def arch(cls, a: float, b: float) -> "ModelSpec":
        return cls("arch", a=a, b=b)

    def label(self) -> str:
        if self.kind == "iid":
            return "iid"
        if self.kind == "ar1":
            return f"ar1(b={self.b:g})"
        return f"{self.kind}(a={self.a:g},b={self.b:g})"


@njit(cache=True)
def _ar1_path(eps, b, x0):
    x = np.empty(eps.size)
    prev = x0
    for i in range(eps.size):
        prev = b * prev + eps[i]
        x[i] = prev
    return x


@njit(cache=True)
def _bilinear_path(eps, a, b, x0, cap):
    x = np.empty(eps.size)
    prev = x0
    for i in range(eps.size):
        prev = (a + b * eps[i]) * prev + eps[i]
        if np.abs(prev) > cap:
            return x, i
        x[i] = prev
    return x, -1


@njit(cache=True)
def _arch_path(eps, a, b, x0):
    x = np.empty(eps.size)
    prev = x0
    for i in range(eps.size):
        prev = np.sqrt(a + b * prev * prev) * eps[i]
        x[i] = prev
    return x


SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def _generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return substream(int(seed))


def simulate(model: ModelSpec, n: int, burn_in: int = 1000, seed: SeedLike = 0) -> TimeSeries:
    """Generate burn_in + n values by the model recursion and keep the last n.

    Deterministic given (model, n, burn_in, seed).  ``seed`` may be an int,
    a ``SeedSequence`` (for substream discipline), or a ready ``Generator``.
    """
    if n < 1:
        raise InvalidParams(f"n={n} must be >= 1")
    if burn_in < 0:
        raise InvalidParams(f"burn_in={burn_in} must be >= 0")
    rng = _generator(seed)
    eps = rng.standard_normal(burn_in + n)
    if model.kind == "iid":
        x = eps
    elif model.kind == "ar1":
        x = _ar1_path(eps, model.b, 0.0)
    elif model.kind == "bilinear":
        x, bad = _bilinear_path(eps, model.a, model.b, 0.0, OVERFLOW_CAP)
        if bad >= 0:
            raise Overflow(f"bilinear path exceeded |x| = {OVERFLOW_CAP:g} at step {bad}")
    else:  # arch
        x = _arch_path(eps, model.a, model.b, float(np.sqrt(model.a / (1.0 - model.b))))
    return TimeSeries(x[burn_in:])


def theoretical_acf(model: ModelSpec, max_lag: int) -> Optional[np.ndarray]:
    """Closed-form autocovariances gamma[0..max_lag], or None if unavailable.

    iid:  (1, 0, 0, ...)
    ar1:  gamma_k = b^k / (1 - b^2)
    arch: gamma_0 = a/(1-b), gamma_k = 0 for k >= 1 (white noise with
          dependent squares)
    bilinear: no closed form exposed here -> None.
    """
    if max_lag < 0:
        raise InvalidParams(f"max_lag={max_lag} must be >= 0")
    k = np.arange(max_lag + 1)
    if model.kind == "iid":
        g = np.zeros(max_lag + 1)
        g[0] = 1.0
        return g
    if model.kind == "ar1":
        return model.b**k / (1.0 - model.b**2)
    if model.kind == "arch":
        g = np.zeros(max_lag + 1)
        g[0] = model.a / (1.0 - model.b)
        return g
    return None
