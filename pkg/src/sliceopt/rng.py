"""Seeded random streams and the elementary samplers used by every kernel.

Streams are PCG64 (128-bit state, 64-bit output, period 2**128) as
implemented by numpy's bit generator, whose raw output is bit-identical
across platforms. Doubles are the top 53 bits of each raw output. A
stream for ``(seed, index)`` is seeded with::

    splitmix64(seed ^ (index * 0x9E3779B97F4A7C15 mod 2**64))

where splitmix64 is the finaliser of Steele, Lea and Flood (2014) with
constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import EmptySliceError
from .intervals import IntervalUnion, total_length

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_TWO_M53 = 2.0 ** -53
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
TAIL_MASS_FLOOR = 1e-300


def splitmix64(x: int) -> int:
    """One splitmix64 step: add the golden gamma, then avalanche."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class RngStream:
    """A single-owner stream of uniform doubles.

    Not thread-safe; give every chain its own stream.
    """

    __slots__ = ("seed", "stream_id", "state_seed", "_bg")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        self.state_seed = splitmix64(self.seed ^ ((self.stream_id * GOLDEN_GAMMA) & MASK64))
        self._bg = np.random.PCG64(self.state_seed)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def next_u64(self) -> int:
        return int(self._bg.random_raw())

    def uniform(self) -> float:
        """Uniform on [0, 1)."""
        return (int(self._bg.random_raw()) >> 11) * _TWO_M53

    def uniform_open(self) -> float:
        """Uniform on (0, 1); safe for logs and quantiles."""
        return ((int(self._bg.random_raw()) >> 11) + 0.5) * _TWO_M53

    def uniforms(self, n: int) -> np.ndarray:
        raw = self._bg.random_raw(n)
        return (raw >> np.uint64(11)).astype(float) * _TWO_M53

    def standard_normal(self) -> float:
        return normal_quantile(self.uniform_open())


def derive_stream(seed: int, index: int) -> RngStream:
    return RngStream(seed, index)


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)


# Acklam's rational approximation to the normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((( _C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
               ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log1p(-p))
        return -((((( _C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
                ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return ((((( _A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
           (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def normal_quantile(p: float) -> float:
    """Standard normal quantile.

    Acklam's approximation (absolute error below 1.2e-9) followed by one
    Halley correction against ``normal_cdf``.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    x = _acklam(p)
    if abs(x) < 37.0:
        e = normal_cdf(x) - p
        u = e * _SQRT2PI * math.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    return x


def _upper_tail(z: float) -> float:
    return 0.5 * math.erfc(z / _SQRT2)


def _standard_mass(a: float, b: float) -> float:
    """P(a <= Z <= b) computed on whichever tail avoids cancellation."""
    if a >= 0.0:
        return _upper_tail(a) - _upper_tail(b)
    return normal_cdf(b) - normal_cdf(a)


def _invert_standard(a: float, b: float, r: float) -> float:
    """Point with fraction ``r`` of the N(0,1) mass of [a, b] to its left."""
    if a >= 0.0:
        qa, qb = _upper_tail(a), _upper_tail(b)
        q = qa - r * (qa - qb)
        z = -normal_quantile(q) if 0.0 < q < 1.0 else (a if q <= 0.0 else b)
    else:
        pa, pb = normal_cdf(a), normal_cdf(b)
        p = pa + r * (pb - pa)
        z = normal_quantile(p) if 0.0 < p < 1.0 else (a if p <= 0.0 else b)
    return min(max(z, a), b)


def sample_uniform_union(u: IntervalUnion, rng, diag=None) -> float:
    """Length-weighted uniform draw from a union of intervals."""
    if not u:
        raise EmptySliceError("cannot draw from an empty interval union")
    total = total_length(u)
    if total <= 0.0:
        if diag is not None:
            diag.degenerate_draws += 1
        lo, hi = u.intervals[0]
        return 0.5 * (lo + hi)
    pos = rng.uniform() * total
    for lo, hi in u:
        width = hi - lo
        if pos <= width:
            return min(lo + pos, hi)
        pos -= width
    return u.intervals[-1][1]


def sample_truncated_normal_union(mu: float, sigma2: float, u: IntervalUnion, rng, diag=None) -> float:
    """Draw from N(mu, sigma2) conditioned on the union ``u`` by CDF inversion.

    One uniform selects the interval and the position inside it, so the
    map from uniform to draw is the inverse CDF of the truncated law.
    """
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2!r}")
    if not u:
        raise EmptySliceError("cannot draw from an empty interval union")
    sd = math.sqrt(sigma2)
    std = [((lo - mu) / sd, (hi - mu) / sd) for lo, hi in u]
    masses = [_standard_mass(a, b) for a, b in std]
    total = math.fsum(masses)
    if not total >= TAIL_MASS_FLOOR:
        if diag is not None:
            diag.tail_fallbacks += 1
        return _closest_point(u, mu)
    target = rng.uniform() * total
    for (a, b), m, (lo, hi) in zip(std, masses, u):
        if m > 0.0 and target <= m:
            z = _invert_standard(a, b, target / m)
            return min(max(mu + sd * z, lo), hi)
        target -= m
    # rounding pushed target past the last interval with mass
    k = max(i for i, m in enumerate(masses) if m > 0.0)
    a, b = std[k]
    lo, hi = u.intervals[k]
    return min(max(mu + sd * _invert_standard(a, b, 1.0), lo), hi)


def _closest_point(u: IntervalUnion, x: float) -> float:
    best, dist = None, math.inf
    for lo, hi in u:
        c = min(max(x, lo), hi)
        if abs(c - x) < dist:
            best, dist = c, abs(c - x)
    return best


def sample_shifted_exponential(rate: float, lower: float, rng) -> float:
    """Exponential with the given rate, shifted to start at ``lower``."""
    if not rate > 0:
        raise ValueError(f"rate must be > 0, got {rate!r}")
    return lower - math.log1p(-rng.uniform()) / rate
