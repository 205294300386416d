"""Finite unions of closed intervals and the slice-region inversions built on them."""

from __future__ import annotations

import bisect
import math
from typing import Iterable, Tuple

MERGE_TOL = 1e-14

GE = "ge"
LE = "le"


class IntervalUnion:
    """Sorted, disjoint union of closed intervals ``[lo, hi]``.

    Instances are immutable. Intervals closer than ``MERGE_TOL`` are merged
    on construction; zero-length intervals are kept.
    """

    __slots__ = ("_iv",)

    def __init__(self, intervals: Iterable[Tuple[float, float]] = ()):
        iv = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("interval endpoints must not be NaN")
            if lo > hi:
                raise ValueError(f"interval lower end {lo} exceeds upper end {hi}")
            iv.append((lo, hi))
        iv.sort()
        self._iv = _merge_sorted(iv)

    @classmethod
    def _trusted(cls, iv):
        obj = cls.__new__(cls)
        obj._iv = tuple(iv)
        return obj

    @classmethod
    def interval(cls, lo, hi) -> "IntervalUnion":
        return cls([(lo, hi)])

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls._trusted(())

    @property
    def intervals(self) -> tuple:
        return self._iv

    def __iter__(self):
        return iter(self._iv)

    def __len__(self):
        return len(self._iv)

    def __bool__(self):
        return bool(self._iv)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self._iv == other._iv

    def __hash__(self):
        return hash(self._iv)

    def __repr__(self):
        if not self._iv:
            return "IntervalUnion(∅)"
        return "IntervalUnion(" + " ∪ ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in self._iv) + ")"

    def __and__(self, other):
        return intersect(self, other)

    def normalized(self) -> "IntervalUnion":
        return IntervalUnion(self._iv)

    @property
    def lo(self) -> float:
        return self._iv[0][0]

    @property
    def hi(self) -> float:
        return self._iv[-1][1]


def _merge_sorted(iv):
    out = []
    for lo, hi in iv:
        if out and lo <= out[-1][1] + MERGE_TOL:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def intersect(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    """Exact set intersection of two unions."""
    A, B = a.intervals, b.intervals
    out = []
    i = j = 0
    while i < len(A) and j < len(B):
        lo = max(A[i][0], B[j][0])
        hi = min(A[i][1], B[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return IntervalUnion._trusted(_merge_sorted(out))


def intersect_all(unions) -> IntervalUnion:
    unions = list(unions)
    result = unions[0]
    for u in unions[1:]:
        if not result:
            break
        result = intersect(result, u)
    return result


def total_length(u: IntervalUnion) -> float:
    return sum(hi - lo for lo, hi in u.intervals)


def contains(u: IntervalUnion, x: float) -> bool:
    """Closed-endpoint membership test."""
    iv = u.intervals
    k = bisect.bisect_right(iv, (x, math.inf)) - 1
    return k >= 0 and iv[k][0] <= x <= iv[k][1]


def invert_square_band(lo: float, hi: float) -> IntervalUnion:
    """The set ``{x : lo <= x**2 <= hi}``."""
    if lo > hi:
        raise ValueError(f"band lower bound {lo} exceeds upper bound {hi}")
    if hi < 0:
        return IntervalUnion.empty()
    r_hi = math.sqrt(hi)
    if lo <= 0:
        return IntervalUnion._trusted(((-r_hi, r_hi),))
    r_lo = math.sqrt(lo)
    return IntervalUnion._trusted(((-r_hi, -r_lo), (r_lo, r_hi)))


def solve_cosine(omega: float, phi: float, t: float, direction: str, domain) -> IntervalUnion:
    """Solution set of ``cos(omega * x + phi) >= t`` (or ``<= t``) within ``domain``.

    ``t`` is clamped into [-1, 1] before inversion, so thresholds that are
    out of range by rounding give the full or empty set.
    """
    d_lo, d_hi = float(domain[0]), float(domain[1])
    if omega == 0:
        raise ValueError("omega must be non-zero")
    if not d_lo < d_hi:
        raise ValueError(f"degenerate domain ({d_lo}, {d_hi})")
    if direction not in (GE, LE):
        raise ValueError(f"direction must be 'ge' or 'le', got {direction!r}")
    full = IntervalUnion._trusted(((d_lo, d_hi),))

    if direction == GE:
        if t <= -1.0:
            return full
        if t > 1.0:
            return IntervalUnion.empty()
    else:
        if t >= 1.0:
            return full
        if t < -1.0:
            return IntervalUnion.empty()

    if omega < 0:
        omega, phi = -omega, -phi
    w = math.acos(min(1.0, max(-1.0, t)))
    two_pi = 2.0 * math.pi
    # in phase theta = omega*x + phi the solutions are
    #   ge: [2πk - w, 2πk + w]       le: [2πk + w, 2πk + 2π - w]
    if direction == GE:
        left, right = -w, w
    else:
        left, right = w, two_pi - w
    th_lo = omega * d_lo + phi
    th_hi = omega * d_hi + phi
    k0 = math.floor((th_lo - right) / two_pi)
    k1 = math.ceil((th_hi - left) / two_pi)
    out = []
    for k in range(k0, k1 + 1):
        lo = (two_pi * k + left - phi) / omega
        hi = (two_pi * k + right - phi) / omega
        lo, hi = max(lo, d_lo), min(hi, d_hi)
        if lo <= hi:
            out.append((lo, hi))
    return IntervalUnion._trusted(_merge_sorted(out))
