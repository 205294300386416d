"""Domain types and chain summaries.

A chain targets the Boltzmann density ``exp(-kappa * f(x)) / Z``; since the
normaliser is never needed, everything here works with the unnormalised
log density ``-kappa * f(x)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .exceptions import ConfigError, DomainError, EmptyTraceError


class Point(NamedTuple):
    """A point in the plane, the projected state of every chain."""

    x1: float
    x2: float

    @classmethod
    def of(cls, x1, x2) -> "Point":
        x1, x2 = float(x1), float(x2)
        if not (math.isfinite(x1) and math.isfinite(x2)):
            raise DomainError(f"point must be finite, got ({x1}, {x2})")
        return cls(x1, x2)


@dataclass(frozen=True)
class EnergyLevel:
    """Inverse temperature ``kappa`` of the Boltzmann density."""

    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not (math.isfinite(k) and k > 0):
            raise ConfigError(f"kappa must be finite and > 0, got {self.kappa!r}")
        object.__setattr__(self, "kappa", k)

    def __float__(self):
        return self.kappa


def as_kappa(kappa) -> float:
    """Validate ``kappa`` (float or EnergyLevel) and return it as a float."""
    if isinstance(kappa, EnergyLevel):
        return kappa.kappa
    return EnergyLevel(kappa).kappa


class ObjectiveId(str, enum.Enum):
    ROSENBROCK = "rosenbrock"
    HIMMELBLAU = "himmelblau"
    RASTRIGIN = "rastrigin"
    SHUBERT = "shubert"
    BOOTH = "booth"
    MICHALEWICZ = "michalewicz"

    @classmethod
    def parse(cls, value) -> "ObjectiveId":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ConfigError(f"unknown objective {value!r}; expected one of {names}") from None


class TraceEntry(NamedTuple):
    iter: int
    phase: str
    point: Point
    f: float


@dataclass(frozen=True)
class Trace:
    """Record of one chain run.

    Row ``i`` of ``points`` and ``f`` is iteration ``i + 1``; the first
    ``burnin`` rows belong to the burn-in phase.
    """

    points: np.ndarray
    f: np.ndarray
    burnin: int = 0

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, 2)
        f = np.array(self.f, dtype=float).reshape(-1)
        if len(points) != len(f):
            raise ValueError("points and f must have the same length")
        if not 0 <= self.burnin <= len(f):
            raise ValueError(f"burnin {self.burnin} out of range for {len(f)} entries")
        points.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "f", f)

    def __len__(self):
        return len(self.f)

    @property
    def samples(self) -> np.ndarray:
        """Sample-phase points, shape ``(G - G0, 2)``."""
        return self.points[self.burnin:]

    @property
    def sample_f(self) -> np.ndarray:
        return self.f[self.burnin:]

    def entries(self) -> Iterator[TraceEntry]:
        for i, ((x1, x2), fv) in enumerate(zip(self.points.tolist(), self.f.tolist())):
            phase = "burnin" if i < self.burnin else "sample"
            yield TraceEntry(i + 1, phase, Point(x1, x2), fv)


@dataclass(frozen=True)
class ModeSet:
    """Known minima plus the radius used to assign samples to them."""

    modes: tuple = field(default_factory=tuple)
    radius: float = 0.6

    def __post_init__(self):
        modes = tuple(Point.of(*m) for m in self.modes)
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ConfigError(f"radius must be > 0, got {self.radius!r}")
        for i in range(len(modes)):
            for j in range(i + 1, len(modes)):
                d = math.hypot(modes[i].x1 - modes[j].x1, modes[i].x2 - modes[j].x2)
                if d <= 2 * self.radius:
                    raise ConfigError(
                        f"modes {modes[i]} and {modes[j]} are {d:.4g} apart, "
                        f"need more than 2*radius={2 * self.radius:.4g}"
                    )
        object.__setattr__(self, "modes", modes)

    def __len__(self):
        return len(self.modes)


class Occupancy(NamedTuple):
    fractions: tuple
    unassigned: float


def boltzmann_log_density(objective, kappa, x) -> float:
    """Unnormalised Boltzmann log density ``-kappa * f(x)``."""
    from .objectives import evaluate

    k = as_kappa(kappa)
    fx = evaluate(objective, Point.of(*x))
    if not math.isfinite(fx):
        raise DomainError(f"{ObjectiveId.parse(objective).value} is not finite at {tuple(x)}")
    return -k * fx


def ergodic_mean(trace: Trace) -> Point:
    samples = trace.samples
    if len(samples) == 0:
        raise EmptyTraceError("trace has no sample-phase entries")
    m = samples.mean(axis=0)
    return Point(float(m[0]), float(m[1]))


def best_point(trace: Trace, objective=None) -> tuple:
    """Lowest-f entry over the whole trace, burn-in included.

    Ties resolve to the earliest iteration. ``objective`` is accepted for
    symmetry with the rest of the API; the stored f values are used.
    """
    if len(trace) == 0:
        raise EmptyTraceError("trace is empty")
    i = int(np.argmin(trace.f))
    x1, x2 = trace.points[i]
    return Point(float(x1), float(x2)), float(trace.f[i])


def assign_modes(points: np.ndarray, modes: ModeSet) -> np.ndarray:
    """Index of the mode within ``modes.radius`` of each point, or -1."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    labels = np.full(len(points), -1, dtype=int)
    for k, m in enumerate(modes.modes):
        d2 = (points[:, 0] - m.x1) ** 2 + (points[:, 1] - m.x2) ** 2
        labels[d2 <= modes.radius ** 2] = k
    return labels


def mode_occupancy(trace: Trace, modes: ModeSet) -> Occupancy:
    samples = trace.samples
    if len(samples) == 0:
        raise EmptyTraceError("trace has no sample-phase entries")
    labels = assign_modes(samples, modes)
    n = len(samples)
    counts = np.bincount(labels + 1, minlength=len(modes) + 1)
    return Occupancy(tuple(float(c) / n for c in counts[1:]), float(counts[0]) / n)


def visited_modes(trace: Trace, modes: ModeSet, include_burnin: bool = False) -> Sequence[bool]:
    pts = trace.points if include_burnin else trace.samples
    labels = assign_modes(pts, modes)
    return [bool(np.any(labels == k)) for k in range(len(modes))]


@dataclass
class StepDiagnostics:
    """Counters accumulated by the transition kernels over a run.

    ``empty_slice_repairs`` and ``tail_fallbacks`` flag floating-point
    pathologies; a healthy run keeps both at zero.
    """

    empty_slice_repairs: int = 0
    tail_fallbacks: int = 0
    degenerate_draws: int = 0
    constraint_violations: int = 0
    metropolis_proposals: int = 0
    metropolis_accepted: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)

    @property
    def acceptance_rate(self) -> float:
        if self.metropolis_proposals == 0:
            return float("nan")
        return self.metropolis_accepted / self.metropolis_proposals
