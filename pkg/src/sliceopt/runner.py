"""Chain orchestration: single runs, energy-level sweeps and validation grids."""

from __future__ import annotations

import math
import struct
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .core import (ObjectiveId, Occupancy, Point, StepDiagnostics, Trace, as_kappa, best_point,
                   ergodic_mean, mode_occupancy)
from .exceptions import ConfigError
from .objectives import evaluate, formula, get_spec
from .rng import derive_stream
from .samplers import initial_state, kernel_for

SAMPLERS = ("slice", "metropolis", "generic")
ROSENBROCK_START = Point(-1.0, 1.0)


@dataclass(frozen=True)
class ExperimentConfig:
    objective: ObjectiveId
    kappas: tuple
    iterations: int = 1000
    burnin: int = 100
    seed: int = 42
    start: Optional[Point] = None
    sampler: str = "slice"
    metropolis_sigma: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "objective", ObjectiveId.parse(self.objective))
        kappas = self.kappas
        if isinstance(kappas, (int, float)):
            kappas = (kappas,)
        kappas = tuple(as_kappa(k) for k in kappas)
        if not kappas:
            raise ConfigError("at least one kappa is required")
        object.__setattr__(self, "kappas", kappas)
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigError(f"iterations must be a positive integer, got {self.iterations!r}")
        if int(self.burnin) != self.burnin or not 0 <= self.burnin < self.iterations:
            raise ConfigError(f"burnin must satisfy 0 <= burnin < iterations, got {self.burnin!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.sampler not in SAMPLERS:
            raise ConfigError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if self.sampler == "metropolis" and not self.metropolis_sigma > 0:
            raise ConfigError(f"metropolis_sigma must be > 0, got {self.metropolis_sigma!r}")
        if self.start is not None:
            object.__setattr__(self, "start", Point.of(*self.start))

    @property
    def start_point(self) -> Point:
        if self.start is not None:
            return self.start
        if self.objective is ObjectiveId.ROSENBROCK:
            return ROSENBROCK_START
        return get_spec(self.objective).center

    def sorted_kappas(self) -> tuple:
        if any(a >= b for a, b in zip(self.kappas, self.kappas[1:])):
            s = sorted(set(self.kappas))
            if len(s) != len(self.kappas):
                raise ConfigError(f"duplicate kappas in {self.kappas}")
            return tuple(s)
        return self.kappas


@dataclass
class RunResult:
    objective: ObjectiveId
    kappa: float
    config: ExperimentConfig
    trace: Trace
    best: tuple
    ergodic_mean: Point
    occupancy: Optional[Occupancy]
    diagnostics: StepDiagnostics = field(default_factory=StepDiagnostics)
    wall_time: float = 0.0


def kappa_stream_index(kappa: float) -> int:
    """Stream index for a kappa: the bit pattern of the float64 value."""
    return struct.unpack("<Q", struct.pack("<d", float(kappa)))[0]


def run_chain(config: ExperimentConfig, kappa=None) -> RunResult:
    """Run ``config.iterations`` steps at one energy level.

    ``kappa`` defaults to the config's only kappa. The stream is
    ``derive_stream(seed, kappa_stream_index(kappa))`` so a chain depends
    only on (seed, kappa, config) and not on any sweep it belongs to.
    """
    if kappa is None:
        if len(config.kappas) != 1:
            raise ConfigError("run_chain needs a single kappa; use run_sweep for several")
        kappa = config.kappas[0]
    kappa = as_kappa(kappa)
    step = kernel_for(config.objective, config.sampler, config.metropolis_sigma)
    rng = derive_stream(config.seed, kappa_stream_index(kappa))
    diag = StepDiagnostics()
    G = int(config.iterations)
    points = np.empty((G, 2))
    fvals = np.empty(G)
    state = initial_state(config.start_point)

    t0 = time.perf_counter()
    for g in range(G):
        state = step(state, kappa, rng, diag)
        points[g] = state.point
        fvals[g] = evaluate(config.objective, state.point)
    wall = time.perf_counter() - t0

    trace = Trace(points, fvals, int(config.burnin))
    modes = get_spec(config.objective).mode_set()
    return RunResult(
        objective=config.objective,
        kappa=kappa,
        config=config,
        trace=trace,
        best=best_point(trace),
        ergodic_mean=ergodic_mean(trace),
        occupancy=mode_occupancy(trace, modes) if modes is not None else None,
        diagnostics=diag,
        wall_time=wall,
    )


def _run_one(config, kappa):
    return run_chain(config, kappa)


def run_sweep(config: ExperimentConfig, n_jobs: int = 1) -> list:
    """One independent chain per kappa, returned in increasing kappa order."""
    kappas = config.sorted_kappas()
    if n_jobs == 1:
        return [run_chain(config, k) for k in kappas]
    from joblib import Parallel, delayed

    return list(Parallel(n_jobs=n_jobs)(delayed(_run_one)(config, k) for k in kappas))


def cell_centers(box, n: int):
    x1_lo, x1_hi, x2_lo, x2_hi = box
    e1 = np.linspace(x1_lo, x1_hi, n + 1)
    e2 = np.linspace(x2_lo, x2_hi, n + 1)
    return 0.5 * (e1[:-1] + e1[1:]), 0.5 * (e2[:-1] + e2[1:])


def grid_reference(objective, kappa, box=None, n: int = 200) -> np.ndarray:
    """Discretised Boltzmann density: cell mass ∝ exp(-kappa f(center)).

    Returns an ``(n, n)`` array indexed ``[x1 cell, x2 cell]`` summing to 1.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    kappa = float(kappa)
    if box is None:
        box = get_spec(objective).domain_box
    c1, c2 = cell_centers(box, n)
    X1, X2 = np.meshgrid(c1, c2, indexing="ij")
    logp = -kappa * np.asarray(formula(objective)(X1, X2), dtype=float)
    logp -= logp.max()
    p = np.exp(logp)
    return p / math.fsum(p.ravel())


def empirical_grid(points, box, n: int) -> np.ndarray:
    """Normalised 2-D histogram of ``points`` on the same cells as ``grid_reference``.

    Points outside the box are dropped before normalising.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    x1_lo, x1_hi, x2_lo, x2_hi = box
    h, _, _ = np.histogram2d(points[:, 0], points[:, 1], bins=n,
                             range=[[x1_lo, x1_hi], [x2_lo, x2_hi]])
    total = h.sum()
    if total == 0:
        raise ValueError("no points fall inside the box")
    return h / total


def tv_distance(p, q) -> float:
    """Total-variation distance ``0.5 * sum |p - q|`` between probability arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")
    for name, a in (("p", p), ("q", q)):
        if abs(a.sum() - 1.0) > 1e-9:
            raise ValueError(f"{name} sums to {a.sum()!r}, not 1")
    return float(min(1.0, 0.5 * np.abs(p - q).sum()))


def histogram_tv(a, b, bins, value_range) -> float:
    """TV distance between the normalised 1-D histograms of two samples."""
    ha, _ = np.histogram(a, bins=bins, range=value_range)
    hb, _ = np.histogram(b, bins=bins, range=value_range)
    return tv_distance(ha / ha.sum(), hb / hb.sum())


def with_kappa(config: ExperimentConfig, kappa) -> ExperimentConfig:
    return replace(config, kappas=(as_kappa(kappa),))
