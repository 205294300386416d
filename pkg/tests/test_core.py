import math

import numpy as np
import pytest

from sliceopt.core import (EnergyLevel, ModeSet, ObjectiveId, Point, StepDiagnostics, Trace, as_kappa,
                           assign_modes, best_point, boltzmann_log_density, ergodic_mean,
                           mode_occupancy, visited_modes)
from sliceopt.exceptions import ConfigError, DomainError, EmptyTraceError


def test_point_rejects_non_finite():
    assert Point.of(1, 2) == Point(1.0, 2.0)
    with pytest.raises(DomainError):
        Point.of(math.nan, 0)
    with pytest.raises(DomainError):
        Point.of(0, math.inf)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_kappa_must_be_positive_finite(bad):
    with pytest.raises(ConfigError):
        EnergyLevel(bad)
    with pytest.raises(ValueError):
        as_kappa(bad)


def test_as_kappa_accepts_energy_level():
    assert as_kappa(EnergyLevel(5)) == 5.0
    assert as_kappa(0.1) == 0.1


def test_objective_parse():
    assert ObjectiveId.parse("Rastrigin") is ObjectiveId.RASTRIGIN
    with pytest.raises(ConfigError):
        ObjectiveId.parse("ackley")


@pytest.mark.parametrize("oid, x, kappa, expected", [
    ("rosenbrock", (1, 1), 5.0, 0.0),
    ("himmelblau", (0, 0), 1.0, -170.0),
    ("rastrigin", (0, 0), 2.0, 0.0),
    ("booth", (0, 0), 0.5, -37.0),
])
def test_boltzmann_log_density(oid, x, kappa, expected):
    assert boltzmann_log_density(oid, kappa, x) == pytest.approx(expected, abs=1e-12)


def test_log_density_validates():
    with pytest.raises(ConfigError):
        boltzmann_log_density("rosenbrock", 0.0, (0, 0))
    with pytest.raises(DomainError):
        boltzmann_log_density("rosenbrock", 1.0, (math.nan, 0))


def _trace():
    pts = [(0, 0), (1, 1), (2, 2), (3, 3)]
    return Trace(pts, [5.0, 1.0, 1.0, 2.0], burnin=1)


def test_trace_views_and_entries():
    t = _trace()
    assert len(t) == 4
    assert t.samples.shape == (3, 2)
    assert t.sample_f.tolist() == [1.0, 1.0, 2.0]
    phases = [e.phase for e in t.entries()]
    assert phases == ["burnin", "sample", "sample", "sample"]
    assert [e.iter for e in t.entries()] == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        t.points[0, 0] = 9.0


def test_trace_validates():
    with pytest.raises(ValueError):
        Trace([(0, 0)], [1.0, 2.0])
    with pytest.raises(ValueError):
        Trace([(0, 0)], [1.0], burnin=2)


def test_ergodic_mean_excludes_burnin():
    assert ergodic_mean(_trace()) == Point(2.0, 2.0)


def test_best_point_earliest_tie_and_includes_burnin():
    assert best_point(_trace()) == (Point(1.0, 1.0), 1.0)
    t = Trace([(0, 0), (1, 1)], [-1.0, 0.0], burnin=1)
    assert best_point(t) == (Point(0.0, 0.0), -1.0)


def test_empty_trace_errors():
    t = Trace(np.empty((2, 2)), [0.0, 0.0], burnin=2)
    with pytest.raises(EmptyTraceError):
        ergodic_mean(t)
    with pytest.raises(EmptyTraceError):
        best_point(Trace(np.empty((0, 2)), []))


def test_modeset_requires_separation():
    with pytest.raises(ConfigError):
        ModeSet(((0, 0), (1, 0)), radius=0.6)
    ModeSet(((0, 0), (1.3, 0)), radius=0.6)


def test_assign_modes_and_occupancy():
    modes = ModeSet(((0, 0), (3, 0)), radius=0.6)
    pts = np.array([[0.1, 0.1], [3.0, 0.59], [1.5, 0.0], [0.6, 0.0]])
    assert assign_modes(pts, modes).tolist() == [0, 1, -1, 0]
    t = Trace(pts, np.zeros(4), burnin=0)
    occ = mode_occupancy(t, modes)
    assert occ.fractions == (0.5, 0.25)
    assert occ.unassigned == 0.25
    assert visited_modes(t, modes) == [True, True]


def test_diagnostics():
    d = StepDiagnostics()
    assert math.isnan(d.acceptance_rate)
    d.metropolis_proposals, d.metropolis_accepted = 4, 1
    assert d.acceptance_rate == 0.25
    assert set(d.as_dict()) >= {"empty_slice_repairs", "tail_fallbacks", "constraint_violations"}
