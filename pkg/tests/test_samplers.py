import math

import numpy as np
import pytest
from scipy import stats

from oracles import grid_iid
from sliceopt.core import Point, StepDiagnostics
from sliceopt.exceptions import ConfigError, UnsupportedError
from sliceopt.intervals import contains, invert_square_band
from sliceopt.objectives import additive_terms, formula, get_spec
from sliceopt.rng import RngStream, derive_stream
from sliceopt.runner import ExperimentConfig, run_chain
from sliceopt.samplers import (ChainState, _shubert_sweep, generic_additive_slice_step, generic_kernel,
                               himmelblau_step, kernel_for, metropolis_step, rastrigin_step,
                               rosenbrock_step, shubert_step)
from sliceopt.objectives import shubert_C

N_INV = 20_000
KS_INV = 0.02  # two-sample KS critical value at n = m = 2e4, alpha ~ 1e-3


def _one_step_from_target(objective, kappa, step, seed=3):
    box = get_spec(objective).domain_box
    start = grid_iid(formula(objective), kappa, box, N_INV, seed=1)
    fresh = grid_iid(formula(objective), kappa, box, N_INV, seed=2)
    rng = derive_stream(seed, 0)
    d = StepDiagnostics()
    out = np.array([step(ChainState(Point(a, b)), kappa, rng, d).point for a, b in start])
    return out, fresh, d


@pytest.mark.slow
@pytest.mark.parametrize("objective, kappa, step", [
    ("himmelblau", 0.1, himmelblau_step),
    ("himmelblau", 1.0, himmelblau_step),
    ("rastrigin", 1.0, rastrigin_step),
    ("shubert", 1.0, shubert_step),
    ("booth", 0.1, generic_kernel("booth")),
    ("michalewicz", 1.0, generic_kernel("michalewicz")),
])
def test_kernel_preserves_target(objective, kappa, step):
    # start from (near-)exact draws; one transition must leave them distributed as the target
    out, fresh, d = _one_step_from_target(objective, kappa, step)
    for i in range(2):
        assert stats.ks_2samp(out[:, i], fresh[:, i]).statistic < KS_INV
    assert d.constraint_violations == 0 and d.empty_slice_repairs == 0


@pytest.mark.parametrize("kappa", [1.0, 5.0, 5000.0])
def test_rosenbrock_kernel_preserves_target(kappa):
    # exact target: x1 ~ N(1, 1/(2k)), x2 | x1 ~ N(x1^2, 1/(2kc))
    g = np.random.default_rng(0)
    x1 = g.normal(1, math.sqrt(1 / (2 * kappa)), N_INV)
    x2 = x1 ** 2 + g.normal(0, math.sqrt(1 / (200 * kappa)), N_INV)
    rng = derive_stream(9, 0)
    d = StepDiagnostics()
    out = np.array([rosenbrock_step(ChainState(Point(a, b)), kappa, rng, d).point for a, b in zip(x1, x2)])
    assert stats.kstest(out[:, 0], "norm", args=(1, math.sqrt(1 / (2 * kappa)))).statistic < 0.015
    resid = (out[:, 1] - out[:, 0] ** 2) * math.sqrt(200 * kappa)
    assert stats.kstest(resid, "norm").statistic < 0.015
    assert d.constraint_violations == 0 and d.empty_slice_repairs == 0


def test_rosenbrock_x2_conditional():
    # x2 | x1 is drawn with the slice variable integrated out
    rng = derive_stream(4, 0)
    x2 = np.array([rosenbrock_step(ChainState(Point(0.8, 5.0)), 2.0, rng).point.x2 for _ in range(N_INV)])
    z = (x2 - 0.64) * math.sqrt(2 * 2.0 * 100)
    assert stats.kstest(z, "norm").statistic < 0.015


def test_rosenbrock_slice_membership():
    s = rosenbrock_step(ChainState(Point(-1.0, 1.0)), 5000.0, derive_stream(42, 0))
    log_u, = s.aux
    x1, x2 = s.point
    assert -5000 * 100 * (x2 - x1 * x1) ** 2 >= log_u - 1e-9


def test_rosenbrock_golden_first_point():
    r = run_chain(ExperimentConfig("rosenbrock", (5000.0,), 3, 0, 42))
    assert tuple(r.trace.points[0]) == (1.0001090768577543, 0.999715018533008)


def test_himmelblau_constraints_hold():
    rng = RngStream(1)
    s = ChainState(Point(0.0, 0.0))
    for _ in range(500):
        s = himmelblau_step(s, 1.0, rng)
        lu1, lu2 = s.aux
        x1, x2 = s.point
        assert -(x1 * x1 + x2 - 11) ** 2 >= lu1 - 1e-9
        assert -(x1 + x2 * x2 - 7) ** 2 >= lu2 - 1e-9


def test_rastrigin_constraints_and_box():
    rng = RngStream(2)
    s = ChainState(Point(0.0, 0.0))
    for _ in range(500):
        s = rastrigin_step(s, 0.5, rng)
        for x, y in zip(s.point, s.aux):
            assert -0.5 * 10 * math.cos(2 * math.pi * x) <= y + 1e-9
            assert -5.12 <= x <= 5.12
    with pytest.raises(ValueError):
        rastrigin_step(ChainState(Point(6.0, 0.0)), 1.0, rng)


def test_shubert_constraints_and_box():
    rng = RngStream(3)
    s = ChainState(Point(0.0, 0.0))
    for _ in range(200):
        prev = s.point
        s = shubert_step(s, 1.0, rng)
        c2 = float(shubert_C(prev.x2))
        for j, y in enumerate(s.aux[0], start=1):
            assert c2 * j * math.cos((j + 1) * s.point.x1 + j) <= y + 1e-8
        assert all(-10 <= v <= 10 for v in s.point)
    with pytest.raises(ValueError):
        shubert_step(ChainState(Point(11.0, 0.0)), 1.0, rng)


def test_shubert_conditional_histogram():
    # x1 | x2 has density exp(-kappa C(x2) C(x1)); iterate the x1 update alone
    kappa, c = 1.0, float(shubert_C(0.7))
    rng = derive_stream(5, 0)
    x, xs = 0.0, []
    for _ in range(40_000):
        x, _ = _shubert_sweep(x, c, kappa, rng, StepDiagnostics())
        xs.append(x)
    edges = np.linspace(-10, 10, 201)
    fine = np.linspace(-10, 10, 200_001)
    ref = np.histogram(fine, bins=edges, weights=np.exp(-kappa * c * shubert_C(fine)))[0]
    emp = np.histogram(xs, bins=edges)[0]
    tv = 0.5 * np.abs(emp / emp.sum() - ref / ref.sum()).sum()
    assert tv < 0.02


def test_shubert_zero_conditioning_is_uniform():
    # C(other) == 0 makes the conditional flat on the box
    rng = derive_stream(6, 0)
    xs = [_shubert_sweep(0.0, 0.0, 1.0, rng, StepDiagnostics())[0] for _ in range(5000)]
    assert stats.kstest(xs, "uniform", args=(-10, 20)).statistic < 0.03


def test_generic_sampler_box_and_slices():
    terms = additive_terms("booth")
    rng = RngStream(7)
    s = ChainState(Point(0.0, 0.0))
    for _ in range(300):
        s = generic_additive_slice_step(terms, (-10, 10, -10, 10), 0.1, s, rng)
        X = np.array([s.point])
        for t, y in zip(terms, s.aux):
            assert t(X)[0] <= y
        assert all(-10 <= v <= 10 for v in s.point)


def test_generic_sampler_gives_up_gracefully():
    # slice of width ~1e-9 around the current point: 1000 box proposals all miss
    terms = [lambda X: 1e12 * X[:, 0] ** 2]
    d = StepDiagnostics()
    s = generic_additive_slice_step(terms, (-1, 1, -1, 1), 1e6, ChainState(Point(0.0, 0.0)),
                                    RngStream(0), d, max_proposals=1000)
    assert s.point == Point(0.0, 0.0)
    assert d.empty_slice_repairs == 1


def test_generic_sampler_needs_bounded_box():
    with pytest.raises(ConfigError):
        generic_additive_slice_step(additive_terms("booth"), (-math.inf, 1, 0, 1), 1.0,
                                    ChainState(Point(0.0, 0.0)), RngStream(0))
    with pytest.raises(UnsupportedError):
        generic_kernel("shubert")


def test_metropolis_bounds_and_limits():
    d = StepDiagnostics()
    rng = RngStream(8)
    s = ChainState(Point(5.1, 5.1))
    for _ in range(1000):
        s = metropolis_step("rastrigin", 1.0, 0.5, s, rng, d)
        assert -5.12 <= s.point.x1 <= 5.12 and -5.12 <= s.point.x2 <= 5.12
    assert d.metropolis_proposals == 1000
    # kappa = 0: an unbounded objective accepts every proposal
    d0 = StepDiagnostics()
    s = ChainState(Point(0.0, 0.0))
    for _ in range(200):
        s = metropolis_step("himmelblau", 0.0, 1.0, s, rng, d0)
    assert d0.metropolis_accepted == 200
    with pytest.raises(ValueError):
        metropolis_step("himmelblau", 1.0, 0.0, s, rng)
    with pytest.raises(ValueError):
        metropolis_step("himmelblau", -1.0, 1.0, s, rng)


def test_metropolis_golden_acceptance():
    r = run_chain(ExperimentConfig("himmelblau", (1.0,), 10_000, 0, 42, sampler="metropolis",
                                   metropolis_sigma=0.5))
    assert r.diagnostics.metropolis_proposals == 10_000
    assert r.diagnostics.metropolis_accepted == 1166


def test_kernel_for():
    assert kernel_for("rosenbrock") is rosenbrock_step
    assert callable(kernel_for("booth"))
    assert callable(kernel_for("himmelblau", "metropolis", 0.3))
    with pytest.raises(UnsupportedError):
        kernel_for("rosenbrock", "hmc")


@pytest.mark.parametrize("objective, kappa", [("rosenbrock", 5000.0), ("rosenbrock", 1.0),
                                              ("himmelblau", 5.0), ("rastrigin", 5.0),
                                              ("shubert", 5.0), ("michalewicz", 5.0)])
def test_short_runs_are_clean(objective, kappa):
    r = run_chain(ExperimentConfig(objective, (kappa,), 300, 0, 1))
    assert r.diagnostics.constraint_violations == 0
    assert r.diagnostics.empty_slice_repairs == 0
    assert np.all(np.isfinite(r.trace.points))


def test_square_band_draws_reach_both_branches():
    band = invert_square_band(0.8, 1.2)
    rng = derive_stream(1, 1)
    s = ChainState(Point(1.0, 1.0))
    signs = set()
    for _ in range(200):
        s = rosenbrock_step(s, 1.0, rng)
        signs.add(s.point.x1 > 0)
    assert signs == {True, False}
    assert contains(band, 1.0) and contains(band, -1.0)


def test_michalewicz_generic_golden():
    r = run_chain(ExperimentConfig("michalewicz", (5.0,), 10_000, 100, 42))
    assert r.best[1] <= -1.70
    assert r.diagnostics.empty_slice_repairs == 0
