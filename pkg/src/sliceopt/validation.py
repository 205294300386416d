"""Named invariant suites run by ``sliceopt validate``.

Each suite returns a report dict ``{"suite", "passed", "checks": [...]}``
where every check carries its measured value and threshold.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .core import ObjectiveId
from .intervals import GE, IntervalUnion, solve_cosine
from .objectives import booth, booth_factorization, booth_quadratic_form, resolve_booth_q
from .rng import derive_stream, sample_shifted_exponential, sample_truncated_normal_union
from .runner import ExperimentConfig, empirical_grid, grid_reference, run_chain, tv_distance

TRUNC_CONFIGS = [
    (0.0, 1.0, IntervalUnion([(-1.0, 1.0)])),
    (0.0, 1.0, IntervalUnion([(2.0, 3.0), (5.0, 6.0)])),
    (1.0, 0.01, IntervalUnion([(-1.1, -0.9), (0.95, 1.02)])),
    (0.0, 0.5, solve_cosine(2 * np.pi, 0.0, 0.3, GE, (-5.12, 5.12))),
    (2.0, 4.0, IntervalUnion([(-3.0, -1.0), (0.0, 0.5), (4.0, 7.0)])),
]
EXP_CONFIGS = [(1.0, 0.0), (2.0, -3.0), (0.5, 4.0)]


def rejection_truncated_normal(mu, sigma2, u: IntervalUnion, n: int, seed: int = 0) -> np.ndarray:
    """Oracle: propose N(mu, sigma2), keep proposals that land in ``u``."""
    gen = np.random.default_rng(seed)
    lo = np.array([a for a, _ in u])
    hi = np.array([b for _, b in u])
    out = []
    have = 0
    while have < n:
        z = gen.normal(mu, np.sqrt(sigma2), size=max(4 * (n - have), 100_000))
        k = np.searchsorted(lo, z, side="right") - 1
        keep = (k >= 0) & (z <= hi[np.clip(k, 0, None)])
        out.append(z[keep])
        have += int(keep.sum())
    return np.concatenate(out)[:n]


def _check(name, value, threshold, passed, **extra):
    return {"name": name, "value": value, "threshold": threshold, "passed": bool(passed), **extra}


def _report(suite, checks):
    return {"suite": suite, "passed": all(c["passed"] for c in checks), "checks": checks}


def trunc_suite(seed: int = 42, n: int = 100_000, ks_max: float = 0.02, mean_rtol: float = 0.01):
    checks = []
    for i, (mu, s2, u) in enumerate(TRUNC_CONFIGS):
        rng = derive_stream(seed, 1000 + i)
        draws = np.array([sample_truncated_normal_union(mu, s2, u, rng) for _ in range(n)])
        oracle = rejection_truncated_normal(mu, s2, u, n, seed=seed + i)
        ks = float(stats.ks_2samp(draws, oracle).statistic)
        checks.append(_check(f"truncnorm[{i}] mu={mu} sigma2={s2} {u!r}", ks, ks_max, ks < ks_max))
    for i, (rate, lower) in enumerate(EXP_CONFIGS):
        rng = derive_stream(seed, 2000 + i)
        draws = np.array([sample_shifted_exponential(rate, lower, rng) for _ in range(n)])
        err = abs((draws.mean() - lower) * rate - 1.0)
        checks.append(_check(f"shifted_exp rate={rate} lower={lower}", float(err), mean_rtol,
                             err <= mean_rtol and draws.min() >= lower))
    return _report("trunc", checks)


def grid_tv_suite(seed: int = 42, n_samples: int = 200_000, n_grid: int = 200, tv_max: float = 0.05):
    box = (-6.0, 6.0, -6.0, 6.0)
    cfg = ExperimentConfig(ObjectiveId.HIMMELBLAU, (0.1,), n_samples + 100, 100, seed)
    result = run_chain(cfg)
    ref = grid_reference(ObjectiveId.HIMMELBLAU, 0.1, box, n_grid)
    tv = tv_distance(empirical_grid(result.trace.samples, box, n_grid), ref)
    floor = iid_tv_floor(ref, n_samples, seed=seed)
    return _report("grid-tv", [_check("himmelblau kappa=0.1 histogram TV", tv, tv_max, tv < tv_max,
                                      iid_noise_floor=floor)])


def iid_tv_floor(ref: np.ndarray, n: int, reps: int = 5, seed: int = 0) -> float:
    """Mean TV between ``ref`` and histograms of ``n`` exact iid draws from it."""
    gen = np.random.default_rng(seed)
    p = ref.ravel()
    return float(np.mean([0.5 * np.abs(gen.multinomial(n, p) / n - p).sum() for _ in range(reps)]))


MEMBERSHIP_RUNS = [
    (ObjectiveId.ROSENBROCK, (1.0, 5.0, 50.0, 5000.0)),
    (ObjectiveId.HIMMELBLAU, (0.1, 0.5, 1.0, 5.0)),
    (ObjectiveId.RASTRIGIN, (0.1, 0.5, 1.0, 5.0)),
    (ObjectiveId.SHUBERT, (0.1, 0.5, 1.0, 5.0)),
]


def membership_suite(seed: int = 42, iterations: int = 1000):
    checks = []
    for oid, kappas in MEMBERSHIP_RUNS:
        for k in kappas:
            r = run_chain(ExperimentConfig(oid, (k,), iterations, 0, seed))
            d = r.diagnostics
            bad = d.constraint_violations + d.empty_slice_repairs
            checks.append(_check(f"{oid.value} kappa={k}", bad, 0, bad == 0,
                                 constraint_violations=d.constraint_violations,
                                 empty_slice_repairs=d.empty_slice_repairs,
                                 tail_fallbacks=d.tail_fallbacks))
    return _report("membership", checks)


def booth_suite(seed: int = 42, n_points: int = 100, rtol: float = 1e-9):
    mu, Q = booth_factorization()
    resolved = resolve_booth_q(n_points, rtol, seed)
    pts = np.random.default_rng(seed).uniform(-10, 10, size=(n_points, 2))
    worst = max(abs(booth_quadratic_form(Q, p, mu) - booth(*p)) / max(1.0, abs(booth(*p))) for p in pts)
    gx = 2 * (mu.x1 + 2 * mu.x2 - 7) + 4 * (2 * mu.x1 + mu.x2 - 5)
    gy = 4 * (mu.x1 + 2 * mu.x2 - 7) + 2 * (2 * mu.x1 + mu.x2 - 5)
    return _report("booth", [
        _check("Q matches resolved sign convention", float(np.abs(Q - resolved).max()), 0.0,
               np.array_equal(Q, resolved), Q=Q.tolist()),
        _check("factorisation relative error", float(worst), rtol, worst <= rtol),
        _check("booth(1,3)", float(booth(1.0, 3.0)), 0.0, booth(1.0, 3.0) == 0.0),
        _check("gradient at mu", float(max(abs(gx), abs(gy))), 1e-9, max(abs(gx), abs(gy)) <= 1e-9),
    ])


SUITES = {
    "trunc": trunc_suite,
    "grid-tv": grid_tv_suite,
    "membership": membership_suite,
    "booth": booth_suite,
}
