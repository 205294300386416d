"""One-step transition kernels targeting ``exp(-kappa * f(x))``.

Each kernel maps ``(state, kappa, rng)`` to a new :class:`ChainState`. Slice
variables are redrawn at the start of every step, so a state's ``aux`` field
records the auxiliaries used to produce its point; it is never read back.

Every slice kernel audits its own draws: after a coordinate is drawn, the
slice inequalities it was drawn under are re-evaluated at the new value and
failures are counted in ``StepDiagnostics.constraint_violations``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .core import ObjectiveId, Point, StepDiagnostics
from .exceptions import ConfigError, UnsupportedError
from .intervals import GE, LE, IntervalUnion, intersect, intersect_all, invert_square_band, solve_cosine
from .objectives import (RASTRIGIN_A, ROSENBROCK_C, additive_terms, evaluate, get_spec,
                         shubert_C)
from .rng import (sample_shifted_exponential, sample_truncated_normal_union,
                  sample_uniform_union)

# relative slack for the post-draw audit; endpoints come out of sqrt/acos
AUDIT_RTOL = 1e-9
GENERIC_MAX_PROPOSALS = 100_000

RASTRIGIN_BOX = (-5.12, 5.12)
SHUBERT_BOX = (-10.0, 10.0)


class ChainState(NamedTuple):
    """Current point plus the auxiliaries drawn in the step that produced it.

    aux layout per kernel:

    * rosenbrock: ``(log_u,)``
    * himmelblau: ``(log_u1, log_u2)``
    * rastrigin: ``(y1, y2)``
    * shubert: ``((y_1..y_5 for the x1 sweep), (y'_1..y'_5 for the x2 sweep))``
    * generic: ``(y_1, ..., y_K)``
    * metropolis: ``(accepted,)``

    Uniform slice variables are stored as logs so that they do not
    underflow at large kappa.
    """

    point: Point
    aux: tuple = ()


def initial_state(point) -> ChainState:
    return ChainState(Point.of(*point), ())


def _diag(diag):
    return diag if diag is not None else StepDiagnostics()


def _holds(lhs, rhs, scale=1.0):
    """``lhs <= rhs`` up to the audit slack."""
    return lhs <= rhs + AUDIT_RTOL * max(1.0, abs(rhs), abs(scale))


def _draw_with_repair(build, redraw_aux, draw, current, diag):
    """Draw from ``build()``, redrawing the auxiliaries once if it is empty.

    Returns ``(value, region)``. When the region is still empty after the
    redraw, the current coordinate is kept.
    """
    region = build()
    if not region:
        diag.empty_slice_repairs += 1
        redraw_aux()
        region = build()
        if not region:
            diag.empty_slice_repairs += 1
            return current, region
    return draw(region), region


def rosenbrock_step(state: ChainState, kappa: float, rng, diag=None) -> ChainState:
    """Partially collapsed Gibbs sweep for Rosenbrock.

    Order: x2 | x1 with the slice variable integrated out, then
    u | x1, x2, then x1 | x2, u. The last draw is a N(1, 1/(2 kappa))
    restricted to both branches of ``{x1 : x2 - s <= x1^2 <= x2 + s}``,
    ``s = sqrt(-log u / (kappa c))``.
    """
    diag = _diag(diag)
    k, c = kappa, ROSENBROCK_C
    x1, x2 = state.point
    x2 = x1 * x1 + math.sqrt(1.0 / (2.0 * k * c)) * rng.standard_normal()

    aux = {}

    def redraw_u():
        r = x2 - x1 * x1
        aux["log_u"] = -k * c * r * r + math.log(rng.uniform_open())
        aux["s"] = math.sqrt(-aux["log_u"] / (k * c))

    redraw_u()
    x1_new, _ = _draw_with_repair(
        lambda: invert_square_band(x2 - aux["s"], x2 + aux["s"]),
        redraw_u,
        lambda band: sample_truncated_normal_union(1.0, 1.0 / (2.0 * k), band, rng, diag),
        x1, diag,
    )
    if not _holds(abs(x2 - x1_new * x1_new), aux["s"], x2):
        diag.constraint_violations += 1
    return ChainState(Point(x1_new, x2), (aux["log_u"],))


def himmelblau_step(state: ChainState, kappa: float, rng, diag=None) -> ChainState:
    """Two-slice Gibbs sweep for Himmelblau: u1, u2, then x1, then x2.

    With ``s_i = sqrt(-log u_i / kappa)`` the slice is
    ``|x1^2 + x2 - 11| <= s1`` and ``|x1 + x2^2 - 7| <= s2``. For each
    coordinate one constraint is a band on its square and the other a plain
    interval; the draw is uniform on their exact intersection.
    """
    diag = _diag(diag)
    k = kappa
    x1, x2 = state.point
    aux = {}

    def redraw_u():
        a = x1 * x1 + x2 - 11.0
        b = x1 + x2 * x2 - 7.0
        aux["lu1"] = -k * a * a + math.log(rng.uniform_open())
        aux["lu2"] = -k * b * b + math.log(rng.uniform_open())
        aux["s1"] = math.sqrt(-aux["lu1"] / k)
        aux["s2"] = math.sqrt(-aux["lu2"] / k)

    def x1_region():
        s1, s2 = aux["s1"], aux["s2"]
        return intersect(invert_square_band(11.0 - x2 - s1, 11.0 - x2 + s1),
                         IntervalUnion._trusted(((7.0 - x2 * x2 - s2, 7.0 - x2 * x2 + s2),)))

    def x2_region():
        s1, s2 = aux["s1"], aux["s2"]
        return intersect(invert_square_band(7.0 - x1 - s2, 7.0 - x1 + s2),
                         IntervalUnion._trusted(((11.0 - x1 * x1 - s1, 11.0 - x1 * x1 + s1),)))

    def draw(region):
        return sample_uniform_union(region, rng, diag)

    redraw_u()
    x1, _ = _draw_with_repair(x1_region, redraw_u, draw, x1, diag)
    x2, _ = _draw_with_repair(x2_region, redraw_u, draw, x2, diag)

    a = x1 * x1 + x2 - 11.0
    b = x1 + x2 * x2 - 7.0
    if not (_holds(abs(a), aux["s1"], 11.0) and _holds(abs(b), aux["s2"], 7.0)):
        diag.constraint_violations += 1
    return ChainState(Point(x1, x2), (aux["lu1"], aux["lu2"]))


def rastrigin_step(state: ChainState, kappa: float, rng, diag=None) -> ChainState:
    """Exponential-slice Gibbs sweep for Rastrigin on [-5.12, 5.12]^2.

    For each coordinate: ``y ~ -kappa A cos(2 pi x) + Exp(1)``, then
    ``x ~ N(0, 1/(2 kappa))`` restricted to ``{cos(2 pi x) >= -y/(A kappa)}``
    within the box.
    """
    diag = _diag(diag)
    k, A = kappa, RASTRIGIN_A
    lo, hi = RASTRIGIN_BOX
    xs = list(state.point)
    if not all(lo <= x <= hi for x in xs):
        raise ValueError(f"rastrigin state {state.point} outside {RASTRIGIN_BOX}^2")
    ys = [0.0, 0.0]
    for j in range(2):
        aux = {}

        def redraw_y():
            aux["y"] = sample_shifted_exponential(1.0, -k * A * math.cos(2.0 * math.pi * xs[j]), rng)

        redraw_y()
        xs[j], _ = _draw_with_repair(
            lambda: solve_cosine(2.0 * math.pi, 0.0, -aux["y"] / (A * k), GE, RASTRIGIN_BOX),
            redraw_y,
            lambda region: sample_truncated_normal_union(0.0, 1.0 / (2.0 * k), region, rng, diag),
            xs[j], diag,
        )
        ys[j] = aux["y"]
        if not (_holds(-k * A * math.cos(2.0 * math.pi * xs[j]), ys[j], k * A) and lo <= xs[j] <= hi):
            diag.constraint_violations += 1
    return ChainState(Point(xs[0], xs[1]), tuple(ys))


def _shubert_sweep(x, c_other, kappa, rng, diag):
    """Draw one coordinate given ``c_other = C(other coordinate)``.

    The conditional is ``prod_j exp(-kappa g_j(x))`` with
    ``g_j(x) = c_other * j * cos((j+1) x + j)``; each factor gets
    ``y_j ~ g_j(x) + Exp(kappa)`` and x is uniform on ``{g_j(x) <= y_j, all j}``,
    i.e. ``cos((j+1) x + j) <= y_j / (j c_other)`` when ``c_other > 0`` and
    ``>=`` when ``c_other < 0``.
    """
    lo, hi = SHUBERT_BOX
    ys = [0.0] * 5

    def redraw_y():
        for j in range(1, 6):
            g = c_other * j * math.cos((j + 1) * x + j)
            ys[j - 1] = sample_shifted_exponential(kappa, g, rng)

    def region():
        if c_other == 0.0:
            return IntervalUnion._trusted(((lo, hi),))
        direction = LE if c_other > 0 else GE
        return intersect_all(
            solve_cosine(j + 1, j, ys[j - 1] / (j * c_other), direction, SHUBERT_BOX)
            for j in range(1, 6)
        )

    redraw_y()
    x_new, _ = _draw_with_repair(region, redraw_y,
                                 lambda r: sample_uniform_union(r, rng, diag), x, diag)
    for j in range(1, 6):
        g = c_other * j * math.cos((j + 1) * x_new + j)
        if not _holds(g, ys[j - 1], j * c_other):
            diag.constraint_violations += 1
            break
    return x_new, tuple(ys)


def shubert_step(state: ChainState, kappa: float, rng, diag=None) -> ChainState:
    """Exponential-slice Gibbs sweep for Shubert on [-10, 10]^2.

    Five slice variables per coordinate, x1 then x2, each coordinate uniform
    on the intersection of five cosine-inequality sets.
    """
    diag = _diag(diag)
    x1, x2 = state.point
    lo, hi = SHUBERT_BOX
    if not (lo <= x1 <= hi and lo <= x2 <= hi):
        raise ValueError(f"shubert state {state.point} outside {SHUBERT_BOX}^2")
    x1, y_first = _shubert_sweep(x1, float(shubert_C(x2)), kappa, rng, diag)
    x2, y_second = _shubert_sweep(x2, float(shubert_C(x1)), kappa, rng, diag)
    return ChainState(Point(x1, x2), (y_first, y_second))


def _check_box(box):
    box = tuple(float(b) for b in box)
    if len(box) != 4 or not all(math.isfinite(b) for b in box):
        raise ConfigError(f"generic sampler needs a bounded box, got {box}")
    if not (box[0] < box[1] and box[2] < box[3]):
        raise ConfigError(f"degenerate box {box}")
    return box


def generic_additive_slice_step(terms, box, kappa: float, state: ChainState, rng, diag=None,
                                max_proposals: int = GENERIC_MAX_PROPOSALS) -> ChainState:
    """Exponential slice sampler for ``f = sum_i f_i`` on a bounded box.

    ``y_i ~ f_i(x) + Exp(kappa)``, then x is uniform on
    ``{x in box : f_i(x) <= y_i for all i}``, found by rejection from the box.
    Integrating out each ``y_i`` leaves ``exp(-kappa f_i(x))``. If
    ``max_proposals`` proposals all miss, x is kept and the miss is counted
    as an empty-slice repair.
    """
    diag = _diag(diag)
    x1_lo, x1_hi, x2_lo, x2_hi = _check_box(box)
    x = np.array([state.point], dtype=float)
    ys = np.array([sample_shifted_exponential(kappa, float(t(x)[0]), rng) for t in terms])

    used = 0
    batch = 64
    while used < max_proposals:
        b = min(batch, max_proposals - used)
        u = rng.uniforms(2 * b).reshape(b, 2)
        props = np.empty_like(u)
        props[:, 0] = x1_lo + (x1_hi - x1_lo) * u[:, 0]
        props[:, 1] = x2_lo + (x2_hi - x2_lo) * u[:, 1]
        ok = np.ones(b, dtype=bool)
        for t, y in zip(terms, ys):
            ok &= t(props) <= y
        used += b
        hits = np.flatnonzero(ok)
        if len(hits):
            new = props[hits[0]]
            return ChainState(Point(float(new[0]), float(new[1])), tuple(ys.tolist()))
        batch = min(batch * 2, 8192)
    diag.empty_slice_repairs += 1
    return ChainState(state.point, tuple(ys.tolist()))


def metropolis_step(objective, kappa: float, step_sigma: float, state: ChainState, rng,
                    diag=None) -> ChainState:
    """Gaussian random-walk Metropolis step on ``exp(-kappa f)``.

    Proposals outside a bounded objective's box are rejected. ``kappa`` may
    be 0 here, in which case every in-box proposal is accepted.
    """
    if not step_sigma > 0:
        raise ValueError(f"step_sigma must be > 0, got {step_sigma!r}")
    if not (kappa >= 0 and math.isfinite(kappa)):
        raise ValueError(f"kappa must be finite and >= 0, got {kappa!r}")
    diag = _diag(diag)
    spec = get_spec(objective)
    x1, x2 = state.point
    p1 = x1 + step_sigma * rng.standard_normal()
    p2 = x2 + step_sigma * rng.standard_normal()
    u = rng.uniform_open()
    diag.metropolis_proposals += 1

    if spec.bounded:
        b = spec.domain_box
        if not (b[0] <= p1 <= b[1] and b[2] <= p2 <= b[3]):
            return ChainState(state.point, (False,))
    delta = evaluate(spec.id, (p1, p2)) - evaluate(spec.id, (x1, x2))
    if delta <= 0 or u < math.exp(-kappa * delta):
        diag.metropolis_accepted += 1
        return ChainState(Point(p1, p2), (True,))
    return ChainState(state.point, (False,))


_BESPOKE = {
    ObjectiveId.ROSENBROCK: rosenbrock_step,
    ObjectiveId.HIMMELBLAU: himmelblau_step,
    ObjectiveId.RASTRIGIN: rastrigin_step,
    ObjectiveId.SHUBERT: shubert_step,
}


def generic_kernel(objective, box=None):
    """Generic exponential-slice kernel for an additive objective."""
    spec = get_spec(objective)
    terms = additive_terms(spec.id)
    box = _check_box(box if box is not None else spec.domain_box)

    def step(state, kappa, rng, diag=None):
        return generic_additive_slice_step(terms, box, kappa, state, rng, diag)

    return step


def slice_kernel(objective):
    """The objective's dedicated slice sampler, or the generic one if it has none."""
    oid = ObjectiveId.parse(objective)
    if oid in _BESPOKE:
        return _BESPOKE[oid]
    return generic_kernel(oid)


def metropolis_kernel(objective, step_sigma: float):
    oid = ObjectiveId.parse(objective)
    if not step_sigma > 0:
        raise ValueError(f"step_sigma must be > 0, got {step_sigma!r}")

    def step(state, kappa, rng, diag=None):
        return metropolis_step(oid, kappa, step_sigma, state, rng, diag)

    return step


def kernel_for(objective, sampler: str = "slice", step_sigma: float = 0.5):
    if sampler == "slice":
        return slice_kernel(objective)
    if sampler == "generic":
        return generic_kernel(objective)
    if sampler == "metropolis":
        return metropolis_kernel(objective, step_sigma)
    raise UnsupportedError(f"unknown sampler {sampler!r}")
