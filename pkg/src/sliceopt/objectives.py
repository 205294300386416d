"""Test objectives, their decompositions and reference metadata.

All formulas accept scalars or numpy arrays. ``evaluate`` is the scalar
entry point used when recording traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModeSet, ObjectiveId, Point
from .exceptions import ConfigError, UnsupportedError

ROSENBROCK_C = 100.0
RASTRIGIN_A = 10.0
MICHALEWICZ_M = 10


def rosenbrock(x1, x2):
    return (1.0 - x1) ** 2 + ROSENBROCK_C * (x2 - x1 ** 2) ** 2


def himmelblau(x1, x2):
    return (x1 ** 2 + x2 - 11.0) ** 2 + (x1 + x2 ** 2 - 7.0) ** 2


def rastrigin(x1, x2):
    A = RASTRIGIN_A
    return 2 * A + (x1 ** 2 - A * np.cos(2 * np.pi * x1)) + (x2 ** 2 - A * np.cos(2 * np.pi * x2))


def shubert_C(x):
    """``sum_{j=1..5} j * cos((j + 1) * x + j)``."""
    return sum(j * np.cos((j + 1) * x + j) for j in range(1, 6))


def shubert(x1, x2):
    """``C(x1) * C(x2)``; global minimum about -186.7309 (18 minimisers in [-10, 10]^2)."""
    return shubert_C(x1) * shubert_C(x2)


def booth(x1, x2):
    return (x1 + 2 * x2 - 7.0) ** 2 + (2 * x1 + x2 - 5.0) ** 2


def _michalewicz_term(x, i):
    return -np.sin(x) * np.sin(i * x ** 2 / np.pi) ** (2 * MICHALEWICZ_M)


def michalewicz(x1, x2):
    return _michalewicz_term(x1, 1) + _michalewicz_term(x2, 2)


_FORMULAS = {
    ObjectiveId.ROSENBROCK: rosenbrock,
    ObjectiveId.HIMMELBLAU: himmelblau,
    ObjectiveId.RASTRIGIN: rastrigin,
    ObjectiveId.SHUBERT: shubert,
    ObjectiveId.BOOTH: booth,
    ObjectiveId.MICHALEWICZ: michalewicz,
}


@dataclass(frozen=True)
class ObjectiveSpec:
    """Reference metadata for one objective.

    ``bounded`` marks objectives whose domain box is part of the problem
    (samplers stay inside it); for the others the box is only a plotting and
    reference range.
    """

    id: ObjectiveId
    domain_box: tuple
    known_minima: tuple
    default_kappas: tuple
    bounded: bool

    def __post_init__(self):
        x1_lo, x1_hi, x2_lo, x2_hi = self.domain_box
        if not (x1_lo < x1_hi and x2_lo < x2_hi):
            raise ConfigError(f"degenerate domain box {self.domain_box}")
        for p, _ in self.known_minima:
            if not (x1_lo <= p.x1 <= x1_hi and x2_lo <= p.x2 <= x2_hi):
                raise ConfigError(f"known minimum {p} outside box {self.domain_box}")
        k = self.default_kappas
        if not all(a < b for a, b in zip(k, k[1:])):
            raise ConfigError("default kappas must be strictly increasing")

    @property
    def center(self) -> Point:
        x1_lo, x1_hi, x2_lo, x2_hi = self.domain_box
        return Point(0.5 * (x1_lo + x1_hi), 0.5 * (x2_lo + x2_hi))

    def mode_set(self, radius: float = 0.6):
        if not self.known_minima:
            return None
        return ModeSet(tuple(p for p, _ in self.known_minima), radius)


_STANDARD_KAPPAS = (0.1, 0.5, 1.0, 5.0)

SPECS = {
    ObjectiveId.ROSENBROCK: ObjectiveSpec(
        ObjectiveId.ROSENBROCK, (-2.0, 2.0, -1.0, 3.0),
        ((Point(1.0, 1.0), 0.0),), (1.0, 5.0, 50.0, 5000.0), bounded=False),
    ObjectiveId.HIMMELBLAU: ObjectiveSpec(
        ObjectiveId.HIMMELBLAU, (-6.0, 6.0, -6.0, 6.0),
        ((Point(3.0, 2.0), 0.0), (Point(-2.805, 3.131), 0.0),
         (Point(-3.779, -3.282), 0.0), (Point(3.584, -1.848), 0.0)),
        _STANDARD_KAPPAS, bounded=False),
    ObjectiveId.RASTRIGIN: ObjectiveSpec(
        ObjectiveId.RASTRIGIN, (-5.12, 5.12, -5.12, 5.12),
        ((Point(0.0, 0.0), 0.0),), _STANDARD_KAPPAS, bounded=True),
    # 18 global minima on this box; none listed since only rounded values are known.
    ObjectiveId.SHUBERT: ObjectiveSpec(
        ObjectiveId.SHUBERT, (-10.0, 10.0, -10.0, 10.0), (), _STANDARD_KAPPAS, bounded=True),
    ObjectiveId.BOOTH: ObjectiveSpec(
        ObjectiveId.BOOTH, (-10.0, 10.0, -10.0, 10.0),
        ((Point(1.0, 3.0), 0.0),), _STANDARD_KAPPAS, bounded=False),
    ObjectiveId.MICHALEWICZ: ObjectiveSpec(
        ObjectiveId.MICHALEWICZ, (0.0, math.pi, 0.0, math.pi),
        ((Point(2.20319, 1.57049), -1.801),), _STANDARD_KAPPAS, bounded=True),
}


def get_spec(objective) -> ObjectiveSpec:
    return SPECS[ObjectiveId.parse(objective)]


def formula(objective):
    """Vectorised evaluator ``f(x1, x2)`` for the objective."""
    return _FORMULAS[ObjectiveId.parse(objective)]


def evaluate(objective, x) -> float:
    x1, x2 = x
    return float(_FORMULAS[ObjectiveId.parse(objective)](float(x1), float(x2)))


def evaluate_array(objective, X) -> np.ndarray:
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    return np.asarray(_FORMULAS[ObjectiveId.parse(objective)](X[:, 0], X[:, 1]), dtype=float)


def components(objective, x) -> list:
    """Decomposition of f at ``x``; ``recombine`` reassembles it.

    * rosenbrock: ``[(1 - x1)^2, c (x2 - x1^2)^2]``, summed
    * himmelblau: the two squares, summed
    * rastrigin: ``[x1^2 + x2^2, -A cos 2πx1, -A cos 2πx2]``, summed plus 2A
    * booth: the two squares, summed
    * michalewicz: one term per coordinate, summed
    * shubert: ``[j cos((j+1) x1 + j)]_j + [j cos((j+1) x2 + j)]_j``;
      f is the product of the two five-term sums
    """
    oid = ObjectiveId.parse(objective)
    x1, x2 = float(x[0]), float(x[1])
    if oid is ObjectiveId.ROSENBROCK:
        return [(1.0 - x1) ** 2, ROSENBROCK_C * (x2 - x1 ** 2) ** 2]
    if oid is ObjectiveId.HIMMELBLAU:
        return [(x1 ** 2 + x2 - 11.0) ** 2, (x1 + x2 ** 2 - 7.0) ** 2]
    if oid is ObjectiveId.RASTRIGIN:
        A = RASTRIGIN_A
        return [x1 ** 2 + x2 ** 2, -A * math.cos(2 * math.pi * x1), -A * math.cos(2 * math.pi * x2)]
    if oid is ObjectiveId.BOOTH:
        return [(x1 + 2 * x2 - 7.0) ** 2, (2 * x1 + x2 - 5.0) ** 2]
    if oid is ObjectiveId.MICHALEWICZ:
        return [float(_michalewicz_term(x1, 1)), float(_michalewicz_term(x2, 2))]
    if oid is ObjectiveId.SHUBERT:
        return ([j * math.cos((j + 1) * x1 + j) for j in range(1, 6)]
                + [j * math.cos((j + 1) * x2 + j) for j in range(1, 6)])
    raise UnsupportedError(f"{oid.value} has no decomposition")


def recombine(objective, comps) -> float:
    oid = ObjectiveId.parse(objective)
    if oid is ObjectiveId.SHUBERT:
        return math.fsum(comps[:5]) * math.fsum(comps[5:])
    if oid is ObjectiveId.RASTRIGIN:
        return 2 * RASTRIGIN_A + math.fsum(comps)
    return math.fsum(comps)


def additive_terms(objective) -> list:
    """Vectorised non-constant terms ``f_i(X)`` whose sum is f.

    Each callable maps an ``(n, 2)`` array to ``(n,)``. Used by the generic
    exponential slice sampler.
    """
    oid = ObjectiveId.parse(objective)
    A = RASTRIGIN_A
    terms = {
        ObjectiveId.ROSENBROCK: [
            lambda X: (1.0 - X[:, 0]) ** 2,
            lambda X: ROSENBROCK_C * (X[:, 1] - X[:, 0] ** 2) ** 2,
        ],
        ObjectiveId.HIMMELBLAU: [
            lambda X: (X[:, 0] ** 2 + X[:, 1] - 11.0) ** 2,
            lambda X: (X[:, 0] + X[:, 1] ** 2 - 7.0) ** 2,
        ],
        ObjectiveId.RASTRIGIN: [
            lambda X: A + X[:, 0] ** 2 - A * np.cos(2 * np.pi * X[:, 0]),
            lambda X: A + X[:, 1] ** 2 - A * np.cos(2 * np.pi * X[:, 1]),
        ],
        ObjectiveId.BOOTH: [
            lambda X: (X[:, 0] + 2 * X[:, 1] - 7.0) ** 2,
            lambda X: (2 * X[:, 0] + X[:, 1] - 5.0) ** 2,
        ],
        ObjectiveId.MICHALEWICZ: [
            lambda X: _michalewicz_term(X[:, 0], 1),
            lambda X: _michalewicz_term(X[:, 1], 2),
        ],
    }
    if oid not in terms:
        raise UnsupportedError(f"{oid.value} is not additive")
    return terms[oid]


def contour_grid(objective, box=None, n: int = 200) -> np.ndarray:
    """Evaluate f on an ``n x n`` grid including the box corners.

    Returns an ``(n*n, 3)`` array of ``(x1, x2, f)`` rows, x1 in the outer
    loop and x2 varying fastest.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if box is None:
        box = get_spec(objective).domain_box
    x1_lo, x1_hi, x2_lo, x2_hi = (float(b) for b in box)
    if not (x1_lo < x1_hi and x2_lo < x2_hi):
        raise ValueError(f"degenerate box {box}")
    g1 = np.linspace(x1_lo, x1_hi, n)
    g2 = np.linspace(x2_lo, x2_hi, n)
    X1, X2 = np.meshgrid(g1, g2, indexing="ij")
    F = formula(objective)(X1, X2)
    return np.column_stack([X1.ravel(), X2.ravel(), np.asarray(F, dtype=float).ravel()])


BOOTH_MU = Point(1.0, 3.0)


def booth_q_candidates() -> list:
    """Sign patterns consistent with the printed ``Q = (1/9)(5, ±4; ±4, 5)``."""
    return [np.array([[5.0, s12 * 4.0], [s21 * 4.0, 5.0]]) / 9.0
            for s12 in (1, -1) for s21 in (1, -1)]


def booth_quadratic_form(Q, x, mu=BOOTH_MU) -> float:
    d = np.asarray(x, dtype=float) - np.asarray(mu, dtype=float)
    return float(d @ np.linalg.solve(Q, d))


def resolve_booth_q(n_points: int = 100, rtol: float = 1e-9, seed: int = 0):
    """The candidate Q whose quadratic form reproduces Booth at random points."""
    pts = np.random.default_rng(seed).uniform(-10, 10, size=(n_points, 2))
    matches = []
    for Q in booth_q_candidates():
        ok = all(abs(booth_quadratic_form(Q, p) - booth(*p)) <= rtol * max(1.0, abs(booth(*p)))
                 for p in pts)
        if ok:
            matches.append(Q)
    if len(matches) != 1:
        raise RuntimeError(f"expected exactly one matching Q, found {len(matches)}")
    return matches[0]


def booth_factorization():
    """``(mu, Q)`` with Booth(x) = (x - mu)' Q^{-1} (x - mu)."""
    return BOOTH_MU, np.array([[5.0, -4.0], [-4.0, 5.0]]) / 9.0
