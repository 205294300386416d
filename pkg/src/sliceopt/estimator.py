"""scikit-learn style wrapper around a single chain run."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .core import ObjectiveId
from .objectives import evaluate_array
from .runner import ExperimentConfig, run_chain


class BoltzmannSliceOptimizer(BaseEstimator):
    """Minimise a test objective by sampling ``exp(-kappa * f)``.

    Parameters
    ----------
    objective : str
        One of ``rosenbrock``, ``himmelblau``, ``rastrigin``, ``shubert``,
        ``booth``, ``michalewicz``.
    kappa : float
        Energy level; larger values concentrate the chain on the minima.
    n_iter, burnin : int
        Chain length and the number of leading steps flagged as burn-in.
    sampler : {"slice", "generic", "metropolis"}
    step_sigma : float
        Proposal scale, only used by the Metropolis sampler.
    start : pair of float or None
        Starting point; None uses the objective's default.
    random_state : int
        Unsigned 64-bit seed.

    Attributes
    ----------
    trace_ : Trace
    best_point_ : Point
    best_value_ : float
    ergodic_mean_ : Point
    occupancy_ : Occupancy or None
    diagnostics_ : StepDiagnostics
    """

    def __init__(self, objective="rosenbrock", kappa=1.0, n_iter=1000, burnin=100,
                 sampler="slice", step_sigma=0.5, start=None, random_state=42):
        self.objective = objective
        self.kappa = kappa
        self.n_iter = n_iter
        self.burnin = burnin
        self.sampler = sampler
        self.step_sigma = step_sigma
        self.start = start
        self.random_state = random_state

    def fit(self, X=None, y=None):
        """Run the chain. ``X`` and ``y`` are ignored."""
        config = ExperimentConfig(self.objective, (self.kappa,), self.n_iter, self.burnin,
                                  self.random_state, self.start, self.sampler, self.step_sigma)
        result = run_chain(config)
        self.result_ = result
        self.trace_ = result.trace
        self.best_point_, self.best_value_ = result.best
        self.ergodic_mean_ = result.ergodic_mean
        self.occupancy_ = result.occupancy
        self.diagnostics_ = result.diagnostics
        return self

    def score_samples(self, X):
        """Unnormalised Boltzmann log density ``-kappa * f(x)`` for each row of X."""
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 columns, got {X.shape[1]}")
        return -float(self.kappa) * evaluate_array(ObjectiveId.parse(self.objective), X)

    def sample(self):
        """Post-burn-in chain points, shape ``(n_iter - burnin, 2)``."""
        check_is_fitted(self, "trace_")
        return np.array(self.trace_.samples)
