import numpy as np
import pytest
from sklearn.base import clone

from sliceopt import BoltzmannSliceOptimizer


def test_params_roundtrip():
    est = BoltzmannSliceOptimizer(objective="rastrigin", kappa=5.0, n_iter=200)
    params = est.get_params()
    assert params["objective"] == "rastrigin" and params["kappa"] == 5.0
    c = clone(est).set_params(kappa=1.0)
    assert c.kappa == 1.0 and est.kappa == 5.0


def test_fit_and_sample():
    est = BoltzmannSliceOptimizer(objective="rastrigin", kappa=5.0, n_iter=300, burnin=100,
                                  random_state=1).fit()
    assert est.sample().shape == (200, 2)
    assert np.hypot(*est.best_point_) < 0.3
    assert est.best_value_ == est.trace_.f.min()
    assert est.diagnostics_.constraint_violations == 0


def test_sample_requires_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        BoltzmannSliceOptimizer().sample()


def test_score_samples():
    est = BoltzmannSliceOptimizer(objective="himmelblau", kappa=2.0)
    s = est.score_samples([[0.0, 0.0], [3.0, 2.0]])
    assert s.tolist() == [-340.0, 0.0]
    with pytest.raises(ValueError):
        est.score_samples([[0.0, 0.0, 0.0]])
