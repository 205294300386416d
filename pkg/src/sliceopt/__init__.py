"""Global minimisation of multi-modal functions by slice sampling Boltzmann densities."""

from .core import (EnergyLevel, ModeSet, ObjectiveId, Occupancy, Point, StepDiagnostics, Trace,
                   best_point, boltzmann_log_density, ergodic_mean, mode_occupancy)
from .estimator import BoltzmannSliceOptimizer
from .intervals import IntervalUnion, contains, intersect, invert_square_band, solve_cosine, total_length
from .objectives import booth_factorization, components, contour_grid, evaluate, shubert_C
from .rng import RngStream, derive_stream, normal_cdf, normal_quantile
from .runner import ExperimentConfig, RunResult, grid_reference, run_chain, run_sweep, tv_distance
from .samplers import (ChainState, generic_additive_slice_step, himmelblau_step, metropolis_step,
                       rastrigin_step, rosenbrock_step, shubert_step)

__version__ = "0.1.0"
