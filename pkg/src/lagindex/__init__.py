"""Distributed lag models with a jointly estimated modifier index.

The model couples a natural cubic spline cross-basis over exposure
history and a simplex-weighted combination of candidate effect
modifiers, sampled by Metropolis-Hastings-within-Gibbs. Gaussian and
binomial outcomes are supported, the latter through Polya-Gamma
augmentation, and the index weights can carry spike-and-slab selection.
"""

from .design import CohortData, IndexWeights, modifier_index
from .estimator import IndexModifiedDLM
from .metrics import IntervalScore, ReplicateScore
from .posterior import (
    EffectSummary,
    WeightSummary,
    Window,
    cumulative_effect_draws,
    effect_grid,
    pointwise_effect_draws,
    summarize_effects,
    summarize_weights,
    windows_of_susceptibility,
)
from .priors import PriorConfig
from .sampler import (
    ChainError,
    PosteriorDraws,
    SamplerConfig,
    model_geometry,
    run_chain,
    run_multichain,
)
from .simulation import ScenarioSpec, SimulatedCohort, simulate_cohort, true_effect
from .splines import BasisMatrix, SplineSpec, evaluate_basis, make_spec
from .study import StudyResult, run_replicate, run_study
from .validation import NumericalError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "BasisMatrix",
    "ChainError",
    "CohortData",
    "EffectSummary",
    "IndexModifiedDLM",
    "IndexWeights",
    "IntervalScore",
    "NumericalError",
    "PosteriorDraws",
    "PriorConfig",
    "ReplicateScore",
    "SamplerConfig",
    "ScenarioSpec",
    "SimulatedCohort",
    "SplineSpec",
    "StudyResult",
    "ValidationError",
    "WeightSummary",
    "Window",
    "cumulative_effect_draws",
    "effect_grid",
    "evaluate_basis",
    "make_spec",
    "model_geometry",
    "modifier_index",
    "pointwise_effect_draws",
    "run_chain",
    "run_multichain",
    "run_replicate",
    "run_study",
    "simulate_cohort",
    "summarize_effects",
    "summarize_weights",
    "true_effect",
    "windows_of_susceptibility",
    "__version__",
]
