"""
ITSO - Inverse Transform Sampling Optimizer
Derivative-free minimization of box-bounded black-box functions
"""

__version__ = "1.0.0"

from .baselines import BaselineConfig, BaselineKind, de_rand_1_bin, random_search, run_baseline
from .exceptions import (
    ConfigError,
    EvaluatorError,
    GridCellError,
    HarnessError,
    ItsoError,
    ObjectiveError,
    SamplingError,
    UnknownObjectiveError,
)
from .objectives import OBJECTIVE_NAMES, ObjectiveSpec, evaluate, get_objective, list_objectives
from .optimizer import OptimizationResult, OptimizerConfig, Variant, optimize, optimize_full, optimize_short
from .sampling import (
    EmpiricalMarginal,
    EvaluationHistory,
    KernelSpec,
    KernelVariant,
    build_cdf,
    build_marginal,
    inverse_cdf_sample,
    kernel_apply,
)
