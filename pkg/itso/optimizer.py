"""
ITSO Optimizer
Inverse Transform Sampling Optimizer over a box-bounded black-box objective

Two variants are provided:
- FULL: every evaluation rebuilds the marginal of one random dimension from
  the whole history and samples it by inverse transform
- SHORT: sweeps the dimensions and samples each uniformly inside the range
  spanned by the alpha best evaluations that drew that coordinate
  (alpha-elitist shortcut)

A single run is sequential. Independent runs may execute concurrently as long
as the objective is reentrant; no random state is shared between runs.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from .exceptions import ConfigError, ObjectiveError, SamplingError
from .sampling import (
    EmpiricalMarginal,
    EvaluationHistory,
    KernelSpec,
    build_cdf,
    build_marginal,
    inverse_cdf_sample,
    jitter_weights,
)

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]

DEFAULT_SHARPNESS = 1e5
DEFAULT_INITIAL_SHARPNESS = 1.0

# marks an evaluation that drew every coordinate (uniform warmup)
ALL_DIMS = -1


class Variant(str, Enum):
    FULL = "full"
    SHORT = "short"


def default_warmup(dimension: int, alpha: Optional[int] = None) -> int:
    """max(10, n), raised to `alpha` when given so SHORT starts with a full elite set"""
    return max(10, dimension, alpha or 0)


def default_alpha(max_evaluations: int) -> int:
    return max(2, max_evaluations // 100)


def default_kernel(max_evaluations: int, warmup: int) -> KernelSpec:
    """
    GAUSSIAN kernel sharpening geometrically over the budget

    g starts at DEFAULT_INITIAL_SHARPNESS, where the marginal is nearly flat
    over the sampled coordinates, and reaches DEFAULT_SHARPNESS at the last
    evaluation. It stays below 30 for roughly the first 30% of the iterations.
    """
    steps = max(1, max_evaluations - warmup)
    return KernelSpec.geometric(DEFAULT_INITIAL_SHARPNESS, DEFAULT_SHARPNESS, steps)


@dataclass(frozen=True)
class OptimizerConfig:
    """
    Settings of one ITSO run

    Attributes:
        lower_bounds: Box lower limits, one per dimension
        upper_bounds: Box upper limits, one per dimension
        max_evaluations: Exact number of objective calls f_e
        seed: Seed of the run's random stream
        variant: FULL or SHORT
        alpha: Elite count for SHORT (default max(2, f_e // 100))
        kernel: Kernel for FULL (default GAUSSIAN sharpening over the budget)
        warmup: Initial uniform evaluations (default max(10, n); SHORT raises it
            to at least min(alpha, f_e // 2); clamped to f_e)
        kernel_noise: Optional (low, high) multiplicative noise on FULL weights
    """

    lower_bounds: Tuple[float, ...]
    upper_bounds: Tuple[float, ...]
    max_evaluations: int
    seed: int = 0
    variant: Variant = Variant.SHORT
    alpha: Optional[int] = None
    kernel: Optional[KernelSpec] = None
    warmup: Optional[int] = None
    kernel_noise: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower_bounds))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper_bounds))
        object.__setattr__(self, "lower_bounds", lower)
        object.__setattr__(self, "upper_bounds", upper)
        object.__setattr__(self, "variant", Variant(self.variant))

        if len(lower) == 0 or len(lower) != len(upper):
            raise ConfigError("lower and upper bounds must be non-empty and of equal length")
        if not all(math.isfinite(lo) and math.isfinite(hi) and lo < hi for lo, hi in zip(lower, upper)):
            raise ConfigError("every dimension needs finite bounds with lower < upper")
        if self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

        alpha = default_alpha(self.max_evaluations) if self.alpha is None else int(self.alpha)
        if alpha < 2:
            raise ConfigError("alpha must be at least 2")
        object.__setattr__(self, "alpha", alpha)

        if self.warmup is None:
            floor = min(alpha, self.max_evaluations // 2) if self.variant is Variant.SHORT else None
            # clamped so that tiny budgets remain valid
            warmup = min(default_warmup(len(lower), floor), self.max_evaluations)
        else:
            warmup = int(self.warmup)
            if not 2 <= warmup <= self.max_evaluations:
                raise ConfigError("warmup must satisfy 2 <= warmup <= max_evaluations")
        object.__setattr__(self, "warmup", warmup)

        if self.kernel is None:
            object.__setattr__(self, "kernel", default_kernel(self.max_evaluations, warmup))

        if self.kernel_noise is not None:
            low, high = self.kernel_noise
            if not 0 < low <= high:
                raise ConfigError("kernel_noise must satisfy 0 < low <= high")

    @property
    def dimension(self) -> int:
        return len(self.lower_bounds)

    @property
    def lower(self) -> np.ndarray:
        return np.array(self.lower_bounds)

    @property
    def upper(self) -> np.ndarray:
        return np.array(self.upper_bounds)

    @classmethod
    def for_box(cls, lower, upper, max_evaluations: int, **kwargs) -> "OptimizerConfig":
        return cls(tuple(np.atleast_1d(lower)), tuple(np.atleast_1d(upper)), max_evaluations, **kwargs)


@dataclass
class OptimizationResult:
    """
    Outcome of a run

    Attributes:
        best_point: Incumbent x*
        best_value: Incumbent f*
        trace: Best-so-far value after each evaluation
        evaluations_used: Number of objective calls
        history: Every evaluated point and value, in call order
        method: Optimizer name used in reports
        population: Final population for population-based baselines
        sampled_dims: Coordinate drawn by each evaluation, ALL_DIMS when every one was
    """

    best_point: np.ndarray
    best_value: float
    trace: np.ndarray
    evaluations_used: int
    history: EvaluationHistory
    method: str = ""
    population: Optional[np.ndarray] = None
    sampled_dims: Optional[np.ndarray] = None

    def trace_pairs(self) -> Iterator[Tuple[int, float]]:
        """(1-based evaluation index, best-so-far value) pairs"""
        for index, value in enumerate(self.trace.tolist(), start=1):
            yield index, value

    def to_report(self) -> dict:
        return {
            "method": self.method,
            "best_point": self.best_point.tolist(),
            "best_value": self.best_value,
            "evaluations_used": self.evaluations_used,
        }


class EvaluationRecorder:
    """Evaluates the objective, appends to the history and tracks the incumbent"""

    def __init__(self, objective: Objective, dimension: int, budget: int):
        self.objective = objective
        self.budget = budget
        self.history = EvaluationHistory(dimension, capacity=budget)
        self.trace = np.empty(budget, dtype=float)
        self.sampled_dims = np.empty(budget, dtype=int)
        self.best_point: Optional[np.ndarray] = None
        self.best_value = math.inf

    @property
    def used(self) -> int:
        return len(self.history)

    @property
    def exhausted(self) -> bool:
        return self.used >= self.budget

    def evaluate(self, x: np.ndarray, dim: int = ALL_DIMS) -> Tuple[float, bool]:
        """
        Returns the value and whether it became the incumbent (ties accepted)

        `dim` names the coordinate this evaluation drew; ALL_DIMS for a fresh point.
        """
        value = float(self.objective(x))
        if not math.isfinite(value):
            raise ObjectiveError(x, value)
        self.history.append(x, value)
        improved = value <= self.best_value
        if improved:
            self.best_value = value
            self.best_point = np.array(x, dtype=float)
        self.trace[self.used - 1] = self.best_value
        self.sampled_dims[self.used - 1] = dim
        return value, improved

    def result(self, method: str) -> OptimizationResult:
        return OptimizationResult(
            best_point=self.best_point.copy(),
            best_value=self.best_value,
            trace=self.trace[:self.used].copy(),
            evaluations_used=self.used,
            history=self.history,
            method=method,
            sampled_dims=self.sampled_dims[:self.used].copy(),
        )


def _warmup(recorder: EvaluationRecorder, config: OptimizerConfig, rng: np.random.Generator) -> None:
    lower, upper = config.lower, config.upper
    for _ in range(config.warmup):
        if recorder.exhausted:
            break
        recorder.evaluate(rng.uniform(lower, upper))


def _full_marginal(
    history: EvaluationHistory,
    config: OptimizerConfig,
    dim: int,
    iteration: int,
    rng: Optional[np.random.Generator] = None,
) -> EmpiricalMarginal:
    marginal = build_marginal(
        history,
        dim,
        config.kernel,
        (config.lower_bounds[dim], config.upper_bounds[dim]),
        iteration=iteration,
    )
    if config.kernel_noise is not None and rng is not None:
        marginal = jitter_weights(marginal, rng, *config.kernel_noise)
    return build_cdf(marginal)


def optimize_full(config: OptimizerConfig, objective: Objective) -> OptimizationResult:
    """
    Run the full inverse transform sampling framework

    After the uniform warmup, each evaluation draws a dimension j and a
    probability r, rebuilds the dimension-j marginal from the whole history and
    moves the incumbent's j-th coordinate to F_j^{-1}(r). Rejected moves restore
    the incumbent coordinate.

    Args:
        config: Run settings (variant is ignored)
        objective: Black-box function of an n-vector

    Returns:
        OptimizationResult after exactly config.max_evaluations calls
    """
    rng = np.random.default_rng(config.seed)
    recorder = EvaluationRecorder(objective, config.dimension, config.max_evaluations)
    lower, upper = config.lower, config.upper

    _warmup(recorder, config, rng)
    x = recorder.best_point.copy()
    iteration = 0
    fallbacks = 0

    while not recorder.exhausted:
        dim = int(rng.integers(config.dimension))
        r = float(rng.random())
        try:
            marginal = _full_marginal(recorder.history, config, dim, iteration, rng)
            x[dim] = inverse_cdf_sample(marginal, r)
        except SamplingError as e:
            fallbacks += 1
            logger.debug(f"Marginal of dimension {dim} unavailable ({e}); sampling uniformly")
            x[dim] = lower[dim] + r * (upper[dim] - lower[dim])

        _, improved = recorder.evaluate(x, dim)
        if not improved:
            x[dim] = recorder.best_point[dim]
        iteration += 1

    if fallbacks:
        logger.warning(f"FULL run fell back to uniform sampling on {fallbacks} of {iteration} iterations")
    logger.info(f"FULL run finished: best value {recorder.best_value:.6g} after {recorder.used} evaluations")
    return recorder.result("itso-full")


class _EliteIndex:
    """History indices kept sorted by (value, index), the order of a stable sortperm"""

    def __init__(self):
        self._keys: List[Tuple[float, int]] = []

    def add(self, value: float, index: int) -> None:
        bisect.insort(self._keys, (value, index))

    def best(self, alpha: int) -> List[int]:
        return [index for _, index in self._keys[:alpha]]


def _drew(sampled_dims: np.ndarray, dim: int) -> np.ndarray:
    return (sampled_dims == dim) | (sampled_dims == ALL_DIMS)


def elite_window(
    history: EvaluationHistory,
    alpha: int,
    dim: int,
    evaluations: Optional[int] = None,
    sampled_dims: Optional[np.ndarray] = None,
) -> Tuple[float, float]:
    """
    SHORT's sampling window for one dimension

    Only entries that drew coordinate `dim` compete for the window. An entry
    that moved another coordinate repeats the incumbent's value at `dim`.

    Args:
        history: Evaluation history
        alpha: Elite count; clamped to the number of competing entries
        dim: 0-based dimension
        evaluations: Use only the first `evaluations` entries
        sampled_dims: Coordinate drawn by each entry (ALL_DIMS for every one);
            when omitted every entry competes

    Returns:
        (min, max) of the dimension over the alpha best competing entries
    """
    count = len(history) if evaluations is None else min(evaluations, len(history))
    candidates = np.arange(count)
    if sampled_dims is not None:
        candidates = candidates[_drew(np.asarray(sampled_dims)[:count], dim)]
    if candidates.size == 0:
        raise SamplingError("empty history")
    values = history.values[candidates]
    elites = candidates[np.argsort(values, kind="stable")[:alpha]]
    coords = history.points[elites, dim]
    return float(coords.min()), float(coords.max())


def optimize_short(config: OptimizerConfig, objective: Objective) -> OptimizationResult:
    """
    Run the alpha-elitist short variant

    Each sweep visits every dimension j in order, samples x[j] uniformly within
    the j-th coordinate range of the alpha best evaluations that drew
    coordinate j and keeps the move when it does not worsen the incumbent.
    Warmup points drew every coordinate and compete in every dimension. Every
    objective call counts against the budget; the last sweep may stop part-way.

    Args:
        config: Run settings (variant is ignored)
        objective: Black-box function of an n-vector

    Returns:
        OptimizationResult after exactly config.max_evaluations calls
    """
    rng = np.random.default_rng(config.seed)
    recorder = EvaluationRecorder(objective, config.dimension, config.max_evaluations)
    elites = [_EliteIndex() for _ in range(config.dimension)]

    _warmup(recorder, config, rng)
    for index, value in enumerate(recorder.history.values.tolist()):
        for pool in elites:
            pool.add(value, index)

    x = recorder.best_point.copy()
    points = recorder.history
    while not recorder.exhausted:
        for dim in range(config.dimension):
            if recorder.exhausted:
                break
            best = elites[dim].best(config.alpha)
            coords = points.points[best, dim]
            low, high = coords.min(), coords.max()
            x[dim] = low + rng.random() * (high - low)

            value, improved = recorder.evaluate(x, dim)
            elites[dim].add(value, recorder.used - 1)
            if not improved:
                x = recorder.best_point.copy()

    logger.info(f"SHORT run finished: best value {recorder.best_value:.6g} after {recorder.used} evaluations")
    return recorder.result("itso-short")


def optimize(config: OptimizerConfig, objective: Objective) -> OptimizationResult:
    """Dispatch on config.variant"""
    if config.variant is Variant.FULL:
        return optimize_full(config, objective)
    return optimize_short(config, objective)


def snapshot_marginal(
    history: EvaluationHistory,
    config: OptimizerConfig,
    evaluations: int,
    dim: int = 0,
) -> EmpiricalMarginal:
    """
    Rebuild the dimension-`dim` marginal as FULL saw it after `evaluations` calls

    Raises:
        SamplingError: when the prefix cannot support a marginal
    """
    if not 1 <= evaluations <= len(history):
        raise SamplingError(f"snapshot {evaluations} outside 1..{len(history)}")
    iteration = max(0, evaluations - config.warmup)
    return _full_marginal(history.prefix(evaluations), config, dim, iteration)
