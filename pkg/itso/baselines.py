"""
Baseline Optimizers
Random Search and Differential Evolution (rand/1/bin) used as controls
against ITSO under identical evaluation budgets
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .exceptions import ConfigError
from .optimizer import EvaluationRecorder, Objective, OptimizationResult

logger = logging.getLogger(__name__)


class BaselineKind(str, Enum):
    RANDOM_SEARCH = "random"
    DE_RAND_1_BIN = "de"


@dataclass(frozen=True)
class BaselineConfig:
    """
    Settings of one baseline run

    Attributes:
        kind: RANDOM_SEARCH or DE_RAND_1_BIN
        lower_bounds: Box lower limits
        upper_bounds: Box upper limits
        max_evaluations: Exact number of objective calls
        seed: Seed of the run's random stream
        de_population: DE population size (default 10 * n)
        de_F: DE differential weight in (0, 2]
        de_CR: DE crossover rate in [0, 1]
    """

    kind: BaselineKind
    lower_bounds: Tuple[float, ...]
    upper_bounds: Tuple[float, ...]
    max_evaluations: int
    seed: int = 0
    de_population: Optional[int] = None
    de_F: float = 0.8
    de_CR: float = 0.9

    def __post_init__(self):
        object.__setattr__(self, "kind", BaselineKind(self.kind))
        lower = tuple(float(v) for v in np.atleast_1d(self.lower_bounds))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper_bounds))
        object.__setattr__(self, "lower_bounds", lower)
        object.__setattr__(self, "upper_bounds", upper)

        if len(lower) == 0 or len(lower) != len(upper):
            raise ConfigError("lower and upper bounds must be non-empty and of equal length")
        if not all(math.isfinite(lo) and math.isfinite(hi) and lo < hi for lo, hi in zip(lower, upper)):
            raise ConfigError("every dimension needs finite bounds with lower < upper")
        if self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

        population = 10 * len(lower) if self.de_population is None else int(self.de_population)
        if population < 4:
            raise ConfigError("de_population must be at least 4")
        object.__setattr__(self, "de_population", population)
        # F = 0 is accepted so the degenerate fixed-point case can be exercised
        if not 0 <= self.de_F <= 2:
            raise ConfigError("de_F must lie in [0, 2]")
        if not 0 <= self.de_CR <= 1:
            raise ConfigError("de_CR must lie in [0, 1]")

    @property
    def dimension(self) -> int:
        return len(self.lower_bounds)


def random_search(config: BaselineConfig, objective: Objective) -> OptimizationResult:
    """
    Evaluate max_evaluations i.i.d. uniform points of the box

    Args:
        config: Baseline settings
        objective: Black-box function of an n-vector

    Returns:
        OptimizationResult with the best point seen
    """
    rng = np.random.default_rng(config.seed)
    recorder = EvaluationRecorder(objective, config.dimension, config.max_evaluations)
    candidates = rng.uniform(
        np.array(config.lower_bounds),
        np.array(config.upper_bounds),
        size=(config.max_evaluations, config.dimension),
    )
    for x in candidates:
        recorder.evaluate(x)

    logger.info(f"Random search finished: best value {recorder.best_value:.6g}")
    return recorder.result("random")


def mutate_rand_1(population: np.ndarray, target: int, F: float, rng: np.random.Generator) -> np.ndarray:
    """Mutant a + F (b - c) from three distinct members other than `target`"""
    size = population.shape[0]
    others = rng.choice(size - 1, size=3, replace=False)
    # skip the target index
    a, b, c = others + (others >= target)
    return population[a] + F * (population[b] - population[c])


def binomial_crossover(target: np.ndarray, mutant: np.ndarray, CR: float, rng: np.random.Generator) -> np.ndarray:
    """Take each coordinate from the mutant with rate CR; one forced coordinate always comes from it"""
    n = target.shape[0]
    mask = rng.random(n) < CR
    mask[rng.integers(n)] = True
    return np.where(mask, mutant, target)


def de_rand_1_bin(
    config: BaselineConfig,
    objective: Objective,
    initial_population: Optional[np.ndarray] = None,
) -> OptimizationResult:
    """
    Classic DE/rand/1/bin with greedy selection and clipping to the box

    Args:
        config: Baseline settings
        objective: Black-box function of an n-vector
        initial_population: Optional (population, n) start; uniform in the box otherwise

    Returns:
        OptimizationResult after exactly config.max_evaluations calls
    """
    rng = np.random.default_rng(config.seed)
    lower, upper = np.array(config.lower_bounds), np.array(config.upper_bounds)
    recorder = EvaluationRecorder(objective, config.dimension, config.max_evaluations)

    if initial_population is None:
        population = rng.uniform(lower, upper, size=(config.de_population, config.dimension))
    else:
        population = np.clip(np.array(initial_population, dtype=float), lower, upper)
        if population.shape != (config.de_population, config.dimension):
            raise ConfigError(
                f"initial population must have shape {(config.de_population, config.dimension)}"
            )

    fitness = np.full(config.de_population, np.inf)
    for i in range(config.de_population):
        if recorder.exhausted:
            break
        fitness[i], _ = recorder.evaluate(population[i])

    generation = 0
    while not recorder.exhausted:
        for i in range(config.de_population):
            if recorder.exhausted:
                break
            mutant = mutate_rand_1(population, i, config.de_F, rng)
            trial = np.clip(binomial_crossover(population[i], mutant, config.de_CR, rng), lower, upper)
            value, _ = recorder.evaluate(trial)
            if value <= fitness[i]:
                population[i] = trial
                fitness[i] = value
        generation += 1

    logger.info(f"DE finished after {generation} generations: best value {recorder.best_value:.6g}")
    result = recorder.result("de")
    result.population = population
    return result


def run_baseline(config: BaselineConfig, objective: Objective) -> OptimizationResult:
    """Dispatch on config.kind"""
    if config.kind is BaselineKind.DE_RAND_1_BIN:
        return de_rand_1_bin(config, objective)
    return random_search(config, objective)
