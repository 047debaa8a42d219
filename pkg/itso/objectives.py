"""
Benchmark Objectives
The 13 black-box test functions of the benchmark suite plus the two 1-D
demonstration functions used for distribution traces
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .exceptions import ConfigError, UnknownObjectiveError

logger = logging.getLogger(__name__)

BOX_HALF_WIDTH = 15.0


def elliptic(x):
    n = x.shape[-1]
    c = 1e3 * np.linspace(0.0, 1.0, n)
    return np.sum(c * (x + 1.5) ** 2, axis=-1)


def cigar(x):
    return x[..., 0] ** 2 + np.sum(np.abs(x[..., 1:]), axis=-1)


def cigtab(x):
    if x.shape[-1] == 1:
        # first and last coordinate coincide
        return x[..., 0] ** 2
    return x[..., 0] ** 2 + np.sum(np.abs(x[..., 1:-1]), axis=-1) + x[..., -1] ** 2


def griewank(x):
    j = np.arange(1, x.shape[-1] + 1)
    return 1.0 + np.sum(x ** 2, axis=-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(j)), axis=-1)


def quartic(x):
    j = np.arange(1, x.shape[-1] + 1)
    return np.sum(j * (x - 2.0) ** 4, axis=-1)


def schwefel(x):
    c = np.cumsum(x - 9.0, axis=-1)
    return np.sum(c ** 2, axis=-1)


def rastrigin(x):
    # square inside the cosine, as in the suite definition
    n = x.shape[-1]
    shifted = (x + 0.7) ** 2
    return 10.0 * n + np.sum(shifted, axis=-1) - 10.0 * np.sum(np.cos(2.0 * np.pi * shifted), axis=-1)


def sphere(x):
    return np.sum((x - 1.3) ** 2, axis=-1)


def ellipsoid(x):
    return np.sum((x - np.sqrt(2.0)) ** 2, axis=-1)


def alpine(x):
    return np.sum(np.abs(x * np.sin(x) + 0.1 * x), axis=-1)


def x_j(x):
    j = np.arange(1, x.shape[-1] + 1)
    return np.sum((x - j - 2.1) ** 2, axis=-1)


def x_5(x):
    return np.sum((x - 5.0) ** 2, axis=-1) - 5.0


def sin_x(x):
    shifted = x + 0.7
    return np.sum(np.sin(shifted) + shifted ** 2 / 100.0, axis=-1)


def parabola(x):
    return np.sum((x - 5.0) ** 2, axis=-1)


@dataclass(frozen=True)
class ObjectiveSpec:
    """
    A named objective at a fixed dimension

    Attributes:
        name: Registry identifier
        dimension: Number of variables n
        lower_bounds: Default box lower limits
        upper_bounds: Default box upper limits
        function: Vectorized evaluator over the last axis
        minimizer: Analytic minimizer when one is forced, else None
        minimum: Objective value at the minimizer, else None
    """

    name: str
    dimension: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    function: Callable[[np.ndarray], np.ndarray]
    minimizer: Optional[np.ndarray] = None
    minimum: Optional[float] = None

    @property
    def default_box(self) -> List[Tuple[float, float]]:
        return list(zip(self.lower_bounds.tolist(), self.upper_bounds.tolist()))

    @property
    def known_minimum(self) -> Optional[Tuple[np.ndarray, float]]:
        if self.minimizer is None:
            return None
        return self.minimizer, self.minimum

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dimension,):
            raise ConfigError(
                f"{self.name} expects {self.dimension} coordinates, got shape {x.shape}"
            )
        return float(self.function(x)) if x.ndim == 1 else self.function(x)


def _symmetric_box(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.full(n, -BOX_HALF_WIDTH), np.full(n, BOX_HALF_WIDTH)


def _constant_point(value: float) -> Callable[[int], np.ndarray]:
    return lambda n: np.full(n, value)


# name -> (function, minimizer builder or None, minimum value)
_CATALOG: Dict[str, Tuple[Callable, Optional[Callable[[int], np.ndarray]], Optional[float]]] = {
    "elliptic": (elliptic, _constant_point(-1.5), 0.0),
    "cigar": (cigar, _constant_point(0.0), 0.0),
    "cigtab": (cigtab, _constant_point(0.0), 0.0),
    "griewank": (griewank, _constant_point(0.0), 0.0),
    "quartic": (quartic, _constant_point(2.0), 0.0),
    "schwefel": (schwefel, _constant_point(9.0), 0.0),
    "rastrigin": (rastrigin, _constant_point(-0.7), 0.0),
    "sphere": (sphere, _constant_point(1.3), 0.0),
    "ellipsoid": (ellipsoid, _constant_point(np.sqrt(2.0)), 0.0),
    "alpine": (alpine, _constant_point(0.0), 0.0),
    "x_j": (x_j, lambda n: np.arange(1, n + 1) + 2.1, 0.0),
    "x_5": (x_5, _constant_point(5.0), -5.0),
    "sin_x": (sin_x, None, None),
}

# 1-D demonstration functions with their boxes
_FIGURES: Dict[str, Tuple[Callable, Tuple[float, float]]] = {
    "parabola": (parabola, (0.0, 10.0)),
    "wavy": (sin_x, (-10.0, 10.0)),
}

OBJECTIVE_NAMES: Tuple[str, ...] = tuple(_CATALOG)
FIGURE_NAMES: Tuple[str, ...] = tuple(_FIGURES)


def get_objective(name: str, dimension: int = 10) -> ObjectiveSpec:
    """
    Look up a catalog objective at the requested dimension

    Args:
        name: One of OBJECTIVE_NAMES
        dimension: Number of variables

    Returns:
        ObjectiveSpec with default box and known minimum
    """
    if name not in _CATALOG:
        raise UnknownObjectiveError(name, OBJECTIVE_NAMES)
    if dimension < 1:
        raise ConfigError("dimension must be a positive integer")

    function, minimizer_of, minimum = _CATALOG[name]
    lower, upper = _symmetric_box(dimension)
    if name == "x_j":
        upper = np.full(dimension, dimension + BOX_HALF_WIDTH)

    return ObjectiveSpec(
        name=name,
        dimension=dimension,
        lower_bounds=lower,
        upper_bounds=upper,
        function=function,
        minimizer=None if minimizer_of is None else minimizer_of(dimension),
        minimum=minimum,
    )


def resolve_objective(name: str, dimension: int = 10) -> ObjectiveSpec:
    """Catalog lookup that also knows the 1-D demonstration functions"""
    if name in _FIGURES:
        if dimension != 1:
            raise ConfigError(f"{name} is one-dimensional")
        function, (lb, ub) = _FIGURES[name]
        minimizer = np.array([5.0]) if name == "parabola" else None
        return ObjectiveSpec(
            name=name,
            dimension=1,
            lower_bounds=np.array([lb]),
            upper_bounds=np.array([ub]),
            function=function,
            minimizer=minimizer,
            minimum=0.0 if minimizer is not None else None,
        )
    if name not in _CATALOG:
        raise UnknownObjectiveError(name, OBJECTIVE_NAMES + FIGURE_NAMES)
    return get_objective(name, dimension)


def evaluate(name: str, x, dimension: Optional[int] = None) -> float:
    """
    Evaluate catalog objective `name` at a single point

    Args:
        name: One of OBJECTIVE_NAMES
        x: Point to evaluate
        dimension: Expected dimension; defaults to the length of `x`
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ConfigError("evaluate expects a single point")
    return get_objective(name, dimension or x.shape[0])(x)


def list_objectives(dimension: int = 10) -> List[ObjectiveSpec]:
    """All catalog objectives in suite order"""
    return [get_objective(name, dimension) for name in OBJECTIVE_NAMES]
