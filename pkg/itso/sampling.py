"""
Sampling Core
Builds per-dimension empirical distributions from the evaluation history
through an order-reversing kernel and samples them by inverse transform
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import SamplingError

logger = logging.getLogger(__name__)

DUPLICATE_TOLERANCE = 1e-12
DEFAULT_EPSILON = 1e-6

ArrayLike = Union[float, Sequence[float], np.ndarray]


class KernelVariant(str, Enum):
    GAUSSIAN = "gaussian"
    MAX_SHIFT = "maxshift"
    NORMALIZED = "normalized"


class GrowthSchedule(str, Enum):
    LINEAR = "linear"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class KernelSpec:
    """
    Order-reversing map from objective values to probability weights

    The GAUSSIAN kernel is exp(-g(i) * z**2) with z = (f - min f) / (max f - min f),
    so g(i) acts on values rescaled to [0, 1]. Against raw values the same kernel
    reads exp(-g(i) / range**2 * (f - min f)**2): to reproduce a rate quoted for
    unscaled values, divide it by the squared value range.

    Attributes:
        variant: Kernel family
        gaussian_growth: Rate c of the LINEAR schedule g(i) = c * i
        epsilon0: e_0 of the schedule e_i = e_0 / (i + 1) (NORMALIZED only)
        schedule: LINEAR or GEOMETRIC growth of g(i)
        growth_start: g(0) of the GEOMETRIC schedule
        growth_end: g(horizon) of the GEOMETRIC schedule
        horizon: Iterations over which GEOMETRIC climbs from growth_start to growth_end
    """

    variant: KernelVariant = KernelVariant.NORMALIZED
    gaussian_growth: float = 1.0
    epsilon0: float = DEFAULT_EPSILON
    schedule: GrowthSchedule = GrowthSchedule.LINEAR
    growth_start: float = 1.0
    growth_end: float = 1.0
    horizon: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", KernelVariant(self.variant))
        object.__setattr__(self, "schedule", GrowthSchedule(self.schedule))
        if self.variant is KernelVariant.GAUSSIAN:
            if self.schedule is GrowthSchedule.LINEAR and not self.gaussian_growth > 0:
                raise SamplingError("gaussian_growth must be positive for the GAUSSIAN kernel")
            if self.schedule is GrowthSchedule.GEOMETRIC:
                if not 0 < self.growth_start <= self.growth_end:
                    raise SamplingError("geometric growth needs 0 < growth_start <= growth_end")
                if self.horizon < 1:
                    raise SamplingError("horizon must be a positive integer")
        if not self.epsilon0 > 0:
            raise SamplingError("epsilon0 must be positive")

    @classmethod
    def geometric(cls, start: float, end: float, horizon: int) -> "KernelSpec":
        """GAUSSIAN kernel whose g climbs geometrically from `start` to `end` over `horizon` iterations"""
        return cls(
            KernelVariant.GAUSSIAN,
            schedule=GrowthSchedule.GEOMETRIC,
            growth_start=start,
            growth_end=end,
            horizon=horizon,
        )

    def growth(self, iteration: int) -> float:
        """g(i) of the GAUSSIAN kernel"""
        if self.schedule is GrowthSchedule.GEOMETRIC:
            ratio = self.growth_end / self.growth_start
            return self.growth_start * ratio ** (iteration / self.horizon)
        return self.gaussian_growth * iteration

    def epsilon(self, iteration: int) -> float:
        """e_i of the NORMALIZED kernel"""
        return self.epsilon0 / (iteration + 1)


class EvaluationHistory:
    """
    Append-only record of evaluated points and their objective values

    Storage grows geometrically; `points` and `values` return read-only views
    of the filled prefix.
    """

    def __init__(self, dimension: int, capacity: int = 64):
        if dimension < 1:
            raise SamplingError("dimension must be a positive integer")
        self.dimension = int(dimension)
        self._points = np.empty((max(1, capacity), self.dimension), dtype=float)
        self._values = np.empty(max(1, capacity), dtype=float)
        self._size = 0

    @classmethod
    def from_arrays(cls, points, values) -> "EvaluationHistory":
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        values = np.asarray(values, dtype=float).ravel()
        if points.shape[0] != values.shape[0]:
            raise SamplingError("points and values must have equal length")
        history = cls(points.shape[1], capacity=max(1, len(values)))
        for point, value in zip(points, values):
            history.append(point, value)
        return history

    def append(self, point, value: float) -> None:
        point = np.asarray(point, dtype=float).ravel()
        if point.shape[0] != self.dimension:
            raise SamplingError(
                f"point has {point.shape[0]} coordinates, history dimension is {self.dimension}"
            )
        if self._size == self._values.shape[0]:
            grow = self._values.shape[0] * 2
            self._points = np.resize(self._points, (grow, self.dimension))
            self._values = np.resize(self._values, grow)
        self._points[self._size] = point
        self._values[self._size] = float(value)
        self._size += 1

    def __len__(self) -> int:
        return self._size

    @property
    def points(self) -> np.ndarray:
        view = self._points[:self._size]
        view.flags.writeable = False
        return view

    @property
    def values(self) -> np.ndarray:
        view = self._values[:self._size]
        view.flags.writeable = False
        return view

    def prefix(self, count: int) -> "EvaluationHistory":
        """Copy of the first `count` entries"""
        count = max(0, min(int(count), self._size))
        history = EvaluationHistory(self.dimension, capacity=max(1, count))
        history._points[:count] = self._points[:count]
        history._values[:count] = self._values[:count]
        history._size = count
        return history


@dataclass(frozen=True)
class EmpiricalMarginal:
    """
    One-dimensional empirical distribution over the observed coordinates

    Attributes:
        support: Strictly increasing coordinates
        pdf_weights: Normalized kernel weights, one per support point
        cdf_values: Cumulative distribution at each support point (None until built)
        lower_bound: Box limit lb_j
        upper_bound: Box limit ub_j
    """

    support: np.ndarray
    pdf_weights: np.ndarray
    lower_bound: float
    upper_bound: float
    cdf_values: Optional[np.ndarray] = field(default=None)

    def __len__(self) -> int:
        return int(self.support.shape[0])


def _check_values(values) -> np.ndarray:
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise SamplingError("empty history")
    if not np.all(np.isfinite(values)):
        raise SamplingError("non-finite objective")
    return values


def kernel_apply(spec: KernelSpec, values, iteration: int = 0) -> np.ndarray:
    """
    Map objective values to nonnegative order-reversed weights

    Args:
        spec: Kernel family and schedule parameters
        values: Objective values f(x_i)
        iteration: Inverse-sampling iteration i driving g(i) and e_i

    Returns:
        One weight per input value; uniform ones when all values coincide
    """
    values = _check_values(values)
    if iteration < 0:
        raise SamplingError("iteration must be nonnegative")

    f_min = values.min()
    value_range = values.max() - f_min
    if value_range == 0:
        return np.ones_like(values)

    if spec.variant is KernelVariant.GAUSSIAN:
        # shifted to f - min f so mass gathers at the minimum for negative objectives too
        scaled = (values - f_min) / value_range
        return np.exp(-spec.growth(iteration) * scaled ** 2)

    if spec.variant is KernelVariant.MAX_SHIFT:
        return values.max() - values

    eps = spec.epsilon(iteration)
    weights = 1.0 - (values - f_min + eps) / (value_range + eps)
    return np.clip(weights, 0.0, 1.0)


def unique_value_indices(values, tolerance: float = DUPLICATE_TOLERANCE) -> np.ndarray:
    """
    Indices of entries kept after duplicate objective values are removed

    Values within `tolerance` of their sorted neighbour form one group; the
    earliest entry of every group survives. Returned indices are ascending.
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return np.empty(0, dtype=int)
    order = np.argsort(values, kind="stable")
    starts = np.flatnonzero(np.r_[True, np.diff(values[order]) > tolerance])
    keep = np.minimum.reduceat(order, starts)
    return np.sort(keep)


def build_marginal(
    history: EvaluationHistory,
    dim: int,
    spec: KernelSpec,
    bounds: Tuple[float, float],
    iteration: int = 0,
) -> EmpiricalMarginal:
    """
    Build the dimension-`dim` marginal from the evaluation history

    Entries with duplicate objective values are dropped first; coordinates
    shared by several remaining entries collapse into one support point that
    keeps the largest weight.

    Args:
        history: Evaluated points and values
        dim: 0-based dimension index
        spec: Kernel used to weight the entries
        bounds: (lb_j, ub_j) of the dimension
        iteration: Kernel schedule iteration

    Returns:
        EmpiricalMarginal with normalized pdf_weights and no cdf yet
    """
    if not 0 <= dim < history.dimension:
        raise SamplingError(f"dimension {dim} out of range 0..{history.dimension - 1}")
    if len(history) == 0:
        raise SamplingError("empty history")

    values = _check_values(history.values)
    keep = unique_value_indices(values)
    if keep.size < 2:
        raise SamplingError("insufficient history")

    weights = kernel_apply(spec, values[keep], iteration)
    coords = history.points[keep, dim]

    support, inverse = np.unique(coords, return_inverse=True)
    if support.size < 2:
        raise SamplingError("insufficient support")
    merged = np.zeros(support.size, dtype=float)
    np.maximum.at(merged, inverse.ravel(), weights)

    total = merged.sum()
    if not total > 0:
        raise SamplingError("insufficient support")

    lower, upper = float(bounds[0]), float(bounds[1])
    return EmpiricalMarginal(
        support=support,
        pdf_weights=merged / total,
        lower_bound=min(lower, float(support[0])),
        upper_bound=max(upper, float(support[-1])),
    )


def build_cdf(marginal: EmpiricalMarginal) -> EmpiricalMarginal:
    """
    Integrate the piecewise-linear PDF with the trapezoid rule

    Returns:
        Copy of the marginal with cdf_values anchored at 0 and ending at exactly 1
    """
    support = marginal.support
    if support.size < 2:
        raise SamplingError("insufficient support")

    weights = marginal.pdf_weights
    masses = 0.5 * (weights[1:] + weights[:-1]) * np.diff(support)
    total = masses.sum()
    if not total > 0:
        raise SamplingError("insufficient support")

    cdf = np.empty(support.size, dtype=float)
    cdf[0] = 0.0
    cdf[1:] = np.cumsum(masses) / total
    cdf[-1] = 1.0
    # cumulative rounding must not break monotonicity
    np.maximum.accumulate(cdf, out=cdf)
    return replace(marginal, cdf_values=cdf)


def _require_cdf(marginal: EmpiricalMarginal) -> np.ndarray:
    if marginal.cdf_values is None:
        raise SamplingError("marginal has no cdf; call build_cdf first")
    return marginal.cdf_values


def inverse_cdf_sample(marginal: EmpiricalMarginal, r: ArrayLike):
    """
    Invert the piecewise-linear CDF at probability `r`

    Flat CDF segments resolve to their left endpoint; r = 1 maps to the last
    support point.

    Args:
        marginal: Marginal with cdf_values
        r: Probability or array of probabilities in [0, 1]

    Returns:
        float for scalar input, ndarray otherwise
    """
    cdf = _require_cdf(marginal)
    support = marginal.support
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr < 0.0) or np.any(r_arr > 1.0):
        raise SamplingError("probability must lie in [0, 1]")

    flat_r = np.atleast_1d(r_arr)
    k = np.searchsorted(cdf, flat_r, side="left")
    k = np.clip(k, 0, support.size - 1)

    exact = cdf[k] == flat_r
    lo = np.maximum(k - 1, 0)
    span = cdf[k] - cdf[lo]
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(span > 0, (flat_r - cdf[lo]) / span, 0.0)
    interpolated = support[lo] + frac * (support[k] - support[lo])

    out = np.where(exact | (k == 0), support[k], interpolated)
    out = np.where(flat_r >= 1.0, support[-1], out)

    if r_arr.ndim == 0:
        return float(out[0])
    return out.reshape(r_arr.shape)


def cdf_interpolant(marginal: EmpiricalMarginal, x: ArrayLike):
    """Piecewise-linear CDF at `x`; 0 left of the support, 1 right of it"""
    cdf = _require_cdf(marginal)
    result = np.interp(np.asarray(x, dtype=float), marginal.support, cdf, left=0.0, right=1.0)
    return float(result) if np.ndim(result) == 0 else result


def marginal_density(marginal: EmpiricalMarginal, x: ArrayLike):
    """Normalized piecewise-linear PDF at `x`; zero outside the support"""
    support = marginal.support
    weights = marginal.pdf_weights
    area = float(np.sum(0.5 * (weights[1:] + weights[:-1]) * np.diff(support)))
    if not area > 0:
        raise SamplingError("insufficient support")
    result = np.interp(np.asarray(x, dtype=float), support, weights, left=0.0, right=0.0) / area
    return float(result) if np.ndim(result) == 0 else result


def jitter_weights(
    marginal: EmpiricalMarginal,
    rng: np.random.Generator,
    low: float = 0.9,
    high: float = 1.1,
) -> EmpiricalMarginal:
    """
    Distort the kernel weights with i.i.d. Uniform(low, high) factors

    Returns:
        Renormalized marginal; the cdf is rebuilt when the input had one
    """
    if not 0 < low <= high:
        raise SamplingError("noise bounds must satisfy 0 < low <= high")
    noisy = marginal.pdf_weights * rng.uniform(low, high, size=marginal.pdf_weights.shape)
    jittered = replace(marginal, pdf_weights=noisy / noisy.sum(), cdf_values=None)
    if marginal.cdf_values is not None:
        return build_cdf(jittered)
    return jittered


def quantile_window(marginal: EmpiricalMarginal, low: float = 0.05, high: float = 0.95) -> Tuple[float, float]:
    """Coordinates where the CDF crosses `low` and `high`"""
    return inverse_cdf_sample(marginal, low), inverse_cdf_sample(marginal, high)
