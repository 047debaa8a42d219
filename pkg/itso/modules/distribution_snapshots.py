"""
Distribution Snapshots
Tabulates an empirical marginal on a regular grid for plotting and checks
how close it is to a step (Heaviside) shape
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..sampling import EmpiricalMarginal, cdf_interpolant, marginal_density, quantile_window

logger = logging.getLogger(__name__)

GRID_POINTS = 512


@dataclass(frozen=True)
class DistributionSnapshot:
    """Marginal tabulated on a grid at one evaluation count"""

    evaluations: int
    x: np.ndarray
    pdf: np.ndarray
    cdf: np.ndarray

    def rows(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.x.tolist(), self.pdf.tolist(), self.cdf.tolist()))


def tabulate_marginal(
    marginal: EmpiricalMarginal,
    evaluations: int,
    lower: float,
    upper: float,
    points: int = GRID_POINTS,
) -> DistributionSnapshot:
    """
    Sample the PDF and CDF of a marginal on `points` equally spaced coordinates

    Args:
        marginal: Marginal with cdf_values
        evaluations: Evaluation count the marginal belongs to
        lower: Left end of the grid (box lower bound)
        upper: Right end of the grid (box upper bound)
        points: Grid size

    Returns:
        DistributionSnapshot
    """
    grid = np.linspace(lower, upper, points)
    return DistributionSnapshot(
        evaluations=evaluations,
        x=grid,
        pdf=marginal_density(marginal, grid),
        cdf=cdf_interpolant(marginal, grid),
    )


def uniform_snapshot(evaluations: int, lower: float, upper: float, points: int = GRID_POINTS) -> DistributionSnapshot:
    """Uniform distribution over the box, used when no marginal can be built yet"""
    grid = np.linspace(lower, upper, points)
    return DistributionSnapshot(
        evaluations=evaluations,
        x=grid,
        pdf=np.full(points, 1.0 / (upper - lower)),
        cdf=(grid - lower) / (upper - lower),
    )


def rise_window(marginal: EmpiricalMarginal, low: float = 0.05, high: float = 0.95) -> Tuple[float, float]:
    """Interval over which the CDF climbs from `low` to `high`"""
    return quantile_window(marginal, low, high)


def linear_deviation(marginal: EmpiricalMarginal, points: int = GRID_POINTS) -> float:
    """
    Largest gap between the CDF and the straight line across its support

    A uniform marginal gives 0; a step gives values close to 0.5.
    """
    support = marginal.support
    grid = np.linspace(support[0], support[-1], points)
    line = (grid - support[0]) / (support[-1] - support[0])
    return float(np.max(np.abs(cdf_interpolant(marginal, grid) - line)))


def uniform_window(lower: float, upper: float, low: float = 0.05, high: float = 0.95) -> Tuple[float, float]:
    """rise_window of the uniform distribution over [lower, upper]"""
    width = upper - lower
    return lower + low * width, lower + high * width
