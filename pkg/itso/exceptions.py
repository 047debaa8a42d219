"""
Exception hierarchy for the ITSO optimization toolkit
Every error raised on purpose by the package derives from ItsoError
"""

from typing import Optional, Sequence, Tuple

import numpy as np


class ItsoError(Exception):
    """Base class for all toolkit errors"""


class SamplingError(ItsoError, ValueError):
    """Empirical distribution could not be built or sampled"""


class ConfigError(ItsoError, ValueError):
    """Invalid optimizer, baseline or grid configuration"""


class HarnessError(ItsoError, ValueError):
    """Invalid input to the convergence-history reductions"""


class UnknownObjectiveError(ItsoError, KeyError):
    """Objective name not present in the registry"""

    def __init__(self, name: str, valid_names: Sequence[str]):
        self.name = name
        self.valid_names = list(valid_names)
        super().__init__(
            f"unknown objective '{name}'; valid names: {', '.join(self.valid_names)}"
        )

    def __str__(self) -> str:
        # KeyError would otherwise quote the whole message
        return self.args[0]


class ObjectiveError(ItsoError, RuntimeError):
    """Objective returned a value the optimizers cannot use"""

    def __init__(self, point: np.ndarray, value: float):
        self.point = np.array(point, dtype=float)
        self.value = value
        super().__init__(
            f"non-finite objective value {value!r} at point {self.point.tolist()}"
        )


class EvaluatorError(ItsoError, RuntimeError):
    """External evaluator process failed during evaluation `index` (1-based)"""

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"evaluation {index}: {reason}")


class GridCellError(HarnessError):
    """A single (optimizer, objective, repeat) cell of a run grid failed"""

    def __init__(self, cell: Tuple[str, str, int], cause: Optional[BaseException] = None):
        self.cell = cell
        self.cause = cause
        optimizer, objective, repeat = cell
        super().__init__(
            f"grid cell optimizer={optimizer} objective={objective} run={repeat} failed: {cause}"
        )
