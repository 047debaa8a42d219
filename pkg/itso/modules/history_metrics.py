"""
Convergence History Metrics
Run averaging, min-max normalization and the cross-function history h
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import HarnessError

logger = logging.getLogger(__name__)

H_EXPONENT = 0.1


def _stack(vectors: Sequence[Sequence[float]], what: str) -> np.ndarray:
    if len(vectors) == 0:
        raise HarnessError(f"no {what} given")
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise HarnessError(f"ragged {what}: lengths {sorted(lengths)}")
    return np.asarray([np.asarray(v, dtype=float) for v in vectors])


def average_runs(traces: Sequence[Sequence[float]]) -> np.ndarray:
    """
    Elementwise mean of r equally long best-so-far traces

    Args:
        traces: r traces of length f_e

    Returns:
        Mean trace of length f_e
    """
    return _stack(traces, "traces").mean(axis=0)


def normalize_history(mean_trace: Sequence[float], bounds: Optional[Tuple[float, float]] = None) -> np.ndarray:
    """
    Min-max normalize a mean trace into [0, 1]

    Args:
        mean_trace: Run-averaged trace
        bounds: Shared (min, max) scale; the trace's own extremes when omitted

    Returns:
        Normalized trace; all zeros when the scale is degenerate
    """
    v = np.asarray(mean_trace, dtype=float)
    if v.size == 0:
        raise HarnessError("cannot normalize an empty trace")
    lo, hi = (float(v.min()), float(v.max())) if bounds is None else map(float, bounds)
    if hi <= lo:
        return np.zeros_like(v)
    return np.clip((v - lo) / (hi - lo), 0.0, 1.0)


def aggregate_h(normalized: Sequence[Sequence[float]]) -> np.ndarray:
    """
    Cross-function convergence history

    Args:
        normalized: m normalized traces of equal length, one per function

    Returns:
        h_i = (mean over functions of normalized_i) ** (1/10)
    """
    stacked = _stack(normalized, "normalized traces")
    return stacked.mean(axis=0) ** H_EXPONENT


def h_minimum(h: Sequence[float]) -> float:
    """Smallest value of h (the summary statistic per optimizer)"""
    return float(np.min(np.asarray(h, dtype=float)))
