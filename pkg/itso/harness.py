"""
Benchmark Harness
Runs (optimizer x objective x repeat) grids, reduces the traces to the
cross-function convergence history h and persists every artifact as CSV
"""

import csv
import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .baselines import BaselineConfig, BaselineKind, run_baseline
from .exceptions import ConfigError, GridCellError
from .modules.history_metrics import aggregate_h, average_runs, h_minimum, normalize_history
from .objectives import ObjectiveSpec, get_objective
from .optimizer import OptimizationResult, OptimizerConfig, Variant, optimize
from .sampling import KernelSpec

logger = logging.getLogger(__name__)

OPTIMIZER_METHODS = ("itso-short", "itso-full", "random", "de")
DEFAULT_OPTIMIZERS = ("itso-short", "random", "de")

Cell = Tuple[str, str, int]


@dataclass(frozen=True)
class NamedOptimizer:
    """
    An optimizer configuration with the label used in artifact names

    Attributes:
        name: Label, unique inside a grid
        method: One of OPTIMIZER_METHODS (defaults to the name)
        alpha: Elite count for itso-short
        kernel: Kernel for itso-full
        warmup: Warmup evaluations for the ITSO variants
    """

    name: str
    method: Optional[str] = None
    alpha: Optional[int] = None
    kernel: Optional[KernelSpec] = None
    warmup: Optional[int] = None

    def __post_init__(self):
        method = self.method or self.name
        if method not in OPTIMIZER_METHODS:
            raise ConfigError(
                f"unknown optimizer '{method}'; valid names: {', '.join(OPTIMIZER_METHODS)}"
            )
        object.__setattr__(self, "method", method)

    def run(self, objective: ObjectiveSpec, max_evaluations: int, seed: int) -> OptimizationResult:
        lower, upper = objective.lower_bounds, objective.upper_bounds
        if self.method in ("random", "de"):
            kind = BaselineKind.RANDOM_SEARCH if self.method == "random" else BaselineKind.DE_RAND_1_BIN
            config = BaselineConfig(kind, tuple(lower), tuple(upper), max_evaluations, seed=seed)
            return run_baseline(config, objective)

        variant = Variant.SHORT if self.method == "itso-short" else Variant.FULL
        config = OptimizerConfig(
            tuple(lower),
            tuple(upper),
            max_evaluations,
            seed=seed,
            variant=variant,
            alpha=self.alpha,
            kernel=self.kernel,
            warmup=self.warmup,
        )
        return optimize(config, objective)


@dataclass(frozen=True)
class RunGrid:
    """
    Experiment grid

    Attributes:
        optimizers: Named optimizer configurations
        objectives: Catalog objective names
        dimension: Number of variables n of every objective
        repeats: Runs per (optimizer, objective) cell
        max_evaluations: Budget f_e of every run
        base_seed: Run k of every cell uses seed base_seed + k
    """

    optimizers: Tuple[NamedOptimizer, ...]
    objectives: Tuple[str, ...]
    dimension: int = 10
    repeats: int = 10
    max_evaluations: int = 5000
    base_seed: int = 0

    def __post_init__(self):
        optimizers = tuple(
            o if isinstance(o, NamedOptimizer) else NamedOptimizer(str(o)) for o in self.optimizers
        )
        object.__setattr__(self, "optimizers", optimizers)
        object.__setattr__(self, "objectives", tuple(self.objectives))

        names = [o.name for o in optimizers]
        if not names or len(set(names)) != len(names):
            raise ConfigError("optimizer names must be non-empty and unique")
        if not self.objectives or len(set(self.objectives)) != len(self.objectives):
            raise ConfigError("objective names must be non-empty and unique")
        for name in self.objectives:
            get_objective(name, max(1, self.dimension))
        if self.dimension < 1 or self.repeats < 1 or self.max_evaluations < 1:
            raise ConfigError("dimension, repeats and max_evaluations must be positive")
        if self.base_seed < 0:
            raise ConfigError("base_seed must be nonnegative")

    def cells(self) -> List[Cell]:
        return [
            (o.name, objective, k)
            for o in self.optimizers
            for objective in self.objectives
            for k in range(self.repeats)
        ]


@dataclass
class AggregateHistory:
    """
    Reduced convergence curves of one optimizer

    Attributes:
        per_function_mean: Run-averaged best-so-far trace per objective
        per_function_normalized: The same traces min-max normalized
        h: Cross-function history
        h_min: Smallest entry of h
    """

    per_function_mean: Dict[str, np.ndarray]
    per_function_normalized: Dict[str, np.ndarray]
    h: np.ndarray
    h_min: float


@dataclass
class GridResult:
    grid: RunGrid
    traces: Dict[Cell, np.ndarray]
    aggregates: Dict[str, AggregateHistory] = field(default_factory=dict)

    def summary(self) -> List[Tuple[str, float]]:
        return [(o.name, self.aggregates[o.name].h_min) for o in self.grid.optimizers]

    def final_values(self, optimizer: str, objective: str) -> np.ndarray:
        """Final best-so-far value of every repeat of one cell"""
        return np.array([self.traces[(optimizer, objective, k)][-1] for k in range(self.grid.repeats)])


def aggregate_traces(grid: RunGrid, traces: Dict[Cell, np.ndarray]) -> Dict[str, AggregateHistory]:
    """
    Reduce per-run traces to one AggregateHistory per optimizer

    Each objective's mean traces are normalized on the scale shared by all
    optimizers of the grid, so h values are comparable across optimizers.
    """
    means: Dict[str, Dict[str, np.ndarray]] = {o.name: {} for o in grid.optimizers}
    for o in grid.optimizers:
        for objective in grid.objectives:
            runs = [traces[(o.name, objective, k)] for k in range(grid.repeats)]
            means[o.name][objective] = average_runs(runs)

    normalized: Dict[str, Dict[str, np.ndarray]] = {o.name: {} for o in grid.optimizers}
    for objective in grid.objectives:
        pooled = np.concatenate([means[o.name][objective] for o in grid.optimizers])
        bounds = (float(pooled.min()), float(pooled.max()))
        for o in grid.optimizers:
            normalized[o.name][objective] = normalize_history(means[o.name][objective], bounds)

    aggregates = {}
    for o in grid.optimizers:
        h = aggregate_h([normalized[o.name][objective] for objective in grid.objectives])
        aggregates[o.name] = AggregateHistory(
            per_function_mean=means[o.name],
            per_function_normalized=normalized[o.name],
            h=h,
            h_min=h_minimum(h),
        )
    return aggregates


def _run_cell(grid: RunGrid, optimizer: NamedOptimizer, objective_name: str, repeat: int) -> np.ndarray:
    objective = get_objective(objective_name, grid.dimension)
    result = optimizer.run(objective, grid.max_evaluations, grid.base_seed + repeat)
    return result.trace


def run_grid(
    grid: RunGrid,
    out_dir: Optional[Path] = None,
    workers: int = 1,
    progress: bool = False,
) -> GridResult:
    """
    Execute every cell of the grid and reduce the traces

    Args:
        grid: Experiment grid
        out_dir: Directory for the CSV artifacts; nothing is written when None
        workers: Thread count for independent cells
        progress: Show a progress bar on stderr

    Returns:
        GridResult with all traces and aggregates

    Raises:
        GridCellError: first failing cell, identified by (optimizer, objective, run),
            whatever the objective or optimizer raised
    """
    by_name = {o.name: o for o in grid.optimizers}
    cells = grid.cells()
    traces: Dict[Cell, np.ndarray] = {}
    logger.info(
        f"Running grid: {len(grid.optimizers)} optimizers x {len(grid.objectives)} objectives "
        f"x {grid.repeats} repeats, budget {grid.max_evaluations}"
    )

    with tqdm(total=len(cells), desc="grid cells", disable=not progress, file=sys.stderr) as bar:
        with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
            futures = {
                executor.submit(_run_cell, grid, by_name[name], objective, k): (name, objective, k)
                for name, objective, k in cells
            }
            try:
                for future in as_completed(futures):
                    cell = futures[future]
                    try:
                        traces[cell] = future.result()
                    except Exception as e:
                        logger.error(f"Grid cell {cell} failed: {e}")
                        raise GridCellError(cell, e) from e
                    bar.update(1)
            except GridCellError:
                for pending in futures:
                    pending.cancel()
                raise

    result = GridResult(grid=grid, traces=traces, aggregates=aggregate_traces(grid, traces))
    if out_dir is not None:
        write_artifacts(result, Path(out_dir))
    return result


def _fmt(value: float) -> str:
    # shortest round-trip representation
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_trace_csv(path: Path, trace: Sequence[float]) -> None:
    _write_csv(path, ("evaluation", "best_f"), ((i, _fmt(v)) for i, v in enumerate(trace, start=1)))


def load_trace_csv(path: Path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        return np.array([float(row["best_f"]) for row in reader])


def write_artifacts(result: GridResult, out_dir: Path) -> List[Path]:
    """
    Persist traces, aggregate histories, the summary and the grid manifest

    Returns:
        Paths written, in a fixed order
    """
    grid = result.grid
    out_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    for name, objective, k in grid.cells():
        path = out_dir / f"{name}__{objective}__run{k}.csv"
        write_trace_csv(path, result.traces[(name, objective, k)])
        written.append(path)

    for o in grid.optimizers:
        path = out_dir / f"{o.name}__h.csv"
        h = result.aggregates[o.name].h
        _write_csv(path, ("evaluation", "h"), ((i, _fmt(v)) for i, v in enumerate(h, start=1)))
        written.append(path)

    path = out_dir / "summary.csv"
    _write_csv(path, ("optimizer", "h_min"), ((name, _fmt(h_min)) for name, h_min in result.summary()))
    written.append(path)

    path = out_dir / "manifest.txt"
    manifest = {
        "optimizers": ",".join(f"{o.name}={o.method}" for o in grid.optimizers),
        "objectives": ",".join(grid.objectives),
        "n": grid.dimension,
        "f_e": grid.max_evaluations,
        "r": grid.repeats,
        "base_seed": grid.base_seed,
    }
    path.write_text("".join(f"{key}: {value}\n" for key, value in manifest.items()), encoding="utf-8")
    written.append(path)

    logger.info(f"Wrote {len(written)} artifacts to {out_dir}")
    return written
