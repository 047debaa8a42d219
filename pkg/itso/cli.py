"""
ITSO Command Line
optimize, bench, trace-dist and external commands
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from . import __version__
from .exceptions import ConfigError, ItsoError, SamplingError, UnknownObjectiveError
from .external import ExternalEvaluator
from .harness import DEFAULT_OPTIMIZERS, NamedOptimizer, RunGrid, run_grid, write_trace_csv
from .modules.distribution_snapshots import (
    DistributionSnapshot,
    rise_window,
    tabulate_marginal,
    uniform_snapshot,
    uniform_window,
)
from .objectives import BOX_HALF_WIDTH, OBJECTIVE_NAMES, ObjectiveSpec, get_objective, resolve_objective
from .optimizer import OptimizerConfig, Variant, optimize, snapshot_marginal
from .sampling import KernelSpec, KernelVariant
from .settings import Settings, configure_logging, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_SNAPSHOTS = "3,100,350,500"


class Colors:
    GREEN = '\033[92m'
    CYAN = '\033[96m'
    RESET = '\033[0m'
    BOLD = '\033[1m'


def _paint(text: str, *codes: str) -> str:
    if not sys.stdout.isatty():
        return text
    return "".join(codes) + text + Colors.RESET


def print_header(text: str) -> None:
    print(_paint('=' * 60, Colors.BOLD, Colors.CYAN))
    print(_paint(text.center(60), Colors.BOLD, Colors.CYAN))
    print(_paint('=' * 60, Colors.BOLD, Colors.CYAN))


def print_summary_table(rows: Sequence) -> None:
    """Aligned optimizer / h_min table, best first"""
    print_header("SUMMARY: MINIMUM OF h")
    width = max(len("optimizer"), *(len(name) for name, _ in rows))
    print(f"{'optimizer'.ljust(width)}  h_min")
    for rank, (name, h_min) in enumerate(sorted(rows, key=lambda row: row[1])):
        line = f"{name.ljust(width)}  {h_min:.6g}"
        print(_paint(line, Colors.GREEN) if rank == 0 else line)


class UsageError(Exception):
    """Flag combination rejected after parsing"""


def _csv_list(raw: str) -> List[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def _kernel_from_flag(name: str) -> Optional[KernelSpec]:
    # gaussian keeps the budget-scaled default sharpening
    variant = KernelVariant(name)
    if variant is KernelVariant.GAUSSIAN:
        return None
    return KernelSpec(variant)


def _box(objective: Optional[ObjectiveSpec], dimension: int, args) -> tuple:
    if objective is None:
        lower = np.full(dimension, -BOX_HALF_WIDTH)
        upper = np.full(dimension, BOX_HALF_WIDTH)
    else:
        lower, upper = objective.lower_bounds.copy(), objective.upper_bounds.copy()
    if args.lb is not None:
        lower[:] = args.lb
    if args.ub is not None:
        upper[:] = args.ub
    return tuple(lower.tolist()), tuple(upper.tolist())


def _optimizer_config(args, settings: Settings, lower, upper, variant=None) -> OptimizerConfig:
    return OptimizerConfig(
        lower,
        upper,
        args.budget,
        seed=settings.seed if args.seed is None else args.seed,
        variant=Variant(variant or args.variant),
        alpha=args.alpha,
        kernel=_kernel_from_flag(args.kernel),
        warmup=args.warmup,
    )


def _report(result, objective_name: str, config: OptimizerConfig) -> dict:
    report = result.to_report()
    report.update({"objective": objective_name, "dimension": config.dimension, "seed": config.seed})
    return report


def _emit(payload: dict) -> None:
    print(json.dumps(payload))


def cmd_optimize(args, settings: Settings) -> int:
    if args.external:
        return _run_external(args.external, args, settings)
    if not args.objective:
        raise UsageError("optimize needs --objective or --external")

    objective = get_objective(args.objective, args.dim)
    lower, upper = _box(objective, args.dim, args)
    config = _optimizer_config(args, settings, lower, upper)
    logger.info(f"Optimizing {objective.name} (n={args.dim}, budget={args.budget}, variant={config.variant.value})")

    result = optimize(config, objective)
    if args.trace_out:
        write_trace_csv(Path(args.trace_out), result.trace)
    _emit(_report(result, objective.name, config))
    return EXIT_OK


def _run_external(cmd: str, args, settings: Settings) -> int:
    lower, upper = _box(None, args.dim, args)
    config = _optimizer_config(args, settings, lower, upper)
    timeout_ms = settings.timeout_ms if args.timeout_ms is None else args.timeout_ms

    with ExternalEvaluator(cmd, timeout_ms=timeout_ms) as evaluator:
        result = optimize(config, evaluator)
    if args.trace_out:
        write_trace_csv(Path(args.trace_out), result.trace)
    _emit(_report(result, "external", config))
    return EXIT_OK


def cmd_external(args, settings: Settings) -> int:
    return _run_external(args.cmd, args, settings)


def cmd_bench(args, settings: Settings) -> int:
    functions = list(OBJECTIVE_NAMES) if args.functions == "all" else _csv_list(args.functions)
    kernel = _kernel_from_flag(args.kernel)
    optimizers = []
    for name in _csv_list(args.optimizers):
        itso = name.startswith("itso")
        optimizers.append(
            NamedOptimizer(
                name,
                alpha=args.alpha if itso else None,
                kernel=kernel if itso else None,
                warmup=args.warmup if itso else None,
            )
        )

    grid = RunGrid(
        optimizers=tuple(optimizers),
        objectives=tuple(functions),
        dimension=args.dim,
        repeats=args.repeats,
        max_evaluations=args.budget,
        base_seed=settings.seed if args.seed is None else args.seed,
    )
    out_dir = Path(args.out) if args.out else settings.output_dir
    workers = args.workers or settings.workers
    progress = settings.progress and not args.no_progress

    result = run_grid(grid, out_dir=out_dir, workers=workers, progress=progress)
    print_summary_table(result.summary())
    print(f"\nArtifacts written to {out_dir}")
    return EXIT_OK


def _snapshot_at(result, config: OptimizerConfig, evaluations: int) -> tuple:
    lower, upper = config.lower_bounds[0], config.upper_bounds[0]
    if evaluations < config.warmup:
        # the next point is still drawn uniformly from the box
        return uniform_snapshot(evaluations, lower, upper), uniform_window(lower, upper)
    try:
        marginal = snapshot_marginal(result.history, config, evaluations)
    except SamplingError as e:
        logger.debug(f"Snapshot {evaluations} falls back to uniform: {e}")
        return uniform_snapshot(evaluations, lower, upper), uniform_window(lower, upper)
    return tabulate_marginal(marginal, evaluations, lower, upper), rise_window(marginal)


def write_snapshot_csv(path: Path, snapshot: DistributionSnapshot) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("x,pdf,cdf\n")
        for x, pdf, cdf in snapshot.rows():
            f.write(f"{x!r},{pdf!r},{cdf!r}\n")


def cmd_trace_dist(args, settings: Settings) -> int:
    if args.dim != 1:
        raise UsageError("trace-dist works on one-dimensional objectives only (--dim 1)")
    try:
        snapshots = sorted({int(k) for k in _csv_list(args.snapshots)})
    except ValueError:
        raise UsageError(f"--snapshots must be a comma-separated list of integers, got {args.snapshots!r}")
    if not snapshots or snapshots[0] < 1 or snapshots[-1] > args.budget:
        raise UsageError(f"snapshots must lie in 1..{args.budget}")

    objective = resolve_objective(args.objective, 1)
    lower, upper = _box(objective, 1, args)
    config = _optimizer_config(args, settings, lower, upper, variant=Variant.FULL)
    result = optimize(config, objective)

    out_dir = Path(args.out) if args.out else settings.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for k in tqdm(snapshots, desc="snapshots", disable=not (settings.progress and not args.no_progress), file=sys.stderr):
        snapshot, window = _snapshot_at(result, config, k)
        path = out_dir / f"{objective.name}__snapshot{k}.csv"
        write_snapshot_csv(path, snapshot)
        written.append({"evaluations": k, "file": str(path), "window": [float(window[0]), float(window[1])]})

    report = _report(result, objective.name, config)
    report["snapshots"] = written
    _emit(report)
    return EXIT_OK


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=10, help="number of variables (default 10)")
    common.add_argument("--budget", type=int, default=5000, help="objective evaluations f_e (default 5000)")
    common.add_argument("--seed", type=int, default=None, help="u64 seed (default ITSO_SEED or 0)")
    common.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.SHORT.value)
    common.add_argument("--alpha", type=int, default=None, help="elite count (default max(2, f_e // 100))")
    common.add_argument("--kernel", choices=[k.value for k in KernelVariant], default=KernelVariant.GAUSSIAN.value)
    common.add_argument(
        "--warmup", type=int, default=None,
        help="initial uniform evaluations (default max(10, n), at least min(alpha, f_e // 2) for short)",
    )
    common.add_argument("--lb", type=float, default=None, help="lower bound applied to every dimension")
    common.add_argument("--ub", type=float, default=None, help="upper bound applied to every dimension")
    common.add_argument("--out", default=None, help="output directory (default ITSO_OUTPUT_DIR)")
    common.add_argument("--trace-out", default=None, help="write the best-so-far trace CSV here")
    common.add_argument("--workers", type=int, default=None, help="parallel grid cells (default ITSO_WORKERS)")
    common.add_argument("--no-progress", action="store_true", help="hide progress bars")
    common.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itso",
        description="Inverse Transform Sampling Optimizer for box-bounded black-box functions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    optimize_cmd = commands.add_parser("optimize", parents=[_common_flags()], help="run one optimization")
    optimize_cmd.add_argument("--objective", default=None, help="catalog objective name")
    optimize_cmd.add_argument("--external", default=None, help="evaluator command instead of --objective")
    optimize_cmd.add_argument("--timeout-ms", type=int, default=None)
    optimize_cmd.set_defaults(handler=cmd_optimize)

    bench = commands.add_parser("bench", parents=[_common_flags()], help="run a benchmark grid")
    bench.add_argument("--functions", default="all", help="comma-separated objective names or 'all'")
    bench.add_argument("--optimizers", default=",".join(DEFAULT_OPTIMIZERS))
    bench.add_argument("--repeats", type=int, default=10)
    bench.set_defaults(handler=cmd_bench)

    trace = commands.add_parser("trace-dist", parents=[_common_flags()], help="write PDF/CDF snapshots of a 1-D run")
    trace.add_argument("--objective", default="parabola")
    trace.add_argument("--snapshots", default=DEFAULT_SNAPSHOTS)
    trace.set_defaults(handler=cmd_trace_dist, dim=1, budget=500)

    external = commands.add_parser("external", parents=[_common_flags()], help="optimize an external evaluator process")
    external.add_argument("--cmd", required=True, help="evaluator command line")
    external.add_argument("--timeout-ms", type=int, default=None, help="per-evaluation timeout (default 10000)")
    external.set_defaults(handler=cmd_external)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    settings = load_settings()
    configure_logging("INFO" if args.verbose else settings.log_level)

    try:
        return args.handler(args, settings)
    except (UsageError, UnknownObjectiveError, ConfigError) as e:
        parser.print_usage(sys.stderr)
        print(f"itso {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ItsoError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"itso {args.command}: error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
