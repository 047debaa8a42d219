"""
End-to-end convergence and ordering checks at desk scale
Run with: pytest -m slow
"""
import numpy as np
import pytest

from itso.harness import DEFAULT_OPTIMIZERS, RunGrid, run_grid
from itso.modules.distribution_snapshots import rise_window
from itso.objectives import OBJECTIVE_NAMES, get_objective, resolve_objective
from itso.optimizer import OptimizerConfig, Variant, elite_window, optimize, snapshot_marginal

pytestmark = pytest.mark.slow

SEEDS = range(10)


def _final_window(name, seed, budget=500):
    spec = resolve_objective(name, 1)
    config = OptimizerConfig(
        tuple(spec.lower_bounds), tuple(spec.upper_bounds), budget,
        seed=seed, variant=Variant.FULL,
    )
    result = optimize(config, spec)
    return result, config, rise_window(snapshot_marginal(result.history, config, budget))


def test_parabola_cdf_approaches_step_at_five():
    hits = 0
    for seed in SEEDS:
        _, _, (low, high) = _final_window("parabola", seed)
        hits += (high - low < 1.0) and (low <= 5.0 <= high)
    assert hits >= 9


def test_wavy_cdf_centres_on_global_minimum():
    hits = 0
    for seed in SEEDS:
        _, _, (low, high) = _final_window("wavy", seed)
        hits += low <= -2.24 <= high
    assert hits >= 9


def test_full_interquantile_width_shrinks_tenfold():
    ratios = []
    for seed in SEEDS:
        result, config, (low, high) = _final_window("parabola", seed)
        start_low, start_high = rise_window(snapshot_marginal(result.history, config, config.warmup))
        ratios.append((high - low) / (start_high - start_low))
    assert np.median(ratios) < 0.1


def test_short_elite_width_shrinks_tenfold():
    spec = resolve_objective("parabola", 1)
    ratios = []
    for seed in SEEDS:
        config = OptimizerConfig((0.0,), (10.0,), 500, seed=seed, variant=Variant.SHORT)
        result = optimize(config, spec)
        dims = result.sampled_dims
        start = elite_window(result.history, config.alpha, 0, evaluations=config.warmup, sampled_dims=dims)
        final = elite_window(result.history, config.alpha, 0, sampled_dims=dims)
        ratios.append((final[1] - final[0]) / (start[1] - start[0]))
    assert np.median(ratios) < 0.1


@pytest.mark.parametrize("name", ["sphere", "ellipsoid", "quartic", "x_5", "x_j"])
def test_short_reaches_known_minimum(name):
    spec = get_objective(name, 10)
    _, minimum = spec.known_minimum
    hits = 0
    for seed in SEEDS:
        config = OptimizerConfig(tuple(spec.lower_bounds), tuple(spec.upper_bounds), 5000, seed=seed)
        hits += abs(optimize(config, spec).best_value - minimum) < 1e-3
    assert hits >= 8


def test_short_sphere_with_hundred_elites():
    spec = get_objective("sphere", 10)
    hits = 0
    for seed in SEEDS:
        config = OptimizerConfig(
            tuple(spec.lower_bounds), tuple(spec.upper_bounds), 5000, alpha=100, seed=seed,
        )
        hits += optimize(config, spec).best_value < 1e-3
    assert hits >= 9


def test_benchmark_ordering():
    grid = RunGrid(
        optimizers=DEFAULT_OPTIMIZERS,
        objectives=OBJECTIVE_NAMES,
        dimension=10,
        repeats=10,
        max_evaluations=5000,
        base_seed=0,
    )
    result = run_grid(grid, workers=4)
    h_min = dict(result.summary())
    assert h_min["itso-short"] < h_min["de"] < h_min["random"]
    for name in OBJECTIVE_NAMES:
        itso = np.median(result.final_values("itso-short", name))
        blind = np.median(result.final_values("random", name))
        assert itso <= blind, name
