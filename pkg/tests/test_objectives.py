import numpy as np
import pytest

from itso.exceptions import ConfigError, UnknownObjectiveError
from itso.objectives import (
    FIGURE_NAMES,
    OBJECTIVE_NAMES,
    evaluate,
    get_objective,
    list_objectives,
    resolve_objective,
)


@pytest.mark.parametrize(
    "name, point, expected",
    [
        ("sphere", np.full(10, 1.3), 0.0),
        ("x_5", np.full(10, 5.0), -5.0),
        ("griewank", np.zeros(10), 0.0),
        ("rastrigin", np.full(10, -0.7), 0.0),
        ("quartic", np.full(10, 2.0), 0.0),
        ("alpine", np.zeros(10), 0.0),
        ("elliptic", np.full(10, -1.5), 0.0),
        ("x_j", np.arange(1, 11) + 2.1, 0.0),
        ("schwefel", np.full(10, 9.0), 0.0),
        ("ellipsoid", np.full(10, np.sqrt(2.0)), 0.0),
    ],
)
def test_values_at_known_points(name, point, expected):
    assert evaluate(name, point) == pytest.approx(expected, abs=1e-12)


def test_cigar_matches_direct_formula():
    x = np.array([0.4, -2.0, 3.5])
    assert evaluate("cigar", x) == pytest.approx(0.4 ** 2 + 2.0 + 3.5, abs=1e-12)


def test_cigtab_matches_direct_formula():
    x = np.array([1.5, -2.0, 0.25, -3.0])
    assert evaluate("cigtab", x) == pytest.approx(1.5 ** 2 + 2.0 + 0.25 + 9.0, abs=1e-12)


def test_cigtab_counts_single_coordinate_once():
    assert evaluate("cigtab", np.array([3.0])) == 9.0
    assert evaluate("cigtab", np.array([3.0, -2.0])) == 13.0


def test_elliptic_ignores_first_coordinate():
    x = np.full(5, -1.5)
    shifted = x.copy()
    shifted[0] = 12.0
    assert evaluate("elliptic", shifted) == evaluate("elliptic", x)


def test_rastrigin_squares_inside_cosine():
    x = np.array([0.3])
    s = (0.3 + 0.7) ** 2
    assert evaluate("rastrigin", x) == pytest.approx(10.0 + s - 10.0 * np.cos(2.0 * np.pi * s))


def test_list_objectives_order():
    specs = list_objectives()
    assert len(specs) == 13
    assert specs[0].name == "elliptic"
    assert specs[-1].name == "sin_x"
    assert tuple(s.name for s in specs) == OBJECTIVE_NAMES


@pytest.mark.parametrize("dimension", [1, 3, 10])
def test_known_minima_are_consistent(dimension):
    for spec in list_objectives(dimension):
        known = spec.known_minimum
        if known is None:
            continue
        point, value = known
        assert spec(point) == pytest.approx(value, abs=1e-9)
        assert np.all(spec.lower_bounds < point) and np.all(point < spec.upper_bounds)


def test_box_midpoints_are_finite():
    for spec in list_objectives():
        assert np.isfinite(spec((spec.lower_bounds + spec.upper_bounds) / 2))


def test_default_boxes():
    assert get_objective("sphere", 4).default_box == [(-15.0, 15.0)] * 4
    assert get_objective("x_j", 10).upper_bounds.tolist() == [25.0] * 10


def test_sphere_is_translated_ellipsoid(rng):
    for x in rng.uniform(-15, 15, size=(50, 10)):
        assert evaluate("sphere", x) == pytest.approx(evaluate("ellipsoid", x + (np.sqrt(2.0) - 1.3)), abs=1e-9)


def test_lower_bounds_on_random_samples(rng):
    for spec in list_objectives():
        samples = rng.uniform(spec.lower_bounds, spec.upper_bounds, size=(200, spec.dimension))
        values = spec(samples)
        if spec.name == "x_5":
            assert np.all(values >= -5.0)
        elif spec.name == "sin_x":
            assert np.all(values >= -spec.dimension)
        else:
            assert np.all(values >= 0.0)


def test_evaluation_is_deterministic(rng):
    x = rng.uniform(-15, 15, 10)
    for name in OBJECTIVE_NAMES:
        assert evaluate(name, x) == evaluate(name, x)


def test_unknown_name_lists_valid_names():
    with pytest.raises(UnknownObjectiveError) as info:
        get_objective("nosuch")
    message = str(info.value)
    assert all(name in message for name in OBJECTIVE_NAMES)
    assert isinstance(info.value, KeyError)


def test_dimension_mismatch():
    spec = get_objective("sphere", 3)
    with pytest.raises(ConfigError):
        spec(np.zeros(4))
    with pytest.raises(ConfigError):
        evaluate("sphere", np.zeros(4), dimension=3)


def test_figure_objectives_are_one_dimensional():
    assert FIGURE_NAMES == ("parabola", "wavy")
    parabola = resolve_objective("parabola", 1)
    assert parabola.default_box == [(0.0, 10.0)]
    assert parabola(np.array([5.0])) == 0.0
    wavy = resolve_objective("wavy", 1)
    assert wavy.default_box == [(-10.0, 10.0)]
    # global minimum of sin(x + 0.7) + (x + 0.7)^2 / 100 on the box
    grid = np.linspace(-10, 10, 200001).reshape(-1, 1)
    assert grid[np.argmin(wavy(grid)), 0] == pytest.approx(-2.24, abs=0.01)
    with pytest.raises(ConfigError):
        resolve_objective("parabola", 2)
