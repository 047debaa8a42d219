import math

import numpy as np
import pytest

from itso.exceptions import HarnessError
from itso.modules.history_metrics import aggregate_h, average_runs, h_minimum, normalize_history


def test_average_runs_examples():
    assert average_runs([[1, 1], [3, 3]]).tolist() == [2.0, 2.0]
    assert average_runs([[4.0, 2.5, 1.0]]).tolist() == [4.0, 2.5, 1.0]


def test_average_runs_matches_exact_summation(rng):
    traces = rng.normal(size=(10, 300)) * 1e3
    expected = [math.fsum(column) / 10 for column in traces.T]
    np.testing.assert_allclose(average_runs(traces), expected, rtol=0, atol=1e-12 * 1e3)


def test_ragged_input_is_rejected():
    with pytest.raises(HarnessError):
        average_runs([[1.0, 2.0], [1.0]])
    with pytest.raises(HarnessError):
        average_runs([])
    with pytest.raises(HarnessError):
        aggregate_h([[0.5], [0.5, 0.1]])


def test_normalize_examples():
    assert normalize_history([10, 5, 0]).tolist() == [1.0, 0.5, 0.0]
    assert normalize_history([4, 4, 4]).tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(HarnessError):
        normalize_history([])


@pytest.mark.parametrize("scale, offset", [(1.0, 0.0), (3.5, -2.0), (1e-3, 7.0), (250.0, 1e4)])
def test_normalize_is_affine_invariant(rng, scale, offset):
    v = np.sort(rng.uniform(-50, 50, 200))[::-1]
    np.testing.assert_allclose(normalize_history(scale * v + offset), normalize_history(v), atol=1e-12)


def test_normalize_with_shared_bounds():
    assert normalize_history([6.0, 4.0], bounds=(0.0, 8.0)).tolist() == [0.75, 0.5]
    assert normalize_history([9.0, -1.0], bounds=(0.0, 8.0)).tolist() == [1.0, 0.0]
    assert normalize_history([3.0, 3.0], bounds=(3.0, 3.0)).tolist() == [0.0, 0.0]


def test_aggregate_h_examples():
    assert aggregate_h([[1.0, 0.3]])[0] == 1.0
    assert aggregate_h([[0.0, 1.0], [0.0, 0.5]])[0] == 0.0


def test_aggregate_h_matches_direct_formula(rng):
    normalized = rng.uniform(0, 1, size=(13, 500))
    expected = [(math.fsum(column) / 13) ** 0.1 for column in normalized.T]
    np.testing.assert_allclose(aggregate_h(normalized), expected, rtol=0, atol=1e-12)


def test_h_of_monotone_traces_is_monotone(rng):
    traces = [np.minimum.accumulate(rng.uniform(0, 10, 100)) for _ in range(5)]
    normalized = [normalize_history(t) for t in traces]
    h = aggregate_h(normalized)
    assert np.all(np.diff(h) <= 1e-15)
    assert np.all((0 <= h) & (h <= 1))
    assert h_minimum(h) == h[-1]
