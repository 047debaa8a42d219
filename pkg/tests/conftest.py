"""
Shared fixtures for the ITSO test suite
"""
import os
import sys
import textwrap

import numpy as np
import pytest

# Add the repository root to the Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from itso.sampling import EmpiricalMarginal, build_cdf


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_marginal(support, weights, lower=None, upper=None):
    """Marginal with normalized weights and its cdf built"""
    support = np.asarray(support, dtype=float)
    weights = np.asarray(weights, dtype=float)
    marginal = EmpiricalMarginal(
        support=support,
        pdf_weights=weights / weights.sum(),
        lower_bound=support[0] if lower is None else lower,
        upper_bound=support[-1] if upper is None else upper,
    )
    return build_cdf(marginal)


@pytest.fixture
def evaluator_script(tmp_path):
    """Write a line-protocol evaluator script and return the command that runs it"""

    def write(body: str, name: str = "evaluator.py") -> str:
        path = tmp_path / name
        path.write_text(textwrap.dedent(body), encoding="utf-8")
        return f'"{sys.executable}" "{path}"'

    return write
