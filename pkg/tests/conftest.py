import numpy as np
import pytest

from cgcluster.algebra.exactla import SampleConfig, as_matrix


@pytest.fixture
def cfg():
    return SampleConfig(rng_seed=42, entry_bound=1000, num_points=3)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def random_matrix(rng):
    """Small-entry integer matrices from a fixed stream."""
    def draw(rows, cols=None, bound=9):
        cols = rows if cols is None else cols
        return as_matrix(rng.integers(-bound, bound + 1, size=(rows, cols)).tolist())
    return draw
