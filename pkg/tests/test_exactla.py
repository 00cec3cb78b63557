from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cgcluster.algebra.exactla import (
    SampleConfig,
    adjugate,
    as_matrix,
    content_normalize,
    det,
    identity,
    inverse,
    matmul,
    rank,
    sample_matrix,
    sample_points,
    zeros,
)
from cgcluster.utils.errors import DimensionError, DomainError, SamplingError, SingularityError


def int_matrices(size):
    return st.lists(
        st.lists(st.integers(-20, 20), min_size=size, max_size=size),
        min_size=size, max_size=size,
    )


def test_det_closed_forms():
    assert det(identity(3)) == 1
    assert det(as_matrix([[1, 2], [3, 4]])) == -2
    assert det(zeros(0, 0)) == 1


def test_det_rational_entries():
    M = as_matrix([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]])
    assert det(M) == Fraction(1, 10) - Fraction(1, 12)


@pytest.mark.parametrize('size', [2, 3, 4, 5])
def test_det_matches_sympy(random_matrix, size):
    for _ in range(10):
        M = random_matrix(size, bound=1000)
        oracle = sympy.Matrix([[int(v) for v in row] for row in M]).det(method='berkowitz')
        assert det(M) == int(oracle)


def test_det_of_non_square_raises():
    with pytest.raises(DimensionError):
        det(zeros(2, 3))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5).flatmap(int_matrices))
def test_adjugate_identity(rows):
    M = as_matrix(rows)
    n = M.shape[0]
    assert np.array_equal(matmul(M, adjugate(M)), identity(n) * det(M))


def test_adjugate_closed_forms():
    assert np.array_equal(adjugate(identity(4)), identity(4))
    a, b, c, d = 3, -5, 7, 2
    assert np.array_equal(adjugate(as_matrix([[a, b], [c, d]])), as_matrix([[d, -b], [-c, a]]))
    singular = as_matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert np.array_equal(matmul(singular, adjugate(singular)), zeros(3, 3))


def test_rank(random_matrix):
    assert rank(zeros(3, 4)) == 0
    assert rank(identity(4)) == 4
    u = random_matrix(4, 1)
    v = random_matrix(1, 5)
    while all(x == 0 for x in u.flat) or all(x == 0 for x in v.flat):
        u, v = random_matrix(4, 1), random_matrix(1, 5)
    assert rank(matmul(u, v)) == 1


def test_inverse(random_matrix):
    M = random_matrix(4)
    while det(M) == 0:
        M = random_matrix(4)
    assert np.array_equal(matmul(M, inverse(M)), identity(4))
    with pytest.raises(SingularityError):
        inverse(as_matrix([[1, 2], [2, 4]]))


def test_content_normalize():
    M = as_matrix([[Fraction(2, 3), Fraction(-4, 3)], [0, Fraction(2, 9)]])
    assert np.array_equal(content_normalize(M), as_matrix([[3, -6], [0, 1]]))
    assert np.array_equal(content_normalize(zeros(2, 2)), zeros(2, 2))


def test_sample_matrix_is_deterministic(cfg):
    A = sample_matrix(cfg, 2, 2)
    B = sample_matrix(cfg, 2, 2)
    assert np.array_equal(A, B)
    assert all(abs(v) <= cfg.entry_bound and v.denominator == 1 for v in A.flat)
    assert not np.array_equal(A, sample_matrix(cfg.derived(1), 2, 2))


def test_sampled_points_are_small_integers():
    cfg = SampleConfig(rng_seed=3, entry_bound=2, num_points=4)
    values = {v for M in sample_points(cfg, 3) for v in M.flat}
    assert all(v.denominator == 1 and -2 <= v <= 2 for v in values)


def test_sample_matrix_respects_predicate(cfg):
    M = sample_matrix(cfg, 3, 3, reject=lambda S: det(S) == 0)
    assert det(M) != 0


def test_sample_matrix_gives_up(cfg):
    with pytest.raises(SamplingError):
        sample_matrix(cfg, 2, 2, reject=lambda S: True)


def test_sample_points_count(cfg):
    points = sample_points(cfg, 3)
    assert len(points) == cfg.num_points
    assert len(sample_points(cfg, 3, count=5)) == 5


def test_sample_config_validation():
    with pytest.raises(DomainError):
        SampleConfig(entry_bound=1)
    with pytest.raises(DomainError):
        SampleConfig(num_points=0)
    cfg = SampleConfig.from_config({'rng_seed': 3, 'entry_bound': 50}, num_points=None, rng_seed=9)
    assert (cfg.rng_seed, cfg.entry_bound, cfg.num_points) == (9, 50, 3)
