from fractions import Fraction

import numpy as np
import pytest

from cgcluster.algebra.cgmat import (
    MinorSpec,
    aux_minor,
    aux_spec,
    build_block,
    cluster_by_position,
    core_minor,
    dims,
    family_spec,
    initial_cluster,
    initial_values,
    layout,
    shape,
    w0_conjugate,
    zeta,
    zeta_vector,
)
from cgcluster.algebra.exactla import as_matrix, det, identity, sample_points
from cgcluster.utils.errors import DimensionError, DomainError


@pytest.mark.parametrize('n, expected', [(2, (1, 1, 1)), (3, (2, 4, 2)), (4, (2, 6, 6)), (5, (3, 12, 8))])
def test_dims(n, expected):
    assert dims(n) == expected


def test_dims_rejects_small_n():
    with pytest.raises(DomainError):
        dims(1)


def test_u_shape_and_placement():
    assert shape('U', 3) == (4, 12)
    assert shape('U', 5) == (12, 24)
    assert layout('U', 3)[3][7] == ('y', 2, 3)


def test_build_block_fills_from_both_matrices(random_matrix):
    X, Y = random_matrix(3), random_matrix(3)
    U = build_block('U', X, Y)
    assert U[3, 7] == Y[1, 2]
    assert U[3, 8] == X[2, 0]
    with pytest.raises(DimensionError):
        build_block('U', X, random_matrix(2))


def test_small_cluster_variables(random_matrix):
    X = random_matrix(3)
    assert family_spec(3, 'phi', 1).evaluate(X) == X[1, 2]
    assert family_spec(3, 'psi', 1).evaluate(X) == X[2, 0]
    assert family_spec(3, 'theta', 3).evaluate(X) == det(X)
    assert family_spec(3, 'theta', 1).evaluate(X) == X[2, 2]


def test_family_sizes_n5():
    labels = [label for label, _ in initial_cluster(5)]
    counts = {family: sum(1 for label in labels if label.family == family) for family in ('theta', 'phi', 'psi')}
    assert counts == {'theta': 5, 'phi': 12, 'psi': 8}


@pytest.mark.parametrize('n', [2, 3, 4, 5, 6])
def test_initial_cluster_covers_the_grid(n):
    positions = {label.position for label, _ in initial_cluster(n)}
    assert positions == {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}


def test_frozen_positions():
    by_pos = cluster_by_position(4)
    assert by_pos[(1, 1)][0].key == ('theta', 4)
    assert by_pos[(1, 4)][0].key == ('phi', 6)
    assert by_pos[(2, 1)][0].key == ('psi', 6)
    by_pos = cluster_by_position(3)
    assert by_pos[(2, 1)][0].key == ('phi', 4)
    assert by_pos[(1, 3)][0].key == ('psi', 2)


def test_initial_values_match_specs(cfg):
    X = sample_points(cfg, 4, count=1)[0]
    values = initial_values(4, X)
    for pos, (_, spec) in cluster_by_position(4).items():
        assert values[pos] == spec.evaluate(X)


def test_aux_minors_small_cases(random_matrix):
    X, Y = random_matrix(3), random_matrix(3)
    n = 3
    assert aux_minor('Lambda', 1, X, Y) == 0
    assert aux_minor('Lambda', 2, X, Y) == -X[n - 1, 0] * Y[n - 1, n - 1]
    assert aux_minor('UpsilonBar', 1, X, Y) == Y[n - 2, n - 1]
    with pytest.raises(DomainError):
        aux_spec('UpsilonHat', 1, 3)
    with pytest.raises(DomainError):
        aux_spec('Omega', 1, 3)


def test_minor_spec_validation():
    with pytest.raises(DomainError):
        MinorSpec('X', 3, [1, 4], [1, 2])
    with pytest.raises(DimensionError):
        MinorSpec('X', 3, [1, 2], [1])
    with pytest.raises(DomainError):
        MinorSpec('W', 3, [1], [1])


def test_core_mode_on_dense_matrix(random_matrix):
    X = random_matrix(3)
    spec = MinorSpec('X', 3, [1, 2, 3], [1, 2, 3], mode='core')
    assert spec.evaluate(X) == det(X)


def test_core_minor_on_built_host(random_matrix):
    X = random_matrix(3)
    spec = MinorSpec('X', 3, [1, 2], [2, 3])
    assert core_minor(X, spec) == X[0, 1] * X[1, 2] - X[0, 2] * X[1, 1]
    assert core_minor(X, spec) == spec.evaluate(X)


def test_minor_spec_dict_roundtrip():
    spec = family_spec(5, 'psi', 4, swap=True)
    assert MinorSpec.from_dict(spec.to_dict()) == spec


def test_zeta_n2():
    X = as_matrix([[3, 5], [7, 2]])
    assert zeta_vector(X) == [1, Fraction(-3, 5)]
    assert np.array_equal(zeta(X), as_matrix([[5]]))


@pytest.mark.parametrize('n', [3, 4, 5])
def test_zeta_clears_first_column(cfg, n):
    for X in sample_points(cfg, n, reject=lambda S: det(S) == 0):
        assert zeta_vector(X)[0] == 1
        assert zeta(X).shape == (n - 1, n - 1)


def test_w0_conjugation_is_an_involution(random_matrix):
    X = random_matrix(4)
    assert np.array_equal(w0_conjugate(w0_conjugate(X)), X)
    assert w0_conjugate(X)[0, 0] == X[3, 3]
    assert np.array_equal(w0_conjugate(identity(3)), identity(3))


def test_barv_rows_n5():
    grid = layout('barV', 5)
    assert shape('barV', 5) == (11, 12)
    assert list(grid[0]) == [('x', 1, c) for c in range(1, 6)] + [None] * 7
    assert list(grid[4]) == [None] + [('y', 1, c) for c in range(1, 6)] + [('x', 2, c) for c in range(1, 6)] + [None]
    assert list(grid[7]) == [None] * 7 + [('y', 1, c) for c in range(1, 6)]


@pytest.mark.parametrize('n, size', [(3, 4), (5, 11), (7, 22)])
def test_vprime_is_square(n, size):
    assert shape('Vprime', n) == (size, size)


def test_vprime_drops_a_column_of_barv_n5():
    barv, vprime = layout('barV', 5), layout('Vprime', 5)
    assert [row[:6] + row[7:] for row in barv] == [tuple(row) for row in vprime]
