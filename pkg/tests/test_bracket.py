from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgcluster.algebra.bracket import (
    BracketContext,
    GradPair,
    block_traces,
    brack_uho_formula,
    coordinate,
    coordinate_bracket_matrix,
    directional_derivative,
    double_bracket,
    gamma_minus,
    gamma_plus,
    grad_minor,
    sklyanin_bracket,
)
from cgcluster.algebra.cgmat import family_spec, phi_spec, psi_spec, theta_spec
from cgcluster.algebra.diagcalc import t_matrix, unit
from cgcluster.algebra.exactla import adjugate, as_matrix, diag, identity, matmul, pair, sample_points, trace, zeros
from cgcluster.utils.errors import DimensionError, SingularityError


def e(n, i, j):
    out = zeros(n, n)
    out[i - 1, j - 1] = Fraction(1)
    return out


def test_r_plus_kills_identity():
    for n in (2, 3, 4, 5):
        assert np.array_equal(BracketContext(n).r_plus(identity(n)), zeros(n, n))


def test_r_plus_on_cartan_n2():
    h = diag([1, -1])
    assert np.array_equal(BracketContext(2).r_plus(h), h * Fraction(1, 2))


def test_r_plus_on_root_vector_n3():
    assert np.array_equal(BracketContext(3).r_plus(e(3, 2, 3)), e(3, 2, 3) + e(3, 1, 2))


def test_r_plus_shape_check():
    with pytest.raises(DimensionError):
        BracketContext(3).r_plus(identity(2))


def test_gamma_shifts(random_matrix):
    A = random_matrix(4)
    assert gamma_plus(A)[0, 0] == A[1, 1]
    assert gamma_minus(A)[1, 1] == A[0, 0]
    assert gamma_plus(A)[3, 3] == 0


def test_gradient_of_an_entry(random_matrix):
    X = random_matrix(3)
    g = grad_minor(coordinate(3, 1, 1), X)
    assert np.array_equal(g.grad_X, e(3, 1, 1))
    assert np.array_equal(g.grad_Y, zeros(3, 3))


def test_gradient_of_det_is_the_adjugate(random_matrix):
    X = random_matrix(4)
    assert np.array_equal(grad_minor(theta_spec(4, 4), X).grad_X, adjugate(X))


@pytest.mark.parametrize('spec', [phi_spec(3, 1), phi_spec(3, 3), psi_spec(3, 2), theta_spec(3, 2)])
def test_gradient_matches_directional_derivative(random_matrix, spec):
    X = random_matrix(3)
    total = grad_minor(spec, X).total
    for i in range(1, 4):
        for j in range(1, 4):
            E = e(3, i, j)
            assert directional_derivative(spec, X, X, E, E) == total[j - 1, i - 1]


def test_gradient_on_the_double(random_matrix):
    X, Y = random_matrix(3), random_matrix(3)
    spec = phi_spec(3, 4)
    g = grad_minor(spec, X, Y)
    dX, dY = random_matrix(3), random_matrix(3)
    assert directional_derivative(spec, X, Y, dX, dY) == pair(g.grad_X, dX) + pair(g.grad_Y, dY)


def test_bracket_is_antisymmetric(random_matrix):
    X = random_matrix(3)
    ctx = BracketContext(3)
    f, g = phi_spec(3, 2), psi_spec(3, 1)
    assert sklyanin_bracket(f, f, X, ctx) == 0
    assert sklyanin_bracket(f, g, X, ctx) == -sklyanin_bracket(g, f, X, ctx)


def test_det_is_casimir(cfg):
    ctx = BracketContext(3)
    X = sample_points(cfg, 3, count=1)[0]
    for i in range(1, 4):
        for j in range(1, 4):
            assert sklyanin_bracket(theta_spec(3, 3), coordinate(3, i, j), X, ctx) == 0


def test_coordinate_matrix_is_skew(random_matrix):
    X = random_matrix(3)
    M = coordinate_bracket_matrix(X, BracketContext(3))
    assert np.array_equal(M, -M.T)


def test_log_phi_n_is_log_canonical_with_entries(cfg):
    ctx = BracketContext(3)
    reject = lambda S: any(v == 0 for v in S.flat) or phi_spec(3, 4).evaluate(S) == 0
    points = sample_points(cfg, 3, reject=reject)
    rows = []
    for X in points:
        g = grad_minor(phi_spec(3, 4), X, log=True)
        rows.append([
            sklyanin_bracket(g, grad_minor(coordinate(3, i, j), X, log=True), X, ctx)
            for i in range(1, 4) for j in range(1, 4)
        ])
    assert rows[0] == rows[1] == rows[2]


def test_double_bracket_is_antisymmetric(random_matrix):
    X, Y = random_matrix(3), random_matrix(3)
    ctx = BracketContext(3)
    f, g = phi_spec(3, 2), psi_spec(3, 2)
    assert double_bracket(f, f, X, Y, ctx) == 0
    assert double_bracket(f, g, X, Y, ctx) == -double_bracket(g, f, X, Y, ctx)


def test_block_formula_matches_double_bracket(rng, random_matrix):
    ctx = BracketContext(3)
    for _ in range(20):
        X, Y = random_matrix(3), random_matrix(3)
        f1 = phi_spec(3, int(rng.integers(1, 5)))
        f2 = psi_spec(3, int(rng.integers(1, 5)))
        assert brack_uho_formula(f1, f2, X, Y, ctx) == double_bracket(f1, f2, X, Y, ctx)


def test_block_trace_diagonals_n5(cfg):
    X = sample_points(cfg, 5, count=1, reject=lambda S: any(
        family_spec(5, fam, q).evaluate(S) == 0 for fam, q in (('phi', 1), ('phi', 7), ('psi', 3), ('psi', 8))
    ))[0]
    for q in (1, 7):
        traces = block_traces(phi_spec(5, q), X, log=True)
        assert traces.Phi0 == list(t_matrix(4, q))
        assert traces.Psi0 == list(t_matrix(6, q))
    for q in (3, 8):
        traces = block_traces(psi_spec(5, q), X, log=True)
        assert traces.Psi0 == list(unit(6, 1) + t_matrix(6, q - 1))


@pytest.mark.parametrize('n', [2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_jacobi_on_coordinate_triples(random_matrix, n):
    ctx = BracketContext(n)
    X = random_matrix(n)
    P = coordinate_bracket_matrix(X, ctx)
    # the coordinate brackets are quadratic, so central differences are exact
    D = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            E = e(n, i, j)
            D.append((coordinate_bracket_matrix(X + E, ctx) - coordinate_bracket_matrix(X - E, ctx)) * Fraction(1, 2))
    m = n * n

    def nested(a, b, c):
        return sum((P[a, d] * D[d][b, c] for d in range(m)), Fraction(0))

    for a in range(m):
        for b in range(m):
            for c in range(m):
                assert nested(a, b, c) + nested(b, c, a) + nested(c, a, b) == 0


def _times(g, c):
    return GradPair(g.grad_X * c, g.grad_Y * c)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_leibniz_on_products(seed, n):
    rng = np.random.default_rng(seed)
    X = as_matrix(rng.integers(-9, 10, size=(n, n)).tolist())
    ctx = BracketContext(n)
    f, g, h = coordinate(n, 1, n), theta_spec(n, n), coordinate(n, n, 1)
    fv, gv = f.evaluate(X), g.evaluate(X)
    gf, gg = grad_minor(f, X), grad_minor(g, X)
    product = _times(gf, gv) + _times(gg, fv)
    expected = fv * sklyanin_bracket(g, h, X, ctx) + gv * sklyanin_bracket(f, h, X, ctx)
    assert sklyanin_bracket(product, h, X, ctx) == expected


def _below_diagonal_sum(diagonal):
    """<gamma_-/(1-gamma_-) d, d> for a diagonal d."""
    return sum((v * sum(diagonal[:i], Fraction(0)) for i, v in enumerate(diagonal)), Fraction(0))


@pytest.mark.parametrize('n, q', [(3, 1), (3, 2), (3, 4), (5, 1), (5, 4), (5, 7), (5, 12)])
def test_self_bracket_diagonal_relation(random_matrix, n, q):
    spec = phi_spec(n, q)
    values = []
    while len(values) < 3:
        X, Y = random_matrix(n), random_matrix(n)
        try:
            t = block_traces(spec, X, Y, log=True)
        except SingularityError:
            continue
        rhs = _below_diagonal_sum(t.Psi0) - _below_diagonal_sum(t.Phi0)
        assert trace(matmul(t.cal_X, t.J_sum)) == rhs
        values.append(rhs)
    assert len(set(values)) == 1
