import pytest

from cgcluster.algebra.diagcalc import (
    delta,
    diag_vector,
    omega_formula,
    omega_pair,
    ones,
    pairing,
    sigma,
    t_matrix,
    tr,
    tr_d,
    unit,
    verify_prop_identities,
)
from cgcluster.utils.errors import DomainError, UnsupportedError


def test_t_matrix():
    assert list(t_matrix(3, 5)) == [1, 2, 2]
    assert list(t_matrix(3, 0)) == [0, 0, 0]
    for m in (2, 3, 5):
        for q in range(0, 2 * m):
            assert list(t_matrix(m, q + 2 * m)) == list(t_matrix(m, q) + ones(m) * 2)


def test_delta_is_a_unit_vector():
    for m in (2, 4, 7):
        for q in range(1, m + 1):
            assert list(delta(m, q)) == list(unit(m, m + 1 - q))


def test_sigma():
    xi = diag_vector([1, 2, 3])
    assert list(sigma(xi)) == [0, 1, 3]
    assert list(sigma(xi, 'plus')) == [5, 3, 0]
    assert list(sigma(diag_vector([0, 0]))) == [0, 0]
    assert list(sigma(xi) + sigma(xi, 'plus')) == list(ones(3) * tr(xi) - xi)
    with pytest.raises(DomainError):
        sigma(xi, 'sideways')


def test_traces():
    xi = diag_vector([1, 2, 3])
    assert tr(xi) == 6
    assert tr_d(xi) == 1 + 4 + 9
    assert pairing(xi, ones(3)) == 6


def test_selected_identities():
    for m in range(2, 9):
        for q in range(1, 3 * m + 1):
            d = delta(m, q)
            assert pairing(sigma(d), d) == 0
            t = t_matrix(m, q)
            assert pairing(sigma(ones(m)), t) + pairing(sigma(t), ones(m)) == (m - 1) * q
            if q % m:
                assert tr_d(delta(m, q + 1) - delta(m, q)) == -1


def test_all_identities_hold_exhaustively():
    results = verify_prop_identities(m_max=8)
    assert set(results) == {'i', 'ii', 'iii', 'iv', 'v', 'vi', 'vii', 'viii', 'ix'}
    for name, entry in results.items():
        assert entry['checked'] > 0, name
        assert entry['violations'] == [], name


def test_verify_rejects_small_m():
    with pytest.raises(DomainError):
        verify_prop_identities(m_max=1)


def test_omega_pair_is_antisymmetric():
    for f1 in (('phi', 2), ('psi', 3), ('phi', 7)):
        for f2 in (('phi', 5), ('psi', 1), ('psi', 8)):
            assert omega_pair(5, f1, f2) == -omega_pair(5, f2, f1)


@pytest.mark.parametrize('n', [3, 5])
def test_omega_formula_is_skew(n):
    omega = omega_formula(n)
    assert len(omega.labels) == n * n
    assert omega.is_skew()


def test_omega_formula_even_n_is_unsupported():
    with pytest.raises(UnsupportedError):
        omega_formula(4)
    with pytest.raises(DomainError):
        omega_formula(2)
