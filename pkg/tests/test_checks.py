from fractions import Fraction

import pytest

from cgcluster.algebra.diagcalc import omega_formula
from cgcluster.algebra.exactla import SampleConfig
from cgcluster.cluster.quiver import build_qcg
from cgcluster.verify.checks import (
    casimir_and_rank,
    check_antipoisson,
    check_block_traces,
    check_compat,
    check_double_logcanon,
    check_semi_invariance,
    cluster_points,
    compat_product,
    d_minus_character,
    dump_omega,
    expected_rank,
    numeric_omega,
    omega_numeric,
)
from cgcluster.utils.json_encoder import dumps


@pytest.mark.parametrize('n', [3, 4])
def test_compatibility(cfg, n):
    report = check_compat(n, cfg)
    assert report.passed, report.to_json()
    assert report.details['lambda_matn'] == 1
    assert report.details['lambda_sln'] == 1
    assert report.details['rank_B'] == n * n - 3


@pytest.mark.slow
def test_compatibility_n5(cfg):
    report = check_compat(5, cfg)
    assert report.passed, report.to_json()
    assert report.details['formula_mismatches'] == 0


def test_compat_needs_n3():
    assert check_compat(2, SampleConfig()).status == 'unsupported'


def test_numeric_omega_is_constant_and_skew(cfg):
    omega, varying = omega_numeric(3, cluster_points(3, cfg))
    assert varying == []
    assert omega.is_skew()
    assert omega.labels == build_qcg(3).exchange_matrix().labels


def test_numeric_omega_matches_closed_form(cfg):
    omega = numeric_omega(3, cfg)
    closed = omega_formula(3)
    where = {label.position: i for i, label in enumerate(closed.labels)}
    for a, u in enumerate(omega.labels):
        for b, v in enumerate(omega.labels):
            assert omega.entries[a, b] == closed.entries[where[u], where[v]]


def test_compat_product_shape(cfg):
    B = build_qcg(3).exchange_matrix()
    P = compat_product(B, numeric_omega(3, cfg))
    assert P.shape == (B.n_mut, B.n_total)


def test_dump_omega_is_json_ready(cfg):
    text = dumps(dump_omega(numeric_omega(3, cfg)))
    assert '"skew": true' in text


def test_expected_rank():
    assert [expected_rank(n) for n in (2, 3, 4, 5)] == [2, 8, 14, 24]


@pytest.mark.parametrize('n', [2, 3, 4])
def test_casimirs_and_rank(cfg, n):
    report = casimir_and_rank(n, cfg)
    assert report.passed, report.to_json()
    assert report.details['rank'] == expected_rank(n)


@pytest.mark.slow
def test_rank_n5(cfg):
    report = casimir_and_rank(5, cfg)
    assert report.passed, report.to_json()


@pytest.mark.parametrize('n', [2, 3])
def test_antipoisson(cfg, n):
    report = check_antipoisson(n, cfg)
    assert report.passed, report.to_json()
    assert report.details['pairs'] == n ** 4


def test_double_log_canonical(cfg):
    report = check_double_logcanon(3, cfg)
    assert report.passed, report.to_json()
    assert report.details['pairs'] >= 3


def test_semi_invariance(cfg):
    report = check_semi_invariance(3, cfg)
    assert report.passed, report.to_json()
    assert set(report.details['characters']) == {'phi', 'psi'}


def test_d_minus_character_shapes():
    scalars = (Fraction(2), Fraction(3), Fraction(5), Fraction(7))
    assert d_minus_character(3, 'phi', scalars) == 25 * 63
    assert d_minus_character(3, 'psi', scalars) == 5 * 9
    assert d_minus_character(4, 'phi', scalars) == 25 * 63 * 3


def test_block_traces_odd_n(cfg):
    report = check_block_traces(3, cfg)
    assert report.passed
    assert isinstance(report.details['psi_phi0_mismatches'], list)


def test_block_traces_even_n_unsupported(cfg):
    assert check_block_traces(4, cfg).status == 'unsupported'
