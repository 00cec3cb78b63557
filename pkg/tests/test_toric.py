import numpy as np
import pytest

from cgcluster.algebra.cgmat import cluster_by_position
from cgcluster.algebra.diagcalc import OmegaMatrix
from cgcluster.algebra.exactla import as_matrix, diag
from cgcluster.cluster.quiver import build_qcg
from cgcluster.verify.checks import numeric_omega
from cgcluster.verify.toric import (
    SCALINGS,
    check_scaling,
    check_toric,
    host_potentials,
    recover_exchange_matrix,
    scaled_point,
    toric_weights,
)
from cgcluster.utils.errors import DomainError


@pytest.mark.parametrize('n', [3, 4])
def test_weights(n):
    W, report = toric_weights(n)
    assert report.passed, report.to_json()
    assert W.rank() == 3
    B = build_qcg(n).exchange_matrix()
    assert not (B.entries @ W.entries).any()


def test_degree_column_is_the_minor_size():
    W, _ = toric_weights(3)
    for pos, (label, _) in cluster_by_position(3).items():
        assert W.row(pos)[0] == label.index


def test_potentials_split_the_scaling():
    potential = host_potentials('X', 3, SCALINGS['left'])
    for i in range(3):
        for j in range(3):
            assert potential[('r', i)] + potential[('c', j)] == i + 1


def test_scaled_point():
    X = as_matrix([[1, 1], [1, 1]])
    assert np.array_equal(scaled_point(X, 2, 3, 5), diag([3, 9]).dot(as_matrix([[2, 2], [2, 2]])).dot(diag([5, 25])))


def test_dynamic_scaling(cfg):
    W, report = toric_weights(3)
    check_scaling(3, W, cfg, report)
    assert report.passed, report.to_json()
    assert report.details['scalings_checked'] == 9 * cfg.num_points


@pytest.mark.parametrize('n', [3, 4])
def test_recovery_reproduces_qcg(cfg, n):
    omega = numeric_omega(n, cfg)
    W, _ = toric_weights(n)
    assert recover_exchange_matrix(omega, W) == build_qcg(n).exchange_matrix()


def test_recovery_is_scale_free(cfg):
    omega = numeric_omega(3, cfg)
    W, _ = toric_weights(3)
    doubled = OmegaMatrix(omega.n, omega.labels, omega.entries * 2)
    assert recover_exchange_matrix(doubled, W) == recover_exchange_matrix(omega, W)


def test_recovery_needs_matching_labels(cfg):
    omega = numeric_omega(3, cfg)
    W, _ = toric_weights(3)
    shuffled = OmegaMatrix(omega.n, list(reversed(omega.labels)), omega.entries)
    with pytest.raises(DomainError):
        recover_exchange_matrix(shuffled, W)


def test_toric_report(cfg):
    report = check_toric(3, cfg, numeric_omega(3, cfg))
    assert report.passed, report.to_json()
    assert report.details['rank_W'] == 3
    assert len(report.details['weights']['labels']) == 9
