import pytest

from cgcluster.algebra.cgmat import w0_values
from cgcluster.algebra.exactla import SampleConfig, sample_points
from cgcluster.cluster.seeds import attach_initial_seed
from cgcluster.cluster.seq_t import (
    final_labeling,
    gen_seq_T,
    grassmannian_pass,
    ij_of,
    pq_of,
    stage_mutation_counts,
    verify_transform2,
    w0_admissible,
    w0_targets,
)
from cgcluster.utils.errors import DomainError, UnsupportedError


@pytest.mark.parametrize('n', [3, 4, 5, 6])
def test_coordinate_roundtrip(n):
    cells = [(p, q) for p in range(1, n) for q in range(1, n + 2)] + [(0, n + 1)]
    assert sorted(ij_of(n, p, q) for p, q in cells) == [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for p, q in cells:
        assert pq_of(n, *ij_of(n, p, q)) == (p, q)


def test_stage_sizes_n5():
    counts = stage_mutation_counts(gen_seq_T(5))
    assert counts['T_I^1'] == 19
    assert counts['T_II^1'] == 12
    assert gen_seq_T(5).mutation_count() == 93


@pytest.mark.parametrize('n', [5, 7])
def test_first_stage_size(n):
    counts = stage_mutation_counts(gen_seq_T(n))
    assert counts['T_I^1'] == (n - 2) * (n + 1) + 1
    assert counts['T_II^1'] == (n - 1) * (n - 2)


def test_grassmannian_pass_shrinks():
    sizes = [len(grassmannian_pass(5, m)) for m in (1, 2, 3)]
    assert sizes == [9, 4, 1]


def test_sequence_needs_n3():
    with pytest.raises(DomainError):
        gen_seq_T(2)
    with pytest.raises(UnsupportedError):
        verify_transform2(2, SampleConfig())


def test_targets_are_w0_conjugates(cfg):
    points = sample_points(cfg, 4, reject=lambda X: not w0_admissible(4)(X))
    targets = w0_targets(points)
    assert len(targets) == 16
    X = points[0]
    assert targets[(4, 4)][0] == X[0, 0]
    assert targets[(3, 3)][0] == X[0, 0] * X[1, 1] - X[0, 1] * X[1, 0]
    assert targets[(1, 1)] == tuple(w0_values(4, P)[(1, 1)] for P in points)


def test_final_labeling_of_the_w0_seed(cfg):
    seed = attach_initial_seed(3, cfg, extra=[w0_admissible(3)])
    labeling, unmatched = final_labeling(seed, w0_targets(seed.base_points))
    assert len(labeling) + len(unmatched) == 9
    assert labeling[seed.resolve((1, 1))] == (1, 1)


@pytest.mark.parametrize('n', [3, 4])
def test_small_n_is_reported(cfg, n):
    report = verify_transform2(n, cfg)
    assert report.status in ('pass', 'unsupported')
    assert report.details['mutations'] == gen_seq_T(n).mutation_count()


@pytest.mark.slow
def test_reversing_sequence_n5():
    report = verify_transform2(5, SampleConfig(rng_seed=7))
    assert report.passed, report.to_json()
    assert report.details['recognized'] == 25


@pytest.mark.parametrize('n,expected', [(3, False), (4, False), (5, True), (6, False), (7, True)])
def test_stage_checkpoints_asserted_for_odd_n(n, expected):
    checked = [stage for stage in gen_seq_T(n).stages if stage.checkpoint is not None]
    assert checked
    assert all(stage.asserted is expected for stage in checked)


@pytest.mark.slow
def test_reversing_sequence_n5_checkpoints_hold():
    report = verify_transform2(5, SampleConfig(rng_seed=42))
    assert report.passed, report.to_json()
    assert report.details['checkpoint_mismatches'] == []
