from fractions import Fraction

import pytest

from cgcluster.algebra.exactla import SampleConfig
from cgcluster.cluster.quiver import build_qcg, labeled_isomorphic
from cgcluster.cluster.seeds import attach_initial_seed, script_from_json, script_to_json
from cgcluster.cluster.seq_s import (
    all_of,
    build_qns,
    build_qt,
    diagonal_paths,
    gen_seq_S,
    integral_checkpoint,
    path_ending_at,
    run_sequence,
    shift_steps,
    verify_transform1,
    zeta_admissible,
)
from cgcluster.utils.errors import DomainError, UnsupportedError


@pytest.mark.parametrize('n', [3, 4, 5])
def test_q0_is_qcg(n):
    assert labeled_isomorphic(build_qt(n, 0), build_qcg(n))


def test_quiver_family_shapes():
    assert len(build_qt(4, 2)) == 14
    assert len(build_qns(5, 2)) == 25 - 5 - 2
    with pytest.raises(DomainError):
        build_qt(4, 5)
    with pytest.raises(DomainError):
        build_qns(4, 2)


def test_diagonal_paths_start_at_frozen_vertices():
    Q = build_qcg(4)
    paths = diagonal_paths(Q)
    assert set(paths) == set(Q.frozen)
    path = path_ending_at(Q, (4, 4))
    assert Q.is_frozen(path[0])
    assert all(not Q.is_frozen(v) for v in path[1:])


def test_shift_steps_layout():
    steps = shift_steps([(1, 1), (2, 2), (3, 3)])
    assert [s['function'] for s in steps] == ['mutate', 'mutate', 'freeze', 'erase', 'relabel']
    assert steps[0]['kwargs']['vertex'] == [3, 3]


@pytest.mark.parametrize('n', [3, 4, 5])
def test_sequence_layout(n):
    seq = gen_seq_S(n)
    names = [stage.name for stage in seq.stages]
    assert names[:n] == [f'S_h^{t}' for t in range(n)]
    assert names[-1] == 'endgame'
    assert len(names) == n + max(0, n - 3) + 1
    assert script_from_json(script_to_json(seq.script)) == seq.script


def test_sequence_needs_n3():
    with pytest.raises(DomainError):
        gen_seq_S(2)
    with pytest.raises(UnsupportedError):
        verify_transform1(2, SampleConfig())


def test_intermediate_quivers_n4(cfg):
    seed = attach_initial_seed(4, cfg, extra=[zeta_admissible(4)])
    _, records = run_sequence(seed, gen_seq_S(4))
    assert [r['stage'] for r in records if r.get('ok') is False] == []


@pytest.mark.parametrize('n', [3, 4])
def test_reduction_sequence(cfg, n):
    report = verify_transform1(n, cfg)
    assert report.passed, report.to_json()
    assert report.details['cluster_size'] == (n - 1) ** 2


@pytest.mark.slow
def test_reduction_sequence_n5(cfg):
    report = verify_transform1(5, cfg)
    assert report.passed, report.to_json()


def _shift_quiver(Q, path):
    for v in reversed(path[1:]):
        Q = Q.mutate(v)
    Q.freeze(path[1])
    Q.remove_vertex(path[0])
    return Q.relabeled({path[i]: path[i - 1] for i in range(1, len(path))})


@pytest.mark.parametrize('n', [3, 4, 5])
def test_frozen_corner_gets_no_row_edges(n):
    for t in (n - 1, n):
        assert build_qt(n, t).b((1, 1), (n - 1, 2)) == build_qcg(n).b((1, 1), (n - 1, 2))


@pytest.mark.parametrize('n,t', [(n, t) for n in (3, 4, 5) for t in range(n)])
def test_horizontal_shift_reaches_next_quiver(n, t):
    Q = build_qt(n, t)
    shifted = _shift_quiver(Q, path_ending_at(Q, (n, n - t)))
    assert labeled_isomorphic(shifted, build_qt(n, t + 1))


@pytest.mark.parametrize('n,s', [(4, 0), (5, 0), (5, 1)])
def test_vertical_shift_reaches_next_quiver(n, s):
    Q = build_qns(n, s)
    shifted = _shift_quiver(Q, path_ending_at(Q, (n - s - 1, 1)))
    assert labeled_isomorphic(shifted, build_qns(n, s + 1))


def test_all_checkpoints_are_asserted():
    for n in (3, 4, 5):
        assert all(stage.asserted for stage in gen_seq_S(n).stages)


class _ValueSeed:
    def __init__(self, values):
        self._values = values

    def position_values(self):
        return dict(self._values)


def test_integral_checkpoint_flags_fractions():
    check = integral_checkpoint()
    assert check(_ValueSeed({(1, 1): (Fraction(4), 7), (2, 2): (Fraction(-3),)})) == (True, {'non_integral': []})
    ok, info = check(_ValueSeed({(1, 1): (Fraction(4),), (2, 1): (Fraction(1), Fraction(5, 2))}))
    assert not ok
    assert info['non_integral'] == [(2, 1)]


def test_all_of_merges_details():
    check = all_of(lambda seed: (True, {'a': 1}), lambda seed: (False, {'b': 2}))
    assert check(None) == (False, {'a': 1, 'b': 2})


@pytest.mark.parametrize('n', [3, 4])
def test_shift_stages_keep_values_integral(cfg, n):
    seed = attach_initial_seed(n, cfg, extra=[zeta_admissible(n)])
    _, records = run_sequence(seed, gen_seq_S(n))
    shifts = [r for r in records if r['stage'].startswith('S_')]
    assert shifts
    assert all(r['non_integral'] == [] and r['ok'] for r in shifts)
