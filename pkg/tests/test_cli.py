import json

import pytest

from cgcl_main import main, parse_args


def run(capsys, *argv):
    code = main(['--quiet', *argv])
    return code, capsys.readouterr().out


def test_parse_args_defaults():
    args = parse_args(['quiver'])
    assert (args.n, args.variant, args.format, args.seed) == (None, 'matn', 'json', None)


@pytest.mark.parametrize('argv', [
    ['quiver', '--n', '3', '4'],
    ['compat', '--format', 'dot'],
    ['teleport'],
    ['seq', '--which', 'U'],
    ['report', '--n', '5..3'],
    ['report', '--n', 'x'],
    ['report', '--n', '3..'],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        parse_args(argv)
    assert info.value.code == 2


def test_n_ranges_expand():
    assert parse_args(['report', '--n', '3..5']).n == [3, 4, 5]
    assert parse_args(['report', '--n', '3', '6..7']).n == [3, 6, 7]
    assert parse_args(['quiver', '--n', '4..4']).n == [4]


def test_range_counts_as_several_n():
    with pytest.raises(SystemExit) as info:
        parse_args(['compat', '--n', '3..4'])
    assert info.value.code == 2


def test_quiver_dot(capsys):
    code, out = run(capsys, 'quiver', '--n', '5', '--variant', 'matn', '--format', 'dot')
    assert code == 0
    assert out.startswith('digraph')
    assert sum(1 for line in out.splitlines() if 'shape=' in line) == 25


def test_quiver_json(capsys):
    code, out = run(capsys, 'quiver', '--n', '3', '--variant', 'sln')
    assert code == 0
    assert len(json.loads(out)['vertices']) == 8


def test_bad_n_is_a_usage_error(capsys):
    code, _ = run(capsys, 'quiver', '--n', '1')
    assert code == 2


def test_compat(capsys):
    code, out = run(capsys, 'compat', '--n', '4', '--seed', '42')
    assert code == 0
    data = json.loads(out)
    assert data['status'] == 'pass'
    assert data['seed'] == 42


def test_omega(capsys):
    code, out = run(capsys, 'omega', '--n', '3', '--seed', '1')
    assert code == 0
    data = json.loads(out)
    assert data['skew'] is True
    assert len(data['labels']) == 9


def test_seq_script(capsys, tmp_path):
    out_file = tmp_path / 'seq.json'
    code, out = run(capsys, 'seq', '--which', 'S', '--n', '3', '--out', str(out_file))
    assert code == 0
    assert out == ''
    steps = json.loads(out_file.read_text())
    assert steps[0]['function'] == 'mutate'


def test_rank_unsupported_exit_code(capsys):
    code, out = run(capsys, 'regularity', '--n', '2')
    assert code == 2
    assert {r['status'] for r in json.loads(out)} == {'unsupported'}


@pytest.mark.slow
def test_reversing_sequence_cli(capsys):
    code, out = run(capsys, 'seq', '--which', 'T', '--n', '5', '--verify', '--seed', '7')
    assert code == 0
    assert json.loads(out)['status'] == 'pass'


@pytest.mark.slow
def test_report_is_deterministic(capsys, tmp_path):
    first = run(capsys, 'report', '--n', '3..5', '--seed', '42')
    second = run(capsys, 'report', '--n', '3..5', '--seed', '42')
    assert first == second
    assert first[0] == 0
    code, _ = run(capsys, 'report', '--n', '3', '--seed', '42', '--out', str(tmp_path / 'report.json'))
    assert (tmp_path / 'report.csv').exists()


@pytest.mark.slow
def test_diagonal_calculus_reported_once(capsys):
    code, out = run(capsys, 'report', '--n', '3..4', '--seed', '42')
    checks = [r['check'] for r in json.loads(out)]
    assert checks.count('diagcalc') == 1
    assert checks.count('layouts') == 2
