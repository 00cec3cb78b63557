"""The reduction sequence from the n x n structure to the (n-1) x (n-1) one.

The sequence is built out of diagonal-path shifts: along a path p_1 -> ... -> p_L
starting at a frozen vertex, the vertices p_L, ..., p_2 are mutated, p_2 is
frozen, p_1 is erased and every p_i moves to the position of p_{i-1}. Paths are
read off the intermediate quivers Q_t(n) and Q_ns(n), built independently here,
and every stage is checked against the next quiver of the family.
"""
from .quiver import build_qcg, edge_difference, labeled_isomorphic
from .seeds import attach_initial_seed, run_script, with_resampling
from ..algebra.cgmat import cluster_by_position, initial_values, phi_spec, zeta
from ..utils.errors import DomainError, SingularityError, UnsupportedError
from ..utils.logger import get_logger
from ..verify.report import VerificationReport

logger = get_logger(__name__)


# ------------------------------------------------------------------ steps
def step_mutate(v):
    return {'function': 'mutate', 'kwargs': {'vertex': list(v)}}


def step_freeze(v):
    return {'function': 'freeze', 'kwargs': {'vertex': list(v)}}


def step_erase(v):
    return {'function': 'erase', 'kwargs': {'vertex': list(v)}}


def step_relabel(mapping):
    return {'function': 'relabel', 'kwargs': {'mapping': [[list(a), list(b)] for a, b in mapping]}}


def step_prune():
    return {'function': 'prune', 'kwargs': {}}


def step_recognize(family='w0', park=False):
    return {'function': 'recognize', 'kwargs': {'family': family, 'park': park}}


class Stage:
    """A named slice of a sequence, optionally followed by a checkpoint on the seed."""

    def __init__(self, name, steps, checkpoint=None, asserted=True):
        self.name = name
        self.steps = list(steps)
        self.checkpoint = checkpoint
        self.asserted = asserted

    @property
    def mutations(self):
        return sum(1 for step in self.steps if step['function'] == 'mutate')

    def to_dict(self):
        return {'name': self.name, 'steps': self.steps}


class SequenceSpec:
    def __init__(self, which, n, stages=()):
        self.which = which
        self.n = n
        self.stages = list(stages)

    @property
    def script(self):
        return [step for stage in self.stages for step in stage.steps]

    def stage(self, name):
        for stage in self.stages:
            if stage.name == name:
                return stage
        raise DomainError(f'no stage named {name!r} in sequence {self.which}')

    def mutation_count(self):
        return sum(stage.mutations for stage in self.stages)

    def to_dict(self):
        return {'which': self.which, 'n': self.n, 'stages': [stage.to_dict() for stage in self.stages]}

    def __repr__(self):
        return f'SequenceSpec({self.which}, n={self.n}, stages={len(self.stages)}, mutations={self.mutation_count()})'


def run_sequence(seed, seq, targets=None, show_progress=False):
    """Execute every stage in order; returns the final seed and per-stage checkpoint records."""
    records = []
    for stage in seq.stages:
        seed = run_script(seed, stage.steps, targets=targets, show_progress=show_progress, desc=stage.name)
        record = {'stage': stage.name, 'mutations': stage.mutations}
        if stage.checkpoint is not None:
            ok, info = stage.checkpoint(seed)
            record.update({'ok': ok, 'asserted': stage.asserted})
            record.update(info)
            if not ok:
                logger.warning('%s: checkpoint after %s does not match', seq.which, stage.name)
        records.append(record)
    return seed, records


# ---------------------------------------------------------- quiver family
def build_qt(n, t):
    """Q_t(n): Q_CG(n) with the last row shortened to n - t vertices."""
    if not 0 <= t <= n:
        raise DomainError(f't must lie in [0, {n}], got {t}')
    Q = build_qcg(n)
    for j in range(n - t + 1, n + 1):
        Q.remove_vertex((n, j))
    if t < n:
        Q.remove_edge((n, n - t), (1, n - t))
    # row edges of Q_CG only reach columns 2..n-1
    for s in range(1, min(t, n - 2) + 1):
        Q.add_edge((n - 1, n - s), (1, n - s), kinds={'diagonal'})
        Q.add_edge((1, n - s), (n - 1, n - s + 1), kinds={'row'})
    Q.name = f'Q_{t}({n})'
    return Q


def build_qns(n, s):
    """Q_ns(n): Q_n(n) with the first column shortened from below by s vertices."""
    if not 0 <= s <= n - 3:
        raise DomainError(f's must lie in [0, {n - 3}], got {s}')
    Q = build_qt(n, n)
    if s >= 1:
        for i in range(n - s, n):
            Q.remove_vertex((i, 1))
        Q.remove_edge((n - s - 1, 1), (n - s, 2))
    for i in range(1, s + 1):
        Q.add_edge((n - i - 2, n), (n - i, 2), kinds={'diagonal'})
        Q.add_edge((n - i, 2), (n - i - 1, n), kinds={'column'})
    Q.name = f'Q_n{s}({n})'
    return Q


def diagonal_paths(Q):
    """Maximal paths of diagonal-kind edges, one from each frozen vertex, keyed by start."""
    paths = {}
    for start in sorted(Q.frozen):
        path = [start]
        seen = {start}
        while True:
            nxt = sorted(v for _, v, kinds in Q.graph.out_edges(path[-1], data='kinds')
                         if 'diagonal' in kinds and not Q.is_frozen(v))
            if not nxt:
                break
            if len(nxt) > 1:
                raise DomainError(f'{Q.name}: {len(nxt)} diagonal edges leave {path[-1]}')
            if nxt[0] in seen:
                raise DomainError(f'{Q.name}: diagonal path from {start} closes a cycle')
            seen.add(nxt[0])
            path.append(nxt[0])
        paths[start] = path
    return paths


def path_ending_at(Q, end):
    for path in diagonal_paths(Q).values():
        if path[-1] == end:
            return path
    raise DomainError(f'{Q.name}: no diagonal path ends at {end}')


def shift_steps(path):
    """Mutate back along the path, freeze the new head, erase the old one, shift."""
    steps = [step_mutate(v) for v in reversed(path[1:])]
    steps.append(step_freeze(path[1]))
    steps.append(step_erase(path[0]))
    steps.append(step_relabel([(path[i], path[i - 1]) for i in range(1, len(path))]))
    return steps


def endgame_steps(n):
    steps = [step_freeze((1, 2)), step_freeze((2, 2)), step_erase((1, 1)), step_erase((2, 1))]
    steps.append(step_relabel([((i, j), (i, j - 1)) for i in range(1, n) for j in range(2, n + 1)]))
    return steps


def integral_checkpoint():
    """Every live vertex carries an integer at every base point: the values are minors of V(X, X)."""
    def check(seed):
        bad = sorted(pos for pos, values in seed.position_values().items()
                     if any(value.denominator != 1 for value in values))
        return not bad, {'non_integral': bad[:10]}
    return check


def all_of(*checks):
    def check(seed):
        ok, info = True, {}
        for inner in checks:
            passed, more = inner(seed)
            ok = ok and passed
            info.update(more)
        return ok, info
    return check


def quiver_checkpoint(expected):
    def check(seed):
        view = seed.view_quiver()
        try:
            ok = labeled_isomorphic(view, expected)
        except DomainError as exc:
            return False, {'expected': expected.name, 'error': str(exc)}
        info = {'expected': expected.name}
        if not ok:
            missing, extra = edge_difference(view, expected)
            info.update({'missing': missing[:10], 'extra': extra[:10]})
        return ok, info
    return check


def gen_seq_S(n):
    """Horizontal shifts for t in [0, n-1], vertical shifts for s in [0, n-4], then the endgame."""
    if n < 3:
        raise DomainError(f'the reduction sequence needs n >= 3, got {n}')
    stages = []
    for t in range(n):
        path = path_ending_at(build_qt(n, t), (n, n - t))
        check = all_of(quiver_checkpoint(build_qt(n, t + 1)), integral_checkpoint())
        stages.append(Stage(f'S_h^{t}', shift_steps(path), check))
    for s in range(n - 3):
        path = path_ending_at(build_qns(n, s), (n - s - 1, 1))
        check = all_of(quiver_checkpoint(build_qns(n, s + 1)), integral_checkpoint())
        stages.append(Stage(f'S_v^{s}', shift_steps(path), check))
    stages.append(Stage('endgame', endgame_steps(n), quiver_checkpoint(build_qcg(n - 1, 'hat'))))
    return SequenceSpec('S', n, stages)


# ------------------------------------------------------------ verification
def zeta_admissible(n):
    def check(X):
        try:
            Z = zeta(X)
        except SingularityError:
            return False
        return all(v != 0 for v in initial_values(n - 1, Z).values())
    return check


def transform1_targets(n, X):
    """Position -> phi_{n-1}(X)^eps * f(zeta(X)) on the (n-1) x (n-1) grid."""
    phi = phi_spec(n, n - 1).evaluate(X)
    labels = cluster_by_position(n - 1)
    out = {}
    for pos, value in initial_values(n - 1, zeta(X)).items():
        out[pos] = value * phi if labels[pos][0].family == 'psi' else value
    return out


def verify_transform1(n, cfg, max_resamples=10, show_progress=False):
    """Run the reduction sequence on sampled points and compare with the (n-1)-structure at zeta(X)."""
    if n < 3:
        raise UnsupportedError(f'the reduction sequence needs n >= 3, got {n}')
    seq = gen_seq_S(n)

    def attempt(current):
        seed = attach_initial_seed(n, current, extra=[zeta_admissible(n)])
        return _check_transform1(n, seq, seed, current, show_progress)

    return with_resampling(attempt, cfg, max_resamples)


def _check_transform1(n, seq, seed, cfg, show_progress=False):
    report = VerificationReport('seq_S', n, cfg.rng_seed)
    final, records = run_sequence(seed, seq, show_progress=show_progress)
    report.details['stages'] = [{k: v for k, v in r.items() if k in ('stage', 'mutations', 'ok')} for r in records]
    report.details['mutations'] = seq.mutation_count()
    for record in records:
        if record.get('ok') is False and record['asserted']:
            report.fail('stage checkpoint mismatch', stage=record['stage'],
                        missing=record.get('missing'), extra=record.get('extra'),
                        non_integral=record.get('non_integral'))
    checked = 0
    for p, X in enumerate(final.base_points):
        targets = transform1_targets(n, X)
        for pos, expected in sorted(targets.items()):
            checked += 1
            if final.value(pos)[p] != expected:
                report.fail('value mismatch', point_index=p, vertex=pos)
                break
    report.details['values_checked'] = checked
    report.details['cluster_size'] = final.cluster_size()
    return report
