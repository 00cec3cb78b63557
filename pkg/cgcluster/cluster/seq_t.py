"""The reversing sequence: from the initial seed to the w0-conjugated one.

The sequence runs in six stages. Grid positions follow the stage-by-stage
coordinates of the construction; every stage ends with an explicit relabel
that moves the live mutable vertices into the coordinates of the next one.

Frozen vertices are never moved by position. Whenever a vertex value equals
one of the target functions f(W0 X W0) it is recognized, frozen and parked
off the grid under the name of its target position. At the end every vertex
of the underlying quiver is labeled that way and the quiver is compared with
the opposite of Q_CG(n).
"""
from .quiver import build_qcg, edge_difference, labeled_isomorphic
from .seeds import attach_initial_seed, with_resampling
from .seq_s import (
    SequenceSpec,
    Stage,
    run_sequence,
    step_freeze,
    step_mutate,
    step_prune,
    step_recognize,
    step_relabel,
)
from ..algebra.cgmat import cluster_by_position, w0_values
from ..utils.errors import DomainError, ScriptError, UnsupportedError
from ..utils.logger import get_logger
from ..verify.report import VerificationReport

logger = get_logger(__name__)

VERIFIED_REGIME = 'odd n >= 5'


# ------------------------------------------------------------ coordinates
def pq_of(n, i, j):
    """Grid (i, j) -> first-stage coordinates; the diagonal goes to column n + 1."""
    if i < j:
        return i, j - i
    return i - 1, j - i + n + 1


def ij_of(n, p, q):
    if q <= n - p:
        return p, p + q
    i = p + 1
    return i, q + i - n - 1


# ----------------------------------------------------------------- stages
def _stage_one(n, asserted):
    stages = [Stage('T_I:relabel', [step_relabel(
        [((i, j), pq_of(n, i, j)) for i in range(1, n + 1) for j in range(1, n + 1)]
    )])]
    for l in range(1, n):
        steps = [step_mutate((p, q)) for p in range(n - 1, l, -1) for q in range(n + 1, 0, -1)]
        steps.append(step_mutate((l, n + 1)))
        check = _entries_checkpoint(_stage_one_entries(n, l))
        stages.append(Stage(f'T_I^{l}', steps, check, asserted=asserted))
    stages.append(Stage('T_I:shift', [step_relabel([((p, n + 1), (p + 1, n + 1)) for p in range(n)])]))
    return stages


def _stage_one_entries(n, l):
    """Matrix entries expected on the last mutated row once the l-th pass is done."""
    out = {(n - 1, l + 2): (n - l, 1)}
    if n - l - 1 >= 1:
        out[(n - 1, l + 1)] = (n - l - 1, n)
    return out


def _stage_two(n, asserted):
    stages = []
    for l in range(1, n - 1):
        steps = [step_recognize('w0', park=True)] if l == 1 else []
        steps += [step_mutate((p, q)) for q in range(1, n - l) for p in range(n - 1, 0, -1)]
        check = _target_checkpoint({(1, n - l - 1): ('theta', l + 1)})
        stages.append(Stage(f'T_II^{l}', steps, check, asserted=asserted))
    shift = [((p, q), (p, q % (n + 1) + 1)) for p in range(n + 1) for q in range(1, n + 2)]
    stages.append(Stage('T_II:shift', [step_relabel(shift)]))
    return stages


def _diagonal_pass(n, l, keep_head):
    """Mutate the anti-diagonal p + q = n - l + 1 from column 1 up, freeze the top and shift it."""
    cells = [(i, n - l + 1 - i) for i in range(n - l, 1, -1)]
    steps = [step_mutate(c) for c in cells]
    steps.append(step_freeze((2, n - l - 1)))
    mapping = [((i, n - l + 1 - i), (i - 1, n - l + 2 - i)) for i in range(2, n - l + 1)]
    if keep_head:
        mapping.append(((1, n - l), (n, n - l - 1)))
    else:
        steps.append(step_prune())
    steps.append(step_relabel(mapping))
    return steps


def _stage_three(n, asserted):
    stages = []
    for l in range(1, n - 1):
        steps = [step_recognize('w0', park=True)] if l == 1 else []
        steps += _diagonal_pass(n, l, keep_head=True)
        stages.append(Stage(f'T_III^{l}', steps, _recognized_checkpoint((1, n - l)), asserted=asserted))
    steps = [step_prune(), step_relabel([((p, n + 1), (p + 1, 1)) for p in range(n)])]
    stages.append(Stage('T_III:shift', steps))
    return stages


def _stage_four(n, asserted):
    stages = []
    for l in range(1, n - 2):
        steps = [step_recognize('w0', park=True)] if l == 1 else []
        steps += _diagonal_pass(n, l, keep_head=False)
        stages.append(Stage(f'T_IV^{l}', steps, _recognized_checkpoint((1, n - l)), asserted=asserted))
    stages.append(Stage('T_IV:shift', [step_prune(), step_relabel([((p, n), (p + 2, 1)) for p in range(1, n - 2)])]))
    return stages


def grassmannian_pass(n, m):
    """The m-th pass of the fifth stage: the first pass on a panel one column narrower per step."""
    size = n - m + 1
    steps = []
    for j in range(1, size - 1):
        steps += [step_mutate((j + 1, q)) for q in range(n - j, m, -1)]
        steps += [step_mutate((p, n - j)) for p in range(j + 2, size)]
    return steps


def _stage_five(n):
    stages = []
    for m in range(1, n - 1):
        steps = [step_recognize('w0', park=True)] if m == 1 else []
        stages.append(Stage(f'T_V^{m}', steps + grassmannian_pass(n, m)))
    stages.append(Stage('T_V:shift', [step_relabel([((2, q), (q + 3, 0)) for q in range(1, n - 2)])]))
    return stages


def _stage_six(n):
    stages = []
    for l in range(1, n - 3):
        steps = [step_recognize('w0', park=True)]
        steps += [step_mutate((p, q)) for q in range(2 - l, n - l + 1) for p in range(n - 1, l + 2, -1)]
        mapping = [((l + 2, q), (q + 2 * l + 2, -l)) for q in range(2 - l, n - 2 * l - 1)]
        steps.append(step_relabel(mapping))
        stages.append(Stage(f'T_VI^{l}', steps))
    stages.append(Stage('final', [step_recognize('w0', park=True)]))
    return stages


def gen_seq_T(n):
    """All six stages; the last one is followed by a recognition of every remaining vertex."""
    if n < 3:
        raise DomainError(f'the reversing sequence needs n >= 3, got {n}')
    asserted = n % 2 == 1 and n >= 5
    stages = _stage_one(n, asserted) + _stage_two(n, asserted) + _stage_three(n, asserted) + _stage_four(n, asserted)
    stages += _stage_five(n) + _stage_six(n)
    return SequenceSpec('T', n, stages)


def stage_mutation_counts(seq):
    return {stage.name: stage.mutations for stage in seq.stages if stage.mutations}


# ------------------------------------------------------------ checkpoints
def _entries_checkpoint(entries):
    def check(seed):
        bad = []
        for pos, (i, j) in entries.items():
            try:
                values = seed.value(pos)
            except DomainError:
                bad.append(pos)
                continue
            if any(values[p] != X[i - 1, j - 1] for p, X in enumerate(seed.base_points)):
                bad.append(pos)
        return not bad, {'mismatched': bad}
    return check


def _target_checkpoint(expected):
    """Position -> (family, index) of the w0 target that should sit there."""
    def check(seed):
        n = seed.base_points[0].shape[0]
        where = {(label.family, label.index): pos for pos, (label, _) in cluster_by_position(n).items()}
        targets = w0_targets(seed.base_points)
        bad = []
        for pos, key in expected.items():
            try:
                ok = seed.value(pos) == targets[where[key]]
            except DomainError:
                ok = False
            if not ok:
                bad.append(pos)
        return not bad, {'mismatched': bad}
    return check


def _recognized_checkpoint(pos):
    """The vertex just frozen at ``pos`` carries one of the w0 targets."""
    def check(seed):
        lookup = set(w0_targets(seed.base_points).values())
        try:
            ok = seed.value(pos) in lookup
        except DomainError:
            ok = False
        return ok, {'mismatched': [] if ok else [pos]}
    return check


# ------------------------------------------------------------ verification
def w0_targets(points):
    """Target position -> tuple of f(W0 X W0) over the base points."""
    per_point = [w0_values(X.shape[0], X) for X in points]
    return {pos: tuple(vals[pos] for vals in per_point) for pos in per_point[0]}


def w0_admissible(n):
    def check(X):
        values = list(w0_values(n, X).values())
        return all(v != 0 for v in values) and len(set(values)) == len(values)
    return check


def final_labeling(seed, targets):
    """Vertex id -> target position by value, over every vertex of the underlying quiver.

    Returns the labeling and the ids whose values match no target.
    """
    lookup = {vals: pos for pos, vals in targets.items()}
    labeling, unmatched = {}, []
    for v in seed.quiver.vertices:
        pos = lookup.get(tuple(seed.values[v]))
        if pos is None:
            unmatched.append(v)
        else:
            labeling[v] = pos
    return labeling, unmatched


def verify_transform2(n, cfg, max_resamples=10, show_progress=False):
    """Run the reversing sequence and compare with f(W0 X W0) on the opposite quiver."""
    if n < 3:
        raise UnsupportedError(f'the reversing sequence needs n >= 3, got {n}')
    seq = gen_seq_T(n)

    def attempt(current):
        seed = attach_initial_seed(n, current, extra=[w0_admissible(n)])
        return _check_transform2(n, seq, seed, current, show_progress)

    return with_resampling(attempt, cfg, max_resamples)


def _check_transform2(n, seq, seed, cfg, show_progress=False):
    report = VerificationReport('seq_T', n, cfg.rng_seed)
    report.details['mutations'] = seq.mutation_count()
    targets = w0_targets(seed.base_points)
    try:
        final, records = run_sequence(seed, seq, targets={'w0': targets}, show_progress=show_progress)
    except ScriptError as exc:
        report.fail('script step failed', step_index=exc.step_index, step=exc.step, error=str(exc))
        return _mark_regime(report, n)

    report.details['stages'] = [{k: v for k, v in r.items() if k in ('stage', 'mutations', 'ok')} for r in records]
    report.details['checkpoint_mismatches'] = [r['stage'] for r in records if r.get('ok') is False]
    for record in records:
        if record.get('ok') is False and record['asserted']:
            report.fail('stage checkpoint mismatch', stage=record['stage'], mismatched=record.get('mismatched'))
    labeling, unmatched = final_labeling(final, targets)
    report.details['recognized'] = len(labeling)
    if unmatched:
        report.fail('values outside the w0 family', vertices=[final.positions[v] for v in unmatched])
        return _mark_regime(report, n)
    if len(set(labeling.values())) != len(labeling):
        report.fail('two vertices carry the same w0 value')
        return _mark_regime(report, n)

    relabeled = final.quiver.relabeled(labeling)
    expected = build_qcg(n, 'opp')
    report.details['orientation'] = _orientation(relabeled, n)
    if not labeled_isomorphic(relabeled, expected):
        missing, extra = edge_difference(relabeled, expected)
        report.fail('final quiver is not the opposite of Q_CG', missing=missing[:10], extra=extra[:10])
    return _mark_regime(report, n)


def _orientation(Q, n):
    """Sign of the edge between the vertices carrying psi_1 and psi_2, relative to Q_CG(n)."""
    where = {(label.family, label.index): pos for pos, (label, _) in cluster_by_position(n).items()}
    u, v = where[('psi', 1)], where[('psi', 2)]
    ours, reference = Q.b(u, v), build_qcg(n).b(u, v)
    if reference == 0:
        return 0
    return 1 if ours * reference > 0 else -1


def _mark_regime(report, n):
    if not report.passed and (n % 2 == 0 or n < 5):
        logger.warning('reversing sequence at n=%d fails outside the verified regime', n)
        report.unsupported(f'unverified regime: construction is established for {VERIFIED_REGIME}')
    return report
