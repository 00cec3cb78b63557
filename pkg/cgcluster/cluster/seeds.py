"""Seeds: a quiver with exact values of its cluster variables at a few base points.

Vertices carry persistent integer ids. Grid positions are a relabelable view on
top of them, so sequences that move vertices around do it through explicit
relabel steps. Freezing and erasing also act on the view only: the underlying
quiver keeps every vertex and every edge produced by mutation, which is what
the reversing sequence compares at the end.
"""
import hashlib
import json

from tqdm import tqdm

from .quiver import Quiver, build_qcg, vertex_key
from ..algebra.cgmat import aux_spec, dims, initial_cluster, initial_values
from ..algebra.exactla import ONE, sample_points
from ..utils.errors import AdmissibilityError, CGClusterError, DomainError, MutationError, SamplingError, ScriptError
from ..utils.json_encoder import dumps
from ..utils.logger import get_logger, progress_disabled

logger = get_logger(__name__)


class Evaluator:
    """Descriptor of how a vertex value was obtained: a minor, a closed form, or an exchange."""

    def __init__(self, kind, name='', spec=None, parents=()):
        self.kind = kind
        self.name = name
        self.spec = spec
        self.parents = tuple(parents)

    def to_dict(self):
        out = {'kind': self.kind, 'name': self.name}
        if self.spec is not None:
            out['spec'] = self.spec.to_dict()
        if self.parents:
            out['parents'] = list(self.parents)
        return out


class Seed:
    def __init__(
        self,
        quiver,
        positions,
        values,
        base_points,
        evaluators=None,
        view_frozen=(),
        erased=(),
        recognized=None,
        history=None,
    ):
        self.quiver = quiver
        self.positions = dict(positions)
        self.values = dict(values)
        self.base_points = list(base_points)
        self.evaluators = dict(evaluators or {})
        self.view_frozen = frozenset(view_frozen)
        self.erased = frozenset(erased)
        self.recognized = dict(recognized or {})
        self.history = list(history or [])

    def _replace(self, **changes):
        fields = {
            'quiver': self.quiver,
            'positions': self.positions,
            'values': self.values,
            'base_points': self.base_points,
            'evaluators': self.evaluators,
            'view_frozen': self.view_frozen,
            'erased': self.erased,
            'recognized': self.recognized,
            'history': self.history,
        }
        fields.update(changes)
        return Seed(**fields)

    # --------------------------------------------------------------- view
    @property
    def live(self):
        return [v for v in self.quiver.vertices if v not in self.erased]

    def is_frozen(self, v):
        return self.quiver.is_frozen(v) or v in self.view_frozen

    def ids_at(self, position):
        return [v for v in self.live if self.positions[v] == position]

    def resolve(self, vertex):
        """Live vertex id at a grid position (or the id itself when given an int)."""
        if isinstance(vertex, int):
            if vertex not in self.positions or vertex in self.erased:
                raise DomainError(f'no live vertex with id {vertex}')
            return vertex
        vertex = tuple(vertex)
        found = self.ids_at(vertex)
        if len(found) != 1:
            raise DomainError(f'position {vertex} holds {len(found)} live vertices')
        return found[0]

    def view_quiver(self):
        """Quiver on grid positions of the live vertices, with view freezing applied."""
        live = self.live
        labels = [self.positions[v] for v in live]
        if len(set(labels)) != len(labels):
            raise DomainError('two live vertices share a position; the view is not a quiver')
        Q = Quiver([self.positions[v] for v in live], [self.positions[v] for v in live if self.is_frozen(v)])
        live_set = set(live)
        for u, v, w in self.quiver.edges():
            if u in live_set and v in live_set:
                Q.add_edge(self.positions[u], self.positions[v], w)
        return Q

    def value(self, vertex):
        return self.values[self.resolve(vertex)]

    def position_values(self):
        return {self.positions[v]: self.values[v] for v in self.live}

    def cluster_size(self):
        return len(self.live)

    def exchange_monomials(self, k):
        """The two monomials of the exchange relation at k, per base point."""
        outs = self.quiver.out_edges(k)
        ins = self.quiver.in_edges(k)
        left, right = [], []
        for p in range(len(self.base_points)):
            a = ONE
            for j, w in outs:
                a *= self.values[j][p] ** w
            b = ONE
            for i, w in ins:
                b *= self.values[i][p] ** w
            left.append(a)
            right.append(b)
        return left, right

    def point_hashes(self):
        return [hashlib.sha256(dumps(P, indent=None).encode()).hexdigest() for P in self.base_points]

    def to_dict(self):
        return {
            'quiver': self.view_quiver().to_dict(),
            'evaluators': {
                ','.join(str(x) for x in self.positions[v]): self.evaluators[v].to_dict()
                for v in sorted(self.live, key=lambda v: vertex_key(self.positions[v]))
                if v in self.evaluators
            },
            'points': self.point_hashes(),
        }

    def __repr__(self):
        return f'Seed(live={len(self.live)}, points={len(self.base_points)}, steps={len(self.history)})'


# ------------------------------------------------------------ construction
def admissibility_specs(n):
    """Closed forms that must not vanish at a base point."""
    _, N, M = dims(n)
    specs = []
    for q in range(2, N + 3):
        specs.append(aux_spec('Lambda', q, n))
    for q in range(1, N + 2):
        specs.append(aux_spec('Upsilon', q, n))
        specs.append(aux_spec('UpsilonBar', q, n))
    for q in range(M, N + 1):
        specs.append(aux_spec('UpsilonHat', q, n))
    return specs


def is_admissible(n, X, extra=()):
    if any(v == 0 for v in initial_values(n, X).values()):
        return False
    if any(spec.evaluate(X) == 0 for spec in admissibility_specs(n)):
        return False
    return all(check(X) for check in extra)


def seed_from_points(n, points, variant='matn'):
    Q = build_qcg(n, variant)
    order = sorted(Q.vertices, key=vertex_key)
    ids = {pos: i for i, pos in enumerate(order)}
    quiver = Q.relabeled(ids)
    per_point = [initial_values(n, P) for P in points]
    specs = {label.position: (label, spec) for label, spec in initial_cluster(n)}
    values = {ids[pos]: tuple(vals[pos] for vals in per_point) for pos in order}
    evaluators = {
        ids[pos]: Evaluator('minor', name=str(specs[pos][0]), spec=specs[pos][1])
        for pos in order
    }
    return Seed(quiver, {i: pos for pos, i in ids.items()}, values, points, evaluators)


def attach_initial_seed(n, cfg, extra=(), variant='matn'):
    """Q_CG(n) with the initial cluster evaluated at admissible sampled points."""
    if n < 2:
        raise DomainError(f'n must be >= 2, got {n}')
    points = sample_points(cfg, n, reject=lambda X: not is_admissible(n, X, extra))
    logger.debug('sampled %d admissible base points for n=%d (seed %d)', len(points), n, cfg.rng_seed)
    return seed_from_points(n, points, variant=variant)


def with_resampling(run, cfg, max_resamples=10):
    """Call ``run(cfg)``; on an admissibility failure retry with the seed shifted by one."""
    last = None
    for attempt in range(max_resamples):
        current = cfg.derived(attempt)
        try:
            return run(current)
        except (AdmissibilityError, SamplingError) as exc:
            last = exc
            logger.warning('attempt %d with seed %d not admissible: %s', attempt, current.rng_seed, exc)
    raise SamplingError(f'no admissible run after {max_resamples} resamples: {last}')


# ------------------------------------------------------------- seed steps
def mutate_seed(s, k):
    """Exchange relation at k at every base point, and quiver mutation."""
    k = s.resolve(k)
    if s.is_frozen(k):
        raise MutationError(f'vertex at {s.positions[k]} is frozen')
    left, right = s.exchange_monomials(k)
    old = s.values[k]
    new = []
    for p, (a, b) in enumerate(zip(left, right)):
        if old[p] == 0:
            raise AdmissibilityError(
                f'value at {s.positions[k]} vanishes at base point {p}', vertex=s.positions[k], point_index=p
            )
        new.append((a + b) / old[p])
    values = dict(s.values)
    values[k] = tuple(new)
    evaluators = dict(s.evaluators)
    evaluators[k] = Evaluator('derived', name=f'mu{s.positions[k]}', parents=[k])
    return s._replace(
        quiver=s.quiver.mutate(k),
        values=values,
        evaluators=evaluators,
        history=s.history + [('mutate', s.positions[k])],
    )


def relabel_seed(s, mapping):
    """Move live vertices simultaneously: each vertex at a key position goes to its value."""
    mapping = {tuple(a): tuple(b) for a, b in _mapping_items(mapping)}
    positions = dict(s.positions)
    moved = set()
    for v in s.live:
        if s.positions[v] in mapping:
            positions[v] = mapping[s.positions[v]]
            moved.add(v)
    targets = {}
    for v in s.live:
        pos = positions[v]
        if pos in targets:
            raise DomainError(f'relabel puts two vertices at {pos}')
        targets[pos] = v
    return s._replace(positions=positions, history=s.history + [('relabel', len(moved))])


def _mapping_items(mapping):
    if isinstance(mapping, dict):
        return mapping.items()
    return [(a, b) for a, b in mapping]


def freeze_seed(s, vertex):
    v = s.resolve(vertex)
    return s._replace(view_frozen=s.view_frozen | {v}, history=s.history + [('freeze', s.positions[v])])


def _isolated_in_view(s, v):
    for u in s.quiver.neighbors(v):
        if u in s.erased:
            continue
        if s.is_frozen(u) and s.is_frozen(v):
            continue
        return False
    return True


def erase_seed(s, vertex):
    """Erase an isolated or frozen vertex; a frozen vertex takes its edges along."""
    v = s.resolve(vertex)
    quiver = s.quiver
    if not _isolated_in_view(s, v):
        if not s.is_frozen(v):
            raise DomainError(f'vertex at {s.positions[v]} is mutable and still connected')
        quiver = quiver.copy()
        for u in quiver.neighbors(v):
            quiver.remove_edge(u, v)
            quiver.remove_edge(v, u)
    return s._replace(quiver=quiver, erased=s.erased | {v}, history=s.history + [('erase', s.positions[v])])


def prune_seed(s):
    """Erase every view-frozen vertex that no longer touches a mutable vertex."""
    out = s
    for v in s.live:
        if v in s.view_frozen and _isolated_in_view(out, v):
            out = out._replace(erased=out.erased | {v})
    return out._replace(history=out.history + [('prune', len(out.erased) - len(s.erased))])


def recognize_seed(s, targets, park=False):
    """Freeze live vertices whose values equal one of ``targets`` (name -> values).

    With ``park`` every recognized vertex, frozen ones included, leaves the grid
    for the position ``('w0',) + name`` so that later relabels cannot collide
    with it.
    """
    lookup = {tuple(vals): name for name, vals in targets.items()}
    recognized = dict(s.recognized)
    frozen = set(s.view_frozen)
    positions = dict(s.positions)
    for v in s.live:
        name = recognized.get(v) or lookup.get(tuple(s.values[v]))
        if name is None:
            continue
        recognized[v] = name
        if not s.is_frozen(v):
            frozen.add(v)
        if park:
            positions[v] = ('w0',) + tuple(name)
    return s._replace(view_frozen=frozen, recognized=recognized, positions=positions,
                      history=s.history + [('recognize', len(recognized) - len(s.recognized))])


class ScriptRunner:
    """Applies a step list to a seed; steps use the same three spellings as job configs."""

    def __init__(self, targets=None, show_progress=False):
        self.targets = targets or {}
        self.show_progress = show_progress
        self._step_funcs = {
            'mutate': lambda s, vertex: mutate_seed(s, _vertex(vertex)),
            'relabel': lambda s, mapping: relabel_seed(s, _mapping(mapping)),
            'freeze': lambda s, vertex: freeze_seed(s, _vertex(vertex)),
            'erase': lambda s, vertex: erase_seed(s, _vertex(vertex)),
            'prune': lambda s: prune_seed(s),
            'recognize': lambda s, family='w0', park=False: recognize_seed(s, self.targets[family], park),
        }

    def parse(self, step):
        if isinstance(step, str):
            return step, {}
        if isinstance(step, dict):
            return step['function'], step.get('kwargs', {})
        name, kwargs = step
        return name, kwargs

    def run(self, seed, script, desc='script'):
        steps = list(script)
        iterator = enumerate(steps)
        if self.show_progress and not progress_disabled():
            iterator = tqdm(iterator, total=len(steps), desc=desc, leave=False)
        for index, step in iterator:
            name, kwargs = self.parse(step)
            if name not in self._step_funcs:
                raise ScriptError(f'unknown step {name!r}', index, step)
            try:
                seed = self._step_funcs[name](seed, **kwargs)
            except AdmissibilityError:
                raise
            except CGClusterError as exc:
                raise ScriptError(str(exc), index, step) from exc
        return seed


def _vertex(v):
    return v if isinstance(v, int) else tuple(v)


def _mapping(mapping):
    return [(tuple(a), tuple(b)) for a, b in _mapping_items(mapping)]


def run_script(s, script, targets=None, show_progress=False, desc='script'):
    return ScriptRunner(targets=targets, show_progress=show_progress).run(s, script, desc=desc)


def script_to_json(script, indent=2):
    out = []
    for step in script:
        name, kwargs = ScriptRunner().parse(step)
        out.append({'function': name, 'kwargs': kwargs})
    return dumps(out, indent=indent)


def script_from_json(text):
    return json.loads(text)
