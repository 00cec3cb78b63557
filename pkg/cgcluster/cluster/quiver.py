"""Quivers, extended exchange matrices and the Cremmer-Gervais quiver family.

Edges live in a :class:`networkx.DiGraph` with a positive ``weight``
(multiplicity) and a ``kinds`` set of construction tags. A pair of vertices
carries at most one directed edge: adding an edge against an existing one
cancels multiplicities. Edges between two frozen vertices are never stored.
"""
import numpy as np
import networkx as nx

from ..algebra.exactla import as_matrix, rank
from ..utils.errors import DimensionError, DomainError, MutationError

VARIANTS = ('matn', 'sln', 'hat', 'opp')


def vertex_key(v):
    if isinstance(v, tuple):
        return (0, tuple((0, x) if isinstance(x, int) else (1, str(x)) for x in v))
    return (1, str(v))


def vertex_label(v):
    if isinstance(v, tuple):
        return ','.join(str(x) for x in v)
    return str(v)


class Quiver:
    def __init__(self, vertices=(), frozen=(), edges=(), name=''):
        self.name = name
        self.graph = nx.DiGraph()
        frozen = set(frozen)
        for v in vertices:
            self.add_vertex(v, frozen=v in frozen)
        for v in frozen:
            if v not in self.graph:
                self.add_vertex(v, frozen=True)
        for edge in edges:
            self.add_edge(*edge)

    # ------------------------------------------------------------------ nodes
    def add_vertex(self, v, frozen=False):
        if v in self.graph:
            self.graph.nodes[v]['frozen'] = bool(frozen)
        else:
            self.graph.add_node(v, frozen=bool(frozen))

    def remove_vertex(self, v):
        if v not in self.graph:
            raise DomainError(f'unknown vertex {v!r}')
        self.graph.remove_node(v)

    def is_frozen(self, v):
        return self.graph.nodes[v]['frozen']

    def freeze(self, v):
        if v not in self.graph:
            raise DomainError(f'unknown vertex {v!r}')
        self.graph.nodes[v]['frozen'] = True
        for u in [u for u in self.neighbors(v) if self.is_frozen(u)]:
            self._drop_pair(u, v)

    @property
    def vertices(self):
        return sorted(self.graph.nodes, key=vertex_key)

    @property
    def frozen(self):
        return frozenset(v for v, f in self.graph.nodes(data='frozen') if f)

    @property
    def mutable(self):
        return [v for v in self.vertices if not self.is_frozen(v)]

    def __contains__(self, v):
        return v in self.graph

    def __len__(self):
        return self.graph.number_of_nodes()

    # ------------------------------------------------------------------ edges
    def add_edge(self, u, v, weight=1, kinds=()):
        if u == v:
            raise DomainError(f'loop at {u!r}')
        if weight < 0:
            u, v, weight = v, u, -weight
        if weight == 0:
            return
        for x in (u, v):
            if x not in self.graph:
                self.add_vertex(x)
        if self.is_frozen(u) and self.is_frozen(v):
            return
        kinds = set(kinds)
        if self.graph.has_edge(v, u):
            w = self.graph.edges[v, u]['weight']
            if w > weight:
                self.graph.edges[v, u]['weight'] = w - weight
            elif w == weight:
                self.graph.remove_edge(v, u)
            else:
                self.graph.remove_edge(v, u)
                self.graph.add_edge(u, v, weight=weight - w, kinds=kinds)
        elif self.graph.has_edge(u, v):
            self.graph.edges[u, v]['weight'] += weight
            self.graph.edges[u, v]['kinds'] |= kinds
        else:
            self.graph.add_edge(u, v, weight=weight, kinds=kinds)

    def remove_edge(self, u, v):
        if self.graph.has_edge(u, v):
            self.graph.remove_edge(u, v)

    def _drop_pair(self, u, v):
        self.remove_edge(u, v)
        self.remove_edge(v, u)

    def b(self, u, v):
        """Signed multiplicity: #(u -> v) - #(v -> u)."""
        if self.graph.has_edge(u, v):
            return self.graph.edges[u, v]['weight']
        if self.graph.has_edge(v, u):
            return -self.graph.edges[v, u]['weight']
        return 0

    def in_edges(self, v):
        return [(u, w) for u, _, w in self.graph.in_edges(v, data='weight')]

    def out_edges(self, v):
        return [(u, w) for _, u, w in self.graph.out_edges(v, data='weight')]

    def neighbors(self, v):
        return set(self.graph.predecessors(v)) | set(self.graph.successors(v))

    def edges(self, data=False):
        out = []
        for u, v, d in self.graph.edges(data=True):
            out.append((u, v, d['weight'], frozenset(d['kinds'])) if data else (u, v, d['weight']))
        return sorted(out, key=lambda e: (vertex_key(e[0]), vertex_key(e[1])))

    def edges_of_kind(self, kind):
        return [(u, v) for u, v, d in self.graph.edges(data=True) if kind in d['kinds']]

    def edge_count(self):
        return sum(w for _, _, w in self.graph.edges(data='weight'))

    def is_isolated(self, v, ignore_frozen=True):
        for u in self.neighbors(v):
            if ignore_frozen and self.is_frozen(u) and self.is_frozen(v):
                continue
            return False
        return True

    # --------------------------------------------------------------- building
    def copy(self):
        Q = Quiver(name=self.name)
        Q.graph = self.graph.copy()
        for u, v in Q.graph.edges:
            Q.graph.edges[u, v]['kinds'] = set(Q.graph.edges[u, v]['kinds'])
        return Q

    def subquiver(self, vertices):
        Q = Quiver(name=self.name)
        Q.graph = self.graph.subgraph(vertices).copy()
        for u, v in Q.graph.edges:
            Q.graph.edges[u, v]['kinds'] = set(Q.graph.edges[u, v]['kinds'])
        return Q

    def opposite(self):
        Q = Quiver(self.vertices, self.frozen, name=f'{self.name}^opp' if self.name else '')
        for u, v, w, kinds in self.edges(data=True):
            Q.add_edge(v, u, w, kinds)
        return Q

    def relabeled(self, mapping):
        """Apply a vertex map; vertices missing from ``mapping`` keep their label."""
        image = {v: mapping.get(v, v) for v in self.graph.nodes}
        if len(set(image.values())) != len(image):
            raise DomainError('relabel map is not injective on the vertex set')
        Q = Quiver(name=self.name)
        for v in self.vertices:
            Q.add_vertex(image[v], frozen=self.is_frozen(v))
        for u, v, w, kinds in self.edges(data=True):
            Q.add_edge(image[u], image[v], w, kinds)
        return Q

    # --------------------------------------------------------------- mutation
    def mutate(self, k):
        """Quiver mutation at ``k``: close two-paths, reverse edges at k, cancel 2-cycles."""
        if k not in self.graph:
            raise MutationError(f'unknown vertex {k!r}')
        if self.is_frozen(k):
            raise MutationError(f'vertex {k!r} is frozen')
        Q = self.copy()
        ins = self.in_edges(k)
        outs = self.out_edges(k)
        for i, a in ins:
            for j, c in outs:
                Q.add_edge(i, j, a * c)
        for i, a in ins:
            Q.remove_edge(i, k)
        for j, c in outs:
            Q.remove_edge(k, j)
        for i, a in ins:
            Q.add_edge(k, i, a)
        for j, c in outs:
            Q.add_edge(j, k, c)
        return Q

    def exchange_matrix(self, order=None):
        """Extended exchange matrix with rows for mutable vertices, frozen columns last."""
        if order is None:
            order = self.mutable + sorted(self.frozen, key=vertex_key)
        mutable = [v for v in order if not self.is_frozen(v)]
        frozen = [v for v in order if self.is_frozen(v)]
        columns = mutable + frozen
        entries = np.array(
            [[self.b(u, v) for v in columns] for u in mutable], dtype=np.int64
        ).reshape(len(mutable), len(columns))
        return ExtExchangeMatrix(entries, mutable, frozen)

    @classmethod
    def from_matrix(cls, B, name=''):
        Q = cls(B.labels, B.frozen, name=name)
        for i, u in enumerate(B.mutable):
            for j, v in enumerate(B.labels):
                w = int(B.entries[i, j])
                if w > 0:
                    Q.add_edge(u, v, w)
                elif w < 0 and j >= B.n_mut:
                    Q.add_edge(v, u, -w)
        return Q

    # ---------------------------------------------------------- serialization
    def to_dict(self):
        return {
            'name': self.name,
            'vertices': [list(v) if isinstance(v, tuple) else v for v in self.vertices],
            'frozen': [list(v) if isinstance(v, tuple) else v for v in sorted(self.frozen, key=vertex_key)],
            'edges': [
                [list(u) if isinstance(u, tuple) else u, list(v) if isinstance(v, tuple) else v, w]
                for u, v, w in self.edges()
            ],
        }

    @classmethod
    def from_dict(cls, d):
        def label(x):
            return tuple(x) if isinstance(x, list) else x

        return cls(
            [label(v) for v in d['vertices']],
            [label(v) for v in d['frozen']],
            [(label(u), label(v), w) for u, v, w in d['edges']],
            name=d.get('name', ''),
        )

    def to_dot(self):
        lines = [f'digraph "{self.name or "quiver"}" {{']
        for v in self.vertices:
            shape = 'box' if self.is_frozen(v) else 'circle'
            lines.append(f'  "{vertex_label(v)}" [shape={shape}];')
        for u, v, w in self.edges():
            attr = f' [label="{w}"]' if w > 1 else ''
            lines.append(f'  "{vertex_label(u)}" -> "{vertex_label(v)}"{attr};')
        lines.append('}')
        return '\n'.join(lines) + '\n'

    def __repr__(self):
        return f'Quiver({self.name!r}, vertices={len(self)}, edges={self.edge_count()}, frozen={len(self.frozen)})'


class ExtExchangeMatrix:
    """Integer n_mut x (n_mut + n_frozen) matrix; principal part skew-symmetric."""

    def __init__(self, entries, mutable, frozen=()):
        entries = np.asarray(entries, dtype=np.int64)
        mutable = list(mutable)
        frozen = list(frozen)
        if entries.shape != (len(mutable), len(mutable) + len(frozen)):
            raise DimensionError(
                f'exchange matrix of shape {entries.shape} does not fit '
                f'{len(mutable)} mutable and {len(frozen)} frozen labels'
            )
        principal = entries[:, :len(mutable)]
        if not np.array_equal(principal, -principal.T):
            raise DomainError('principal part is not skew-symmetric')
        self.entries = entries
        self.mutable = mutable
        self.frozen = frozen

    @property
    def labels(self):
        return self.mutable + self.frozen

    @property
    def n_mut(self):
        return len(self.mutable)

    @property
    def n_total(self):
        return len(self.mutable) + len(self.frozen)

    def index(self, k):
        if isinstance(k, (int, np.integer)) and k not in self.mutable:
            if not 0 <= k < self.n_mut:
                raise DomainError(f'row index {k} outside [0, {self.n_mut})')
            return int(k)
        if k in self.frozen:
            raise MutationError(f'vertex {k!r} is frozen')
        if k not in self.mutable:
            raise DomainError(f'unknown vertex {k!r}')
        return self.mutable.index(k)

    def mutate(self, k):
        return mutate_matrix(self, k)

    def rank(self):
        return rank(as_matrix(self.entries.tolist())) if self.entries.size else 0

    def to_rational(self):
        return as_matrix(self.entries.tolist())

    def __eq__(self, other):
        return (
            isinstance(other, ExtExchangeMatrix)
            and self.labels == other.labels
            and self.n_mut == other.n_mut
            and np.array_equal(self.entries, other.entries)
        )

    def __repr__(self):
        return f'ExtExchangeMatrix({self.n_mut}x{self.n_total})'


def mutate_matrix(B, k):
    """Matrix mutation in direction k (row index or mutable label)."""
    k = B.index(k)
    b = B.entries
    out = b.copy()
    for i in range(B.n_mut):
        for j in range(B.n_total):
            if i == k or j == k:
                out[i, j] = -b[i, j]
            else:
                out[i, j] = b[i, j] + (abs(b[i, k]) * b[k, j] + b[i, k] * abs(b[k, j])) // 2
    return ExtExchangeMatrix(out, B.mutable, B.frozen)


def mutate_quiver(Q, k):
    return Q.mutate(k)


def labeled_isomorphic(Q1, Q2, relabel=None):
    """True iff ``relabel`` carries Q1 onto Q2: frozen sets and edge multisets agree.

    Edges between two frozen vertices are ignored on both sides.
    """
    v1 = set(Q1.graph.nodes)
    v2 = set(Q2.graph.nodes)
    relabel = {v: v for v in v1} if relabel is None else {v: relabel.get(v, v) for v in v1}
    image = set(relabel.values())
    if len(image) != len(v1) or image != v2:
        raise DomainError('relabel is not a bijection between the vertex sets')
    if {relabel[v] for v in Q1.frozen} != set(Q2.frozen):
        return False
    return _edge_multiset(Q1, relabel) == _edge_multiset(Q2, None)


def _edge_multiset(Q, relabel):
    out = {}
    frozen = Q.frozen
    for u, v, w in Q.edges():
        if u in frozen and v in frozen:
            continue
        if relabel is not None:
            u, v = relabel[u], relabel[v]
        out[(u, v)] = w
    return out


def edge_difference(Q1, Q2, relabel=None):
    """Edges of Q1 (mapped by relabel) missing from Q2 and vice versa, for diagnostics."""
    relabel = relabel or {}
    e1 = _edge_multiset(Q1, {v: relabel.get(v, v) for v in Q1.graph.nodes})
    e2 = _edge_multiset(Q2, None)
    missing = sorted(((u, v, w) for (u, v), w in e1.items() if e2.get((u, v)) != w), key=str)
    extra = sorted(((u, v, w) for (u, v), w in e2.items() if e1.get((u, v)) != w), key=str)
    return missing, extra


def cg_frozen(n):
    return {(1, 1), (2, 1), (1, n)}


def build_qcg(n, variant='matn'):
    """The quiver Q_CG(n) on the n x n grid, or one of its variants.

    ``sln`` drops (1,1), ``hat`` adds (1,1) -> (n,2) and (n,1) -> (1,1),
    ``opp`` reverses every edge.
    """
    if n < 2:
        raise DomainError(f'n must be >= 2, got {n}')
    if variant not in VARIANTS:
        raise DomainError(f'unknown quiver variant {variant!r}; expected one of {VARIANTS}')
    vertices = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    Q = Quiver(vertices, cg_frozen(n), name=f'Q_CG({n})')
    for i in range(1, n + 1):
        for j in range(1, n):
            if (i, j) != (1, n - 1):
                Q.add_edge((i, j + 1), (i, j), kinds={'horizontal'})
    for i in range(1, n):
        for j in range(1, n + 1):
            if (i, j) != (1, 1):
                Q.add_edge((i + 1, j), (i, j), kinds={'vertical'})
    for i in range(1, n):
        for j in range(1, n):
            Q.add_edge((i, j), (i + 1, j + 1), kinds={'diagonal'})
    for j in range(2, n):
        Q.add_edge((n, j), (1, j), kinds={'row', 'diagonal'})
        Q.add_edge((1, j), (n, j + 1), kinds={'row'})
    for i in range(1, n - 1):
        Q.add_edge((i, n), (i + 2, 1), kinds={'column', 'diagonal'})
        Q.add_edge((i + 2, 1), (i + 1, n), kinds={'column'})
    if variant == 'sln':
        Q.remove_vertex((1, 1))
        Q.name = f"Q'_CG({n})"
    elif variant == 'hat':
        Q.add_edge((1, 1), (n, 2), kinds={'extra'})
        Q.add_edge((n, 1), (1, 1), kinds={'extra'})
        Q.name = f'Q^_CG({n})'
    elif variant == 'opp':
        Q = Q.opposite()
    return Q
