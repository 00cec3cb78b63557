"""The rank-three toric action and recovery of the exchange matrix from Omega and the weights.

Weights come from the structural nonzeros of each host matrix: under
``X -> t X``, ``X -> t^D X`` and ``X -> X t^D`` every entry of U(X, X) picks up
a power of ``t`` that splits as a row potential plus a column potential, and a
minor on rows R and columns C then scales by the sum of the potentials of R
and C.
"""
from fractions import Fraction

import networkx as nx
import numpy as np

from ..algebra.cgmat import cluster_by_position, layout
from ..algebra.exactla import as_matrix, content_normalize, diag, inverse, matmul, rank, sample_points, sample_rational
from ..cluster.quiver import ExtExchangeMatrix, build_qcg
from ..utils.errors import DomainError, SingularityError
from ..utils.logger import get_logger
from .report import VerificationReport

logger = get_logger(__name__)

# exponent of t on x_ij under each of the three actions
SCALINGS = {
    'degree': lambda i, j: 1,
    'left': lambda i, j: i,
    'right': lambda i, j: j,
}


class WeightMatrix:
    """Integer weights of the cluster variables, one row per label, columns in SCALINGS order."""

    def __init__(self, n, labels, entries):
        self.n = n
        self.labels = list(labels)
        self.entries = np.asarray(entries, dtype=np.int64).reshape(len(self.labels), len(SCALINGS))

    def row(self, label):
        return self.entries[self.labels.index(label)]

    def rank(self):
        return rank(as_matrix(self.entries.tolist()))

    def to_rational(self):
        return as_matrix(self.entries.tolist())

    def to_dict(self):
        return {
            'n': self.n,
            'columns': list(SCALINGS),
            'labels': [list(v) for v in self.labels],
            'entries': self.entries.tolist(),
        }


def host_potentials(kind, n, weight):
    """Row and column potentials with weight(tag) = row[r] + col[c] on every structural nonzero."""
    grid = layout(kind, n)
    G = nx.Graph()
    for r, row in enumerate(grid):
        for c, tag in enumerate(row):
            if tag is not None:
                G.add_edge(('r', r), ('c', c), w=weight(tag[1], tag[2]))
    potential = {}
    for component in nx.connected_components(G):
        root = min(component)
        potential[root] = 0
        for u, v in nx.bfs_edges(G, root):
            w = G.edges[u, v]['w']
            potential[v] = w - potential[u]
    for u, v, w in G.edges(data='w'):
        if potential[u] + potential[v] != w:
            raise DomainError(f'{kind} host for n={n}: scaling does not split into row and column potentials')
    return potential


def minor_weight(spec, potentials):
    return sum(potentials[('r', r - 1)] for r in spec.rows) + sum(potentials[('c', c - 1)] for c in spec.cols)


def toric_weights(n):
    """Weights of the initial cluster in exchange-matrix column order, with B~ W = 0 and rank checks."""
    report = VerificationReport('toric', n)
    B = build_qcg(n).exchange_matrix()
    specs = cluster_by_position(n)
    cache = {}
    rows = []
    for pos in B.labels:
        spec = specs[pos][1]
        row = []
        for name, weight in SCALINGS.items():
            key = (spec.kind, name)
            if key not in cache:
                cache[key] = host_potentials(spec.kind, n, weight)
            row.append(minor_weight(spec, cache[key]))
        rows.append(row)
    W = WeightMatrix(n, B.labels, rows)
    product = B.entries @ W.entries
    report.expect(not product.any(), 'B~ W is not zero', nonzero=int(np.count_nonzero(product)))
    rank_W = W.rank()
    report.details['rank_W'] = rank_W
    report.expect(rank_W == 3, 'weight matrix does not have rank 3', rank=rank_W)
    for pos in B.labels:
        label = specs[pos][0]
        if W.row(pos)[0] != label.index:
            report.fail('degree differs from the minor size', vertex=pos)
            break
    return W, report


def scaled_point(X, t0, t1, t2):
    n = X.shape[0]
    left = diag([t1 ** i for i in range(1, n + 1)])
    right = diag([t2 ** j for j in range(1, n + 1)])
    return matmul(left, X * t0, right)


def check_scaling(n, W, cfg, report=None):
    """f(t1^D t0 X t2^D) = t0^w1 t1^w2 t2^w3 f(X) at sampled X and rational t."""
    report = report or VerificationReport('toric', n, cfg.rng_seed)
    rng = cfg.rng()
    specs = cluster_by_position(n)
    checked = 0
    for p, X in enumerate(sample_points(cfg, n)):
        t = [sample_rational(cfg, rng, 9) for _ in range(3)]
        Xs = scaled_point(X, *t)
        for pos in W.labels:
            spec = specs[pos][1]
            w = W.row(pos)
            factor = t[0] ** int(w[0]) * t[1] ** int(w[1]) * t[2] ** int(w[2])
            checked += 1
            if spec.evaluate(Xs) != factor * spec.evaluate(X):
                report.fail('variable does not scale with its weights', vertex=pos, point_index=p)
                return report
    report.details['scalings_checked'] = checked
    return report


def recover_exchange_matrix(omega, W, reference=None):
    """The exchange matrix from Omega and the weights, up to the scalar fixed by ``reference``.

    ``omega`` and ``W`` must share labels with mutable vertices first. The
    rows of the inverse of [Omega^{mutable} W] belonging to mutable vertices
    are proportional to B~; they are normalized to content one and their sign
    is fixed on the first nonzero entry of ``reference`` (Q_CG by default).
    """
    if list(omega.labels) != list(W.labels):
        raise DomainError('omega and the weights are not on the same labels')
    reference = reference or build_qcg(omega.n).exchange_matrix()
    n_mut = reference.n_mut
    if list(reference.labels) != list(W.labels):
        raise DomainError('reference exchange matrix is not on the weight labels')
    A = np.concatenate([omega.entries[:, :n_mut], W.to_rational()], axis=1)
    try:
        A_inv = inverse(A)
    except SingularityError as exc:
        raise SingularityError(f'[Omega W] is singular, rank {rank(A)} of {A.shape[0]}') from exc
    block = content_normalize(A_inv[:n_mut, :])
    ref = reference.entries
    i, j = next(zip(*np.nonzero(ref)))
    if block[i, j] * int(ref[i, j]) < 0:
        block = -block
    entries = [[int(Fraction(v)) for v in row] for row in block]
    return ExtExchangeMatrix(entries, reference.mutable, reference.frozen)


def check_toric(n, cfg, omega=None):
    """Weights, their scaling check and, given Omega, recovery of B~(Q_CG(n))."""
    W, report = toric_weights(n)
    report.rng_seed = cfg.rng_seed
    check_scaling(n, W, cfg, report)
    report.details['weights'] = W.to_dict()
    if omega is not None:
        recovered = recover_exchange_matrix(omega, W)
        report.expect(recovered == build_qcg(n).exchange_matrix(), 'recovered exchange matrix differs from Q_CG')
    return report
