"""Structured block matrices built from (X, Y), minor specifications and the initial cluster.

Every host matrix is described by a *tag layout*: a grid whose entries are
``None`` (structural zero) or ``('x'|'y', i, j)`` naming the matrix entry placed
there (1-based). Layouts are fixed per ``(kind, n)``; numeric matrices are
filled from them, gradients are pulled back through them, and irreducible
components of minors are found from their zero pattern alone.

Host kinds:

- ``X``      the n x n matrix itself
- ``U``      k(n-1) x (k+1)(n+1) block bidiagonal matrix of the double
- ``aug``    U with a top row holding X's first row and a bottom row holding Y's last row
- ``V``      aug without its first n and last n columns
- ``barU``   aug without its first and last columns
- ``barV``   V without its first and last columns and without the rows that
             carry X's last row, plus the last row
- ``Vprime`` barV without the first columns of block columns 2..k-1 and the
             last rows of block rows nu+1..k-1; square of size n(k-1)+1 for odd n

Row and column indices in :class:`MinorSpec` are 1-based host indices.
"""
from functools import lru_cache
from math import ceil

import numpy as np

from .exactla import ONE, ZERO, antidiagonal, det, matmul, adjugate, submatrix, zeros
from ..utils.errors import DimensionError, DomainError, SingularityError

HOST_KINDS = ('X', 'U', 'aug', 'V', 'barU', 'barV', 'Vprime')
MODES = ('dense', 'core', 'components')


def dims(n):
    """k, N, M for dimension n."""
    if n < 2:
        raise DomainError(f'n must be >= 2, got {n}')
    k = (n + 1) // 2
    N = k * (n - 1)
    M = N - n + 1 if n % 2 else N
    return k, N, M


def nu(n):
    return ceil(n / 3)


# ---------------------------------------------------------------- layouts
@lru_cache(maxsize=None)
def layout(kind, n):
    """Tag grid of a host matrix as a tuple of row tuples."""
    if kind not in HOST_KINDS:
        raise DomainError(f'unknown host kind {kind!r}; expected one of {HOST_KINDS}')
    builder = {
        'X': _layout_x,
        'U': _layout_u,
        'aug': _layout_aug,
        'V': _layout_v,
        'barU': _layout_baru,
        'barV': _layout_barv,
        'Vprime': _layout_vprime,
    }[kind]
    return tuple(tuple(row) for row in builder(n))


def shape(kind, n):
    grid = layout(kind, n)
    return len(grid), len(grid[0]) if grid else 0


def _layout_x(n):
    return [[('x', i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def _u_row(n, b, a):
    k, _, _ = dims(n)
    row = [None] * ((k + 1) * (n + 1))
    if 1 <= a <= n:
        # Y block in block column b: local column c >= 2 holds y_{a, c-1}
        if 1 <= b <= k:
            for c in range(2, n + 2):
                row[(b - 1) * (n + 1) + c - 1] = ('y', a, c - 1)
    if 0 <= a <= n - 1:
        # X block in block column b+1: local column c <= n holds x_{a+1, c}
        if 0 <= b <= k:
            for c in range(1, n + 1):
                row[b * (n + 1) + c - 1] = ('x', a + 1, c)
    return row


def _layout_u(n):
    k, _, _ = dims(n)
    return [_u_row(n, b, a) for b in range(1, k + 1) for a in range(1, n)]


def _layout_aug(n):
    k, _, _ = dims(n)
    top = _u_row(n, 1, 0)
    bottom = _u_row(n, k, n)
    return [top] + _layout_u(n) + [bottom]


def _layout_v(n):
    return [row[n:len(row) - n] for row in _layout_aug(n)]


def _layout_baru(n):
    return [row[1:-1] for row in _layout_aug(n)]


def barv_deleted_rows(n):
    """1-based rows of V removed to form barV."""
    _, N, _ = dims(n)
    return [n + j * (n - 1) for j in range(nu(n))] + [N + 2]


def _layout_barv(n):
    drop = set(barv_deleted_rows(n))
    return [row[1:-1] for r, row in enumerate(_layout_v(n), start=1) if r not in drop]


def barv_block_rows(n):
    """Row ranges (1-based, inclusive) of the block rows of barV."""
    k, _, _ = dims(n)
    out = []
    start = 1
    for alpha in range(1, k + 1):
        height = n - 2 if 2 <= alpha <= nu(n) else n - 1
        out.append((start, start + height - 1))
        start += height
    return out


def vprime_deleted(n):
    """Rows i*_alpha for alpha in [nu+1, k-1] and columns j_beta for beta in [2, k-1] of barV, 1-based."""
    k, _, _ = dims(n)
    v = nu(n)
    rows = [1 + alpha * (n - 1) - v for alpha in range(v + 1, k)]
    cols = [1 + (beta - 1) * (n + 1) for beta in range(2, k)]
    return rows, cols


def _layout_vprime(n):
    rows, cols = vprime_deleted(n)
    drop_r, drop_c = set(rows), set(cols)
    return [
        [t for c, t in enumerate(row, start=1) if c not in drop_c]
        for r, row in enumerate(_layout_barv(n), start=1) if r not in drop_r
    ]


def structural_mask(kind, n):
    return np.array([[t is not None for t in row] for row in layout(kind, n)], dtype=bool)


def build_block(kind, X, Y=None):
    """Fill the host matrix ``kind`` from X and Y (Y defaults to X)."""
    X = np.asarray(X, dtype=object)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f'X must be square, got shape {X.shape}')
    n = X.shape[0]
    Y = X if Y is None else np.asarray(Y, dtype=object)
    if Y.shape != X.shape:
        raise DimensionError(f'X and Y shapes differ: {X.shape} vs {Y.shape}')
    grid = layout(kind, n)
    out = zeros(len(grid), len(grid[0]))
    for r, row in enumerate(grid):
        for c, tag in enumerate(row):
            if tag is not None:
                src = X if tag[0] == 'x' else Y
                out[r, c] = src[tag[1] - 1, tag[2] - 1]
    return out


# ------------------------------------------------------------- minor specs
class MinorSpec:
    """A determinant (or product of component determinants) of a host submatrix.

    ``rows``/``cols`` list the kept host indices (1-based). ``mode`` is one of
    ``dense`` (square submatrix), ``core`` (first irreducible component of the
    maximal square leading principal submatrix) or ``components`` (product of
    the first ``q`` of them). ``swap`` evaluates the host at (Y, X).
    """

    def __init__(self, kind, n, rows, cols, mode='dense', q=1, swap=False, name=''):
        if kind not in HOST_KINDS:
            raise DomainError(f'unknown host kind {kind!r}')
        if mode not in MODES:
            raise DomainError(f'unknown minor mode {mode!r}')
        self.kind = kind
        self.n = n
        self.rows = tuple(int(r) for r in rows)
        self.cols = tuple(int(c) for c in cols)
        self.mode = mode
        self.q = int(q)
        self.swap = bool(swap)
        self.name = name
        n_rows, n_cols = shape(kind, n)
        if any(not 1 <= r <= n_rows for r in self.rows) or any(not 1 <= c <= n_cols for c in self.cols):
            raise DomainError(f'{self.label()}: index outside host {kind} of shape {(n_rows, n_cols)}')
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise DomainError(f'{self.label()}: repeated row or column index')
        if mode == 'dense' and len(self.rows) != len(self.cols):
            raise DimensionError(f'{self.label()}: dense minor needs a square submatrix')
        if mode == 'components' and self.q < 1:
            raise DomainError(f'{self.label()}: component count must be >= 1')

    @classmethod
    def from_deleted(cls, kind, n, deleted_rows=(), deleted_cols=(), mode='core', q=1, swap=False, name=''):
        n_rows, n_cols = shape(kind, n)
        drop_r = set(deleted_rows)
        drop_c = set(deleted_cols)
        return cls(
            kind, n,
            [r for r in range(1, n_rows + 1) if r not in drop_r],
            [c for c in range(1, n_cols + 1) if c not in drop_c],
            mode=mode, q=q, swap=swap, name=name,
        )

    def label(self):
        return self.name or f'{self.kind}[{self.mode}]'

    @property
    def size(self):
        return sum(len(r) for r, _ in self.components())

    def components(self):
        """Dense pieces (rows, cols) whose determinants multiply to the value."""
        if self.mode == 'dense':
            return [(self.rows, self.cols)] if self.rows else []
        t = min(len(self.rows), len(self.cols))
        rows, cols = self.rows[:t], self.cols[:t]
        if t == 0:
            return []
        mask = structural_mask(self.kind, self.n)[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
        pieces = [(rows[a:b], cols[a:b]) for a, b in _split(mask, 0, t)]
        if self.mode == 'core':
            return pieces[:1]
        if self.q > len(pieces):
            raise DomainError(f'{self.label()}: asked for {self.q} components, only {len(pieces)} exist')
        return pieces[:self.q]

    def evaluate(self, X, Y=None):
        Y = X if Y is None else Y
        if self.swap:
            X, Y = Y, X
        return core_minor(build_block(self.kind, X, Y), self)

    def to_dict(self):
        return {
            'name': self.name,
            'kind': self.kind,
            'n': self.n,
            'rows': list(self.rows),
            'cols': list(self.cols),
            'mode': self.mode,
            'q': self.q,
            'swap': self.swap,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d['kind'], d['n'], d['rows'], d['cols'], mode=d.get('mode', 'dense'),
                   q=d.get('q', 1), swap=d.get('swap', False), name=d.get('name', ''))

    def __eq__(self, other):
        return isinstance(other, MinorSpec) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.kind, self.n, self.rows, self.cols, self.mode, self.q, self.swap))

    def __repr__(self):
        return f'MinorSpec({self.label()}, n={self.n}, rows={list(self.rows)}, cols={list(self.cols)})'


def _split(mask, lo, hi):
    """Irreducible segments of the square block mask[lo:hi, lo:hi]."""
    for i in range(lo + 1, hi):
        if not mask[lo:i, i:hi].any() or not mask[i:hi, lo:i].any():
            return _split(mask, lo, i) + _split(mask, i, hi)
    return [(lo, hi)]


def core_minor(H, spec):
    """Value of ``spec`` on the already built host matrix ``H``."""
    value = ONE
    for rows, cols in spec.components():
        value *= det(submatrix(H, [r - 1 for r in rows], [c - 1 for c in cols]))
    return value


# --------------------------------------------------------- initial cluster
class ClusterLabel:
    """Family member (theta/phi/psi, index) together with its grid position."""

    FAMILIES = ('theta', 'phi', 'psi')

    def __init__(self, family, index, position=None):
        if family not in self.FAMILIES:
            raise DomainError(f'unknown family {family!r}')
        self.family = family
        self.index = int(index)
        self.position = position

    @property
    def key(self):
        return (self.family, self.index)

    def __str__(self):
        return f'{self.family}_{self.index}'

    def __repr__(self):
        return f'ClusterLabel({self.family!r}, {self.index}, position={self.position})'

    def __eq__(self, other):
        return isinstance(other, ClusterLabel) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def _corner(kind, n, rows, cols):
    tag = layout(kind, n)[rows[0] - 1][cols[0] - 1]
    if tag is None:
        raise DomainError(f'upper left entry of {kind} minor is a structural zero')
    return (tag[1], tag[2])


def phi_spec(n, q, swap=False):
    k, N, _ = dims(n)
    if not 1 <= q <= N:
        raise DomainError(f'phi_{q} outside [1, {N}]')
    c = k * (n + 1)
    return MinorSpec('U', n, range(N - q + 1, N + 1), range(c - q + 1, c + 1), swap=swap, name=f'phi_{q}')


def psi_spec(n, q, swap=False):
    """psi_q for q in [1, N]; the cluster uses q <= M."""
    k, N, _ = dims(n)
    if not 1 <= q <= N:
        raise DomainError(f'psi_{q} outside [1, {N}]')
    c = k * (n + 1) + 1
    return MinorSpec('U', n, range(N - q + 1, N + 1), range(c - q + 1, c + 1), swap=swap, name=f'psi_{q}')


def theta_spec(n, q, swap=False):
    if not 1 <= q <= n:
        raise DomainError(f'theta_{q} outside [1, {n}]')
    idx = range(n - q + 1, n + 1)
    return MinorSpec('X', n, idx, idx, swap=swap, name=f'theta_{q}')


def family_spec(n, family, index, swap=False):
    return {'theta': theta_spec, 'phi': phi_spec, 'psi': psi_spec}[family](n, index, swap=swap)


def position_of(spec):
    """Grid position of the upper left entry (the correspondence with [n] x [n])."""
    return _corner(spec.kind, spec.n, spec.rows, spec.cols)


def initial_cluster(n):
    """The n^2 labeled functions of the augmented initial cluster, each with its MinorSpec."""
    _, N, M = dims(n)
    out = []
    for family, top in (('theta', n), ('phi', N), ('psi', M)):
        for q in range(1, top + 1):
            spec = family_spec(n, family, q)
            out.append((ClusterLabel(family, q, position_of(spec)), spec))
    positions = [label.position for label, _ in out]
    if len(set(positions)) != n * n:
        raise DomainError(f'initial cluster positions are not a bijection onto the {n}x{n} grid')
    return out


def frozen_labels(n):
    _, N, M = dims(n)
    return [ClusterLabel('theta', n), ClusterLabel('phi', N), ClusterLabel('psi', M)]


def cluster_by_position(n):
    return {label.position: (label, spec) for label, spec in initial_cluster(n)}


def initial_values(n, X, Y=None):
    """Position -> value of the initial cluster at (X, Y)."""
    hosts = {}
    out = {}
    Y = X if Y is None else Y
    for label, spec in initial_cluster(n):
        key = (spec.kind, spec.swap)
        if key not in hosts:
            hosts[key] = build_block(spec.kind, Y, X) if spec.swap else build_block(spec.kind, X, Y)
        out[label.position] = core_minor(hosts[key], spec)
    return out


def w0_conjugate(X):
    W = antidiagonal(X.shape[0])
    return matmul(W, X, W)


def w0_values(n, X):
    """Position -> f(W0 X W0), the target family of the reversing sequence."""
    return initial_values(n, w0_conjugate(X))


# ------------------------------------------------------------ aux minors
AUX_KINDS = ('Lambda', 'Upsilon', 'UpsilonBar', 'UpsilonHat')


def aux_spec(kind, q, n):
    """Auxiliary minors of V(X, Y), expressed on the augmented host."""
    k, N, M = dims(n)
    r0 = N + 1
    c_phi = k * (n + 1)
    c_psi = c_phi + 1
    if kind == 'Lambda':
        _check_range(kind, q, 1, N + 2)
        rows = range(N + 3 - q, N + 3)
        cols = range(c_psi - q + 1, c_psi + 1)
    elif kind in ('Upsilon', 'UpsilonBar'):
        _check_range(kind, q, 1, N + 1)
        c = c_phi if kind == 'Upsilon' else c_psi
        rows = range(r0 - q + 1, r0 + 1)
        cols = [c - q] + list(range(c - q + 2, c + 1))
    elif kind == 'UpsilonHat':
        _check_range(kind, q, M, N)
        rows = [r for r in range(r0 - q, r0 + 1) if r != r0 - M]
        cols = range(c_phi - q + 1, c_phi + 1)
    else:
        raise DomainError(f'unknown auxiliary minor {kind!r}; expected one of {AUX_KINDS}')
    return MinorSpec('aug', n, rows, cols, name=f'{kind}_{q}')


def _check_range(kind, q, lo, hi):
    if not lo <= q <= hi:
        raise DomainError(f'{kind}_{q}: index outside [{lo}, {hi}]')


def aux_minor(kind, q, X, Y=None):
    n = X.shape[0]
    return aux_spec(kind, q, n).evaluate(X, Y)


def d_spec(n, q):
    """Minor of X factoring UpsilonBar_{q+1} = D_q psi_M for q in [M, N-1] (odd n)."""
    _, N, M = dims(n)
    _check_range('D', q, M, N - 1)
    s = q + 1 - M
    return MinorSpec('X', n, range(n - s + 1, n + 1), [n - s] + list(range(n - s + 2, n + 1)), name=f'D_{q}')


# ------------------------------------------------------------------ zeta
def toeplitz_lower(v):
    m = len(v)
    out = zeros(m, m)
    for i in range(m):
        for j in range(i + 1):
            out[i, j] = v[i - j]
    return out


def zeta_vector(X):
    n = X.shape[0]
    adj = adjugate(X)
    pivot = adj[0, n - 1]
    if pivot == 0:
        raise SingularityError('zeta: the (1, n) entry of the adjugate of X vanishes')
    return [adj[j, n - 1] / pivot for j in range(n)]


def zeta(X):
    """The (n-1) x (n-1) matrix cut from X N(v(X)) after its first column is cleared."""
    n = X.shape[0]
    if n < 2:
        raise DomainError('zeta needs n >= 2')
    XN = matmul(X, toeplitz_lower(zeta_vector(X)))
    if any(XN[i, 0] != ZERO for i in range(n - 1)):
        raise SingularityError('zeta: first column of X N(v) is not cleared')
    return submatrix(XN, range(n - 1), range(1, n))


# ------------------------------------------------------- translations of barU
def translation(n, which):
    """(region rows, region cols, row shift, col shift) of a barU translation, 1-based."""
    _, N, _ = dims(n)
    n_rows, n_cols = shape('barU', n)
    if which == 1:
        return range(2, n + 1), range(1, n + 1), -1, n
    if which == 2:
        return range(1, n), range(n + 1, 2 * n + 1), n, 1
    if which == 3:
        return range(2, N + 2), range(1, n_cols + 1), n - 1, n + 1
    raise DomainError(f'unknown translation {which!r}')


def translate(spec, dr, dc):
    return MinorSpec(spec.kind, spec.n, [r + dr for r in spec.rows], [c + dc for c in spec.cols],
                     mode=spec.mode, q=spec.q, swap=spec.swap, name=spec.name)


def sample_translated_pairs(n, which, rng, count=20, max_size=3):
    """Random dense barU minors inside a translation region whose image fits in the U rows."""
    rows, cols, dr, dc = translation(n, which)
    _, N, _ = dims(n)
    _, n_cols = shape('barU', n)
    rows = [r for r in rows if 1 <= r + dr <= N + 1]
    cols = [c for c in cols if 1 <= c + dc <= n_cols]
    out = []
    top = min(max_size, len(rows), len(cols))
    for _ in range(count):
        size = int(rng.integers(1, top + 1))
        r = sorted(int(v) for v in rng.choice(rows, size=size, replace=False))
        c = sorted(int(v) for v in rng.choice(cols, size=size, replace=False))
        spec = MinorSpec('barU', n, r, c)
        out.append((spec, translate(spec, dr, dc)))
    return out
