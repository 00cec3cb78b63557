"""Exact linear algebra over the rationals.

Matrices are numpy arrays of dtype ``object`` holding :class:`fractions.Fraction`
entries, so numpy does the bookkeeping (slicing, ``dot``, transposes) while
Python integers keep the arithmetic exact.
"""
from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np

from ..utils.errors import DimensionError, DomainError, SamplingError, SingularityError

ZERO = Fraction(0)
ONE = Fraction(1)


def as_matrix(rows):
    """Build a Fraction matrix from nested sequences (or another array)."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionError(f'expected a 2-d array, got {arr.ndim} dimensions')
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


def zeros(rows, cols):
    out = np.empty((rows, cols), dtype=object)
    out.fill(ZERO)
    return out


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def is_square(M):
    return M.ndim == 2 and M.shape[0] == M.shape[1]


def _require_square(M, op):
    if not is_square(M):
        raise DimensionError(f'{op}: matrix of shape {M.shape} is not square')


def submatrix(M, rows, cols):
    """Rows and columns are 0-based index sequences, kept in the given order."""
    rows = list(rows)
    cols = list(cols)
    if not rows or not cols:
        return zeros(len(rows), len(cols))
    return M[np.ix_(rows, cols)]


def trace(M):
    _require_square(M, 'trace')
    return sum((M[i, i] for i in range(M.shape[0])), ZERO)


def pair(A, B):
    """Trace form <A, B> = Tr(AB)."""
    if A.shape != B.T.shape:
        raise DimensionError(f'pair: shapes {A.shape} and {B.shape} do not match')
    return sum((A[i, j] * B[j, i] for i in range(A.shape[0]) for j in range(A.shape[1])), ZERO)


def _lcm(a, b):
    return a * b // gcd(a, b)


def _bareiss(a):
    # a: list of lists of python ints, modified in place
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(M):
    """Exact determinant by fraction-free elimination.

    Rational rows are cleared by the lcm of their denominators first, so the
    elimination itself only ever sees integers.
    """
    _require_square(M, 'det')
    n = M.shape[0]
    if n == 0:
        return ONE
    scale = 1
    rows = []
    for i in range(n):
        row = [Fraction(v) for v in M[i]]
        L = reduce(_lcm, (v.denominator for v in row), 1)
        scale *= L
        rows.append([v.numerator * (L // v.denominator) for v in row])
    return Fraction(_bareiss(rows), scale)


def inverse(M):
    _require_square(M, 'inverse')
    n = M.shape[0]
    a = [[Fraction(v) for v in M[i]] + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularityError('inverse: matrix is singular')
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        if p != 1:
            a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                rowc = a[col]
                a[r] = [x - f * y for x, y in zip(a[r], rowc)]
    return as_matrix([row[n:] for row in a])


def adjugate(M):
    _require_square(M, 'adjugate')
    n = M.shape[0]
    if n == 0:
        return zeros(0, 0)
    if n == 1:
        return as_matrix([[1]])
    d = det(M)
    if d != 0:
        return inverse(M) * d
    out = zeros(n, n)
    idx = list(range(n))
    for i in range(n):
        for j in range(n):
            minor = submatrix(M, [r for r in idx if r != i], [c for c in idx if c != j])
            cof = det(minor)
            out[j, i] = cof if (i + j) % 2 == 0 else -cof
    return out


def rank(M):
    if M.size == 0:
        return 0
    a = [[Fraction(v) for v in M[i]] for i in range(M.shape[0])]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def matmul(*mats):
    return reduce(lambda A, B: A.dot(B), mats)


def is_zero(M):
    return all(v == 0 for v in M.flat)


def content_normalize(M):
    """Scale a rational matrix to a primitive integer matrix (gcd of entries 1)."""
    nonzero = [Fraction(v) for v in M.flat if v != 0]
    if not nonzero:
        return M.copy()
    L = reduce(_lcm, (v.denominator for v in nonzero), 1)
    ints = [int(v * L) for v in nonzero]
    g = reduce(gcd, (abs(v) for v in ints))
    return M * Fraction(L, g)


class SampleConfig:
    """Seed, entry bound and point count for identity testing at random points."""

    def __init__(
        self,
        rng_seed=42,
        entry_bound=1000,
        num_points=3,
        max_retries=200,
    ):
        if entry_bound < 2:
            raise DomainError(f'entry_bound must be >= 2, got {entry_bound}')
        if num_points < 1:
            raise DomainError(f'num_points must be >= 1, got {num_points}')
        self.rng_seed = int(rng_seed)
        self.entry_bound = int(entry_bound)
        self.num_points = int(num_points)
        self.max_retries = int(max_retries)

    @classmethod
    def from_config(cls, config, **overrides):
        kwargs = {
            'rng_seed': config.get('rng_seed', 42),
            'entry_bound': config.get('entry_bound', 1000),
            'num_points': config.get('num_points', 3),
            'max_retries': config.get('max_retries', 200),
        }
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)

    def derived(self, offset):
        return SampleConfig(
            rng_seed=self.rng_seed + offset,
            entry_bound=self.entry_bound,
            num_points=self.num_points,
            max_retries=self.max_retries,
        )

    def rng(self):
        return np.random.default_rng(self.rng_seed)

    def to_dict(self):
        return {
            'rng_seed': self.rng_seed,
            'entry_bound': self.entry_bound,
            'num_points': self.num_points,
        }

    def __repr__(self):
        return f'SampleConfig({self.to_dict()})'


def sample_matrix(cfg, rows, cols, reject=None, rng=None):
    """Random integer matrix with entries in [-bound, bound].

    ``reject(M)`` returning True asks for another draw. Passing ``rng`` lets a
    caller draw several matrices from one deterministic stream.
    """
    if rng is None:
        rng = cfg.rng()
    bound = cfg.entry_bound
    for _ in range(cfg.max_retries):
        raw = rng.integers(-bound, bound + 1, size=(rows, cols))
        M = as_matrix([[int(v) for v in row] for row in raw])
        if reject is None or not reject(M):
            return M
    raise SamplingError(
        f'no admissible {rows}x{cols} sample after {cfg.max_retries} draws (seed {cfg.rng_seed})'
    )


def sample_points(cfg, n, reject=None, count=None):
    rng = cfg.rng()
    count = cfg.num_points if count is None else count
    return [sample_matrix(cfg, n, n, reject=reject, rng=rng) for _ in range(count)]


def sample_rational(cfg, rng, bound=None):
    """Nonzero rational p/q with |p|, q <= bound."""
    bound = cfg.entry_bound if bound is None else bound
    while True:
        p = int(rng.integers(-bound, bound + 1))
        q = int(rng.integers(1, bound + 1))
        if p != 0:
            return Fraction(p, q)


def antidiagonal(n):
    """W0, the permutation matrix reversing the order of the basis."""
    out = zeros(n, n)
    for i in range(n):
        out[i, n - 1 - i] = ONE
    return out


def diag(values):
    values = list(values)
    out = zeros(len(values), len(values))
    for i, v in enumerate(values):
        out[i, i] = Fraction(v)
    return out


def diagonal(M):
    return [M[i, i] for i in range(min(M.shape))]
