"""Diagonal calculus and the closed-form log-canonical coefficients for odd n.

Diagonal m x m matrices are handled as length-m numpy object vectors of their
diagonal entries; ``<a, b>`` is then ``sum(a_i * b_i)``.
"""
from fractions import Fraction

import numpy as np

from .cgmat import dims, initial_cluster
from .exactla import ZERO, zeros
from ..utils.errors import DomainError, UnsupportedError
from ..utils.logger import get_logger

logger = get_logger(__name__)


def diag_vector(values):
    out = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = Fraction(v)
    return out


def unit(m, i):
    """e_ii as a diagonal vector, i is 1-based."""
    v = diag_vector([0] * m)
    v[i - 1] = Fraction(1)
    return v


def ones(m):
    return diag_vector([1] * m)


def t_matrix(m, q):
    """T_m(q): floor(q/m) everywhere plus one on the last (q mod m) entries."""
    if m < 1 or q < 0:
        raise DomainError(f't_matrix needs m >= 1 and q >= 0, got m={m}, q={q}')
    base, rest = divmod(q, m)
    return diag_vector([base + (1 if i >= m - rest else 0) for i in range(m)])


def delta(m, q):
    if q < 1:
        raise DomainError(f'delta needs q >= 1, got {q}')
    return t_matrix(m, q) - t_matrix(m, q - 1)


def sigma(xi, direction='minus'):
    """sigma_-: partial sums strictly before i; sigma_+: strictly after i."""
    m = len(xi)
    out = diag_vector([0] * m)
    if direction == 'minus':
        run = ZERO
        for i in range(m):
            out[i] = run
            run += xi[i]
    elif direction == 'plus':
        run = ZERO
        for i in reversed(range(m)):
            out[i] = run
            run += xi[i]
    else:
        raise DomainError(f'unknown sigma direction {direction!r}')
    return out


def pairing(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def tr(xi):
    return sum(xi, ZERO)


def tr_d(xi):
    """Tr(D_m xi)."""
    return sum((Fraction(i + 1) * v for i, v in enumerate(xi)), ZERO)


# --------------------------------------------------------- identity checks
def _identity_checks(m, q_max):
    """Yield (identity, arguments, lhs, rhs) for every applicable instance."""
    basis = [unit(m, i) for i in range(1, m + 1)]
    one = ones(m)
    for q in range(0, q_max + 1):
        for r in range(-(q // m), 4):
            yield 'i', (m, q, r), t_matrix(m, q + r * m), t_matrix(m, q) + one * r
    for q in range(1, q_max + 1):
        if q % m:
            yield 'ii', (m, q), tr_d(delta(m, q + 1) - delta(m, q)), Fraction(-1)
        d = delta(m, q)
        yield 'iii', (m, q), pairing(sigma(d), d), ZERO
    for i, xi in enumerate(basis, start=1):
        lhs = sigma(xi, 'minus') + sigma(xi, 'plus')
        yield 'iv', (m, i), tuple(lhs), tuple(one * tr(xi) - xi)
    for q in range(1, q_max + 1):
        if q % m == 0:
            continue
        for i, xi in enumerate(basis, start=1):
            yield 'v', (m, q, i), (
                pairing(sigma(xi, 'minus'), delta(m, q)) + pairing(sigma(xi, 'plus'), delta(m, q + 1))
            ), tr(xi)
            yield 'vi', (m, q, i), (
                pairing(sigma(xi, 'minus'), delta(m, q + 1) - delta(m, q))
            ), -pairing(xi, delta(m, q + 1))
    for q in range(1, q_max + 1):
        t = t_matrix(m, q)
        yield 'vii', (m, q), pairing(sigma(one), t) + pairing(sigma(t), one), Fraction((m - 1) * q)
        for q2 in range(1, q_max + 1):
            d2 = delta(m, q2)
            yield 'viii', (m, q, q2), pairing(sigma(t), d2) + pairing(sigma(d2), t), q - pairing(t, d2)
        prev = t_matrix(m, q - 1)
        yield 'ix', (m, q), pairing(sigma(t), t) - pairing(sigma(prev), prev), q - pairing(t, delta(m, q))


def verify_prop_identities(m_max=8, q_max=None):
    """Check the nine diagonal identities for m in [2, m_max], q up to q_max (default 3m).

    Returns ``{identity: {'checked': int, 'violations': [args, ...]}}``.
    """
    if m_max < 2:
        raise DomainError(f'm_max must be >= 2, got {m_max}')
    report = {name: {'checked': 0, 'violations': []} for name in ('i', 'ii', 'iii', 'iv', 'v', 'vi', 'vii', 'viii', 'ix')}
    for m in range(2, m_max + 1):
        limit = 3 * m if q_max is None else q_max
        for name, args, lhs, rhs in _identity_checks(m, limit):
            entry = report[name]
            entry['checked'] += 1
            same = all(a == b for a, b in zip(lhs, rhs)) if isinstance(lhs, (tuple, np.ndarray)) else lhs == rhs
            if not same:
                entry['violations'].append(list(args))
    bad = {k: len(v['violations']) for k, v in report.items() if v['violations']}
    if bad:
        logger.warning('diagonal identities with violations: %s', bad)
    return report


# ---------------------------------------------------------- closed form
class OmegaMatrix:
    """Skew-symmetric coefficient matrix of a log-canonical family, with labels."""

    def __init__(self, n, labels, entries):
        self.n = n
        self.labels = list(labels)
        self.entries = entries

    def index(self, label):
        return self.labels.index(label)

    def __getitem__(self, key):
        a, b = key
        return self.entries[self.index(a), self.index(b)]

    def is_skew(self):
        m = len(self.labels)
        return all(self.entries[i, j] == -self.entries[j, i] for i in range(m) for j in range(m))

    def to_dict(self):
        return {
            'n': self.n,
            'labels': [str(label) for label in self.labels],
            'entries': self.entries,
        }


def _diag_data(n, family, q):
    """Diagonal parts (Phi_0, Psi_0) of the block traces of log phi_q / log psi_q."""
    if family == 'phi':
        return t_matrix(n - 1, q), t_matrix(n + 1, q)
    return t_matrix(n - 1, q), unit(n + 1, 1) + t_matrix(n + 1, q - 1)


def _ordered_value(n, f1, f2):
    """Closed form for (family, q1), (family, q2) with q2 <= q1."""
    (fam1, q1), (fam2, q2) = f1, f2
    phi1, psi1 = _diag_data(n, fam1, q1)
    phi2, psi2 = _diag_data(n, fam2, q2)
    if fam1 == fam2:
        eps = 0
    elif fam1 == 'phi':
        eps = 1
    else:
        eps = -1
    inv_n = Fraction(1, n)
    value = inv_n * (tr_d(phi1) * tr(phi2) - tr_d(phi2) * tr(phi1))
    value -= inv_n * (tr_d(psi1) * tr(psi2) - tr_d(psi2) * tr(psi1))
    value += pairing(sigma(phi1), phi2) - pairing(sigma(phi2), phi2)
    value -= pairing(sigma(psi1), psi2)
    value += pairing(sigma(psi2), psi2)
    value += eps * psi2[0]
    return value


def omega_pair(n, f1, f2):
    """omega for two members of the phi/psi families given as (family, index)."""
    if f1[1] >= f2[1]:
        return _ordered_value(n, f1, f2)
    return -_ordered_value(n, f2, f1)


def _expand(n, label):
    """A cluster label as a signed combination of phi/psi log-functions."""
    _, _, M = dims(n)
    if label.family != 'theta':
        return [((label.family, label.index), 1)]
    if label.index == n:
        return []
    return [(('psi', M + label.index), 1), (('psi', M), -1)]


def omega_formula(n):
    """Closed-form log-canonical coefficients of the augmented initial cluster (odd n)."""
    if n < 3:
        raise DomainError(f'omega_formula needs n >= 3, got {n}')
    if n % 2 == 0:
        raise UnsupportedError(f'the closed form is only available for odd n, got {n}')
    labels = [label for label, _ in initial_cluster(n)]
    m = len(labels)
    entries = zeros(m, m)
    combos = [_expand(n, label) for label in labels]
    for a in range(m):
        for b in range(a + 1, m):
            v = ZERO
            for f1, c1 in combos[a]:
                for f2, c2 in combos[b]:
                    v += c1 * c2 * omega_pair(n, f1, f2)
            entries[a, b] = v
            entries[b, a] = -v
    return OmegaMatrix(n, labels, entries)
