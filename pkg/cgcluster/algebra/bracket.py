"""The Cremmer-Gervais Poisson-Lie bracket, its double, and gradients of minors.

Gradients follow the trace form: ``grad[j, i] = d f / d x_ij`` so that the
directional derivative of f in direction dX is ``Tr(grad @ dX)``.
"""
from fractions import Fraction

from .cgmat import MinorSpec, build_block, dims, layout
from .exactla import ONE, ZERO, adjugate, det, diag, matmul, pair, submatrix, trace, zeros
from ..utils.errors import DimensionError, DomainError, SingularityError


class BracketContext:
    def __init__(self, n):
        if n < 2:
            raise DomainError(f'n must be >= 2, got {n}')
        self.n = n
        self.shift_matrix = shift_matrix(n)
        self.d_matrix = diag(range(1, n + 1))

    def r_plus(self, eta):
        return r_plus(eta, self)

    def __repr__(self):
        return f'BracketContext(n={self.n})'


def shift_matrix(m):
    S = zeros(m, m)
    for i in range(m - 1):
        S[i, i + 1] = ONE
    return S


def gamma_plus(A):
    """S A S^T: entry (i, j) becomes A[i+1, j+1]."""
    m = A.shape[0]
    out = zeros(m, m)
    out[:m - 1, :m - 1] = A[1:, 1:]
    return out


def gamma_minus(A):
    """S^T A S: entry (i, j) becomes A[i-1, j-1]."""
    m = A.shape[0]
    out = zeros(m, m)
    out[1:, 1:] = A[:m - 1, :m - 1]
    return out


def upper_part(A):
    """Strictly upper triangular part."""
    out = zeros(*A.shape)
    for i in range(A.shape[0]):
        for j in range(i + 1, A.shape[1]):
            out[i, j] = A[i, j]
    return out


def lower_part(A):
    """Lower triangular part including the diagonal."""
    return A - upper_part(A)


def diagonal_part(A):
    out = zeros(*A.shape)
    for i in range(min(A.shape)):
        out[i, i] = A[i, i]
    return out


def neumann(op, A, start):
    """sum_{m >= start} op^m(A); op is nilpotent so the sum is finite."""
    total = zeros(*A.shape)
    term = A
    for _ in range(start):
        term = op(term)
    for _ in range(A.shape[0]):
        total = total + term
        term = op(term)
    return total


def shifted_projection(A):
    """(1/(1-gamma_+)) A_{>0} - (gamma_-/(1-gamma_-)) A_{<=0}."""
    return neumann(gamma_plus, upper_part(A), 0) - neumann(gamma_minus, lower_part(A), 1)


def r_plus(eta, ctx):
    n = ctx.n
    if eta.shape != (n, n):
        raise DimensionError(f'r_plus: expected {n}x{n}, got {eta.shape}')
    tr = trace(eta)
    tr_d = trace(matmul(ctx.d_matrix, eta))
    one = diag([ONE] * n)
    return (
        shifted_projection(eta)
        + one * (Fraction(n - 1, 2 * n) * tr)
        + (ctx.d_matrix * tr - one * tr_d) * Fraction(1, n)
    )


class GradPair:
    """Gradients of a function on the double with respect to X and Y."""

    def __init__(self, grad_X, grad_Y=None):
        self.grad_X = grad_X
        self.grad_Y = zeros(*grad_X.shape) if grad_Y is None else grad_Y

    @property
    def total(self):
        """Gradient of the restriction to the diagonal Y = X."""
        return self.grad_X + self.grad_Y

    def __add__(self, other):
        return GradPair(self.grad_X + other.grad_X, self.grad_Y + other.grad_Y)

    def __sub__(self, other):
        return GradPair(self.grad_X - other.grad_X, self.grad_Y - other.grad_Y)

    def __repr__(self):
        return f'GradPair(n={self.grad_X.shape[0]})'


def _host(spec, X, Y):
    return build_block(spec.kind, Y, X) if spec.swap else build_block(spec.kind, X, Y)


def host_gradient(spec, H, log=False):
    """Gradient of the minor with respect to all host entries, shape H.T.

    Entries at structural zeros inside the submatrix are included, so this is
    the gradient of the minor as a function of an arbitrary host matrix.
    """
    G = zeros(H.shape[1], H.shape[0])
    pieces = spec.components()
    values = []
    adjs = []
    for rows, cols in pieces:
        S = submatrix(H, [r - 1 for r in rows], [c - 1 for c in cols])
        values.append(det(S))
        adjs.append(adjugate(S))
    for t, (rows, cols) in enumerate(pieces):
        if log:
            if values[t] == 0:
                raise SingularityError(f'log-gradient of {spec.label()}: component {t} vanishes')
            coeff = ONE / values[t]
        else:
            coeff = ONE
            for s, v in enumerate(values):
                if s != t:
                    coeff *= v
        if coeff == 0:
            continue
        adj = adjs[t]
        for a, r in enumerate(rows):
            for b, c in enumerate(cols):
                G[c - 1, r - 1] += coeff * adj[b, a]
    return G


def grad_minor(spec, X, Y=None, log=False):
    """GradPair of a MinorSpec (or of its logarithm) at (X, Y)."""
    Y = X if Y is None else Y
    n = X.shape[0]
    if spec.n != n:
        raise DimensionError(f'{spec.label()} is defined for n={spec.n}, got X of size {n}')
    H = _host(spec, X, Y)
    G = host_gradient(spec, H, log=log)
    gX = zeros(n, n)
    gY = zeros(n, n)
    grid = layout(spec.kind, n)
    for r, row in enumerate(grid):
        for c, tag in enumerate(row):
            if tag is None or G[c, r] == 0:
                continue
            to_x = (tag[0] == 'x') != spec.swap
            target = gX if to_x else gY
            target[tag[2] - 1, tag[1] - 1] += G[c, r]
    return GradPair(gX, gY)


def coordinate(n, i, j, on_y=False):
    """x_ij (or y_ij) as a 1 x 1 minor of X."""
    return MinorSpec('X', n, [i], [j], swap=on_y, name=f'{"y" if on_y else "x"}_{i}{j}')


def _as_grad(f, X, Y, log):
    if isinstance(f, GradPair):
        return f
    if isinstance(f, MinorSpec):
        return grad_minor(f, X, Y, log=log)
    raise DomainError(f'cannot take the gradient of {type(f).__name__}')


def sklyanin_bracket(f1, f2, X, ctx, log=False):
    """{f1, f2}(X) for the bracket on Mat_n; f may be a MinorSpec or a GradPair."""
    g1 = _as_grad(f1, X, None, log).total
    g2 = _as_grad(f2, X, None, log).total
    left = pair(ctx.r_plus(matmul(g1, X)), matmul(g2, X))
    right = pair(ctx.r_plus(matmul(X, g1)), matmul(X, g2))
    return left - right


def double_bracket(f1, f2, X, Y, ctx, log=False):
    """{f1, f2}_D at (X, Y) on the double."""
    g1 = _as_grad(f1, X, Y, log)
    g2 = _as_grad(f2, X, Y, log)
    el1 = matmul(g1.grad_X, X) + matmul(g1.grad_Y, Y)
    el2 = matmul(g2.grad_X, X) + matmul(g2.grad_Y, Y)
    er1 = matmul(X, g1.grad_X) + matmul(Y, g1.grad_Y)
    er2 = matmul(X, g2.grad_X) + matmul(Y, g2.grad_Y)
    return (
        pair(ctx.r_plus(el1), el2)
        - pair(ctx.r_plus(er1), er2)
        + pair(matmul(X, g1.grad_X), matmul(Y, g2.grad_Y))
        - pair(matmul(g1.grad_X, X), matmul(g2.grad_Y, Y))
    )


def bracket_table(grads, X, ctx):
    """Skew matrix of {f_a, f_b}(X) for a list of GradPairs; r_plus is applied once per function."""
    left = [matmul(g.total, X) for g in grads]
    right = [matmul(X, g.total) for g in grads]
    rl = [ctx.r_plus(a) for a in left]
    rr = [ctx.r_plus(a) for a in right]
    m = len(grads)
    out = zeros(m, m)
    for a in range(m):
        for b in range(a + 1, m):
            v = pair(rl[a], left[b]) - pair(rr[a], right[b])
            out[a, b] = v
            out[b, a] = -v
    return out


def coordinate_bracket_matrix(X, ctx):
    """The n^2 x n^2 matrix of {x_ij, x_kl}(X), row-major in (i, j)."""
    n = ctx.n
    grads = [grad_minor(coordinate(n, i, j), X) for i in range(1, n + 1) for j in range(1, n + 1)]
    return bracket_table(grads, X, ctx)


# ------------------------------------------------------------ block traces
class BlockTraceData:
    def __init__(self, Phi, Psi, I_sum, J_sum, cal_X, cal_Y):
        self.Phi = Phi
        self.Psi = Psi
        self.I_sum = I_sum
        self.J_sum = J_sum
        self.cal_X = cal_X
        self.cal_Y = cal_Y

    @property
    def Phi0(self):
        return [self.Phi[i, i] for i in range(self.Phi.shape[0])]

    @property
    def Psi0(self):
        return [self.Psi[i, i] for i in range(self.Psi.shape[0])]


def cal_blocks(X, Y):
    """The (n-1) x (n+1) blocks [X_{[2,n]} 0] and [0 Y_{[1,n-1]}]."""
    n = X.shape[0]
    cX = zeros(n - 1, n + 1)
    cY = zeros(n - 1, n + 1)
    cX[:, :n] = X[1:, :]
    cY[:, 1:] = Y[:n - 1, :]
    return cX, cY


def block_traces(spec, X, Y=None, log=False):
    """Block traces of U grad f and grad f U for a minor of U(X, Y)."""
    if spec.kind != 'U' or spec.swap:
        raise DomainError(f'{spec.label()} is not a minor of U(X, Y)')
    Y = X if Y is None else Y
    n = X.shape[0]
    k, _, _ = dims(n)
    U = build_block('U', X, Y)
    G = host_gradient(spec, U, log=log)
    UG = matmul(U, G)
    GU = matmul(G, U)
    a, b = n - 1, n + 1
    Phi = zeros(a, a)
    for i in range(k):
        Phi = Phi + UG[i * a:(i + 1) * a, i * a:(i + 1) * a]
    Psi = zeros(b, b)
    for i in range(k + 1):
        Psi = Psi + GU[i * b:(i + 1) * b, i * b:(i + 1) * b]
    I_sum = zeros(b, a)
    J_sum = zeros(b, a)
    for i in range(k):
        I_sum = I_sum + G[i * b:(i + 1) * b, i * a:(i + 1) * a]
        J_sum = J_sum + G[(i + 1) * b:(i + 2) * b, i * a:(i + 1) * a]
    cX, cY = cal_blocks(X, Y)
    return BlockTraceData(Phi, Psi, I_sum, J_sum, cX, cY)


def brack_uho_formula(f1, f2, X, Y, ctx, log=False):
    """{f1, f2}_D for two minors of U(X, Y), assembled from their block traces."""
    n = ctx.n
    t1 = f1 if isinstance(f1, BlockTraceData) else block_traces(f1, X, Y, log=log)
    t2 = f2 if isinstance(f2, BlockTraceData) else block_traces(f2, X, Y, log=log)
    d_small = diag(range(1, n))
    d_big = diag(range(1, n + 2))
    inv_n = Fraction(1, n)
    value = inv_n * (trace(matmul(d_small, t1.Phi)) * trace(t2.Phi) - trace(matmul(d_small, t2.Phi)) * trace(t1.Phi))
    value -= inv_n * (trace(matmul(d_big, t1.Psi)) * trace(t2.Psi) - trace(matmul(d_big, t2.Psi)) * trace(t1.Psi))
    value -= pair(shifted_projection(t1.Phi), t2.Phi)
    value += pair(shifted_projection(t1.Psi), t2.Psi)
    cX, cY = t1.cal_X, t1.cal_Y
    value += pair(matmul(cY, t1.I_sum), matmul(cX, t2.J_sum))
    value -= pair(matmul(t1.I_sum, cY), matmul(t2.J_sum, cX))
    return value


def directional_derivative(spec, X, Y, dX, dY=None):
    """Exact derivative of the minor along (dX, dY); the minor is a polynomial in t of bounded degree."""
    dY = zeros(*X.shape) if dY is None else dY
    # evaluate at t = 0..d and read off the linear coefficient by Lagrange interpolation
    degree = spec.size
    ts = list(range(degree + 1))
    vals = [spec.evaluate(X + dX * t, Y + dY * t) for t in ts]
    coeff = ZERO
    for i, ti in enumerate(ts):
        # derivative at 0 of the i-th Lagrange basis polynomial
        others = [tj for j, tj in enumerate(ts) if j != i]
        denom = ONE
        for tj in others:
            denom *= (ti - tj)
        deriv = ZERO
        for skip in others:
            term = ONE
            for tj in others:
                if tj != skip:
                    term *= -tj
            deriv += term
        coeff += vals[i] * deriv / denom
    return coeff
