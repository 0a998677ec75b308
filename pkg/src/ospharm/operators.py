"""Differential and multiplication operators as composable linear maps.

Operators act on SuperPolynomial values through plain application rules;
matrices are materialized on demand against explicit graded bases.  The
graded metric couples the bosonic identity block with the antisymmetric
pairing of fermionic pairs; raised derivatives are defined through the
inverse metric, and the quadratic Casimir contraction uses the metric
entries themselves.  Both choices are pinned by the operator identities in
the test-suite (the commutation of the generators with the Laplacian, the
norm square and the Euler operator), which fail loudly if a convention is
disturbed.
"""

from __future__ import annotations

from fractions import Fraction

from .superalgebra import SuperPolynomial, VarSpec, standard_varspec


class Metric:
    """Graded metric on m bosonic + 2n fermionic directions.

    g is block diagonal: the identity on the bosonic block and, on each
    fermionic pair (2j-1, 2j), the antisymmetric matrix with entries
    -1/2 above and +1/2 below the diagonal.  g_inv mirrors this with
    entries +2/-2.
    """

    def __init__(self, m, n):
        if m < 0 or n < 0:
            raise ValueError("need nonnegative variable counts")
        self.m = m
        self.n = n
        self.dim = m + 2 * n
        self.superdim = m - 2 * n
        g = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        ginv = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for i in range(m):
            g[i][i] = Fraction(1)
            ginv[i][i] = Fraction(1)
        for j in range(n):
            a = m + 2 * j
            b = a + 1
            g[a][b] = Fraction(-1, 2)
            g[b][a] = Fraction(1, 2)
            ginv[a][b] = Fraction(2)
            ginv[b][a] = Fraction(-2)
        self.g = g
        self.g_inv = ginv

    def parity(self, a):
        return 0 if a < self.m else 1

    def __repr__(self):
        return f"Metric(m={self.m}, n={self.n})"


class LinearOp:
    """A linear endomorphism of superpolynomials.

    Wraps an application rule with metadata: a display name, the degree
    shift of homogeneous inputs, and the operator parity (0 even, 1 odd,
    None unknown/mixed).  Operators compose with * (right factor applies
    first) and form a vector space over the rationals.
    """

    __slots__ = ("fn", "name", "shift", "parity")

    def __init__(self, fn, name="op", shift=0, parity=None):
        self.fn = fn
        self.name = name
        self.shift = shift
        self.parity = parity

    def __call__(self, f):
        return self.fn(f)

    def __mul__(self, other):
        if isinstance(other, LinearOp):
            shift = None
            if self.shift is not None and other.shift is not None:
                shift = self.shift + other.shift
            parity = None
            if self.parity is not None and other.parity is not None:
                parity = (self.parity + other.parity) % 2
            return LinearOp(lambda f, a=self, b=other: a.fn(b.fn(f)),
                            f"({self.name}*{other.name})", shift, parity)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def scale(self, c):
        return LinearOp(lambda f, a=self: a.fn(f) * c,
                        f"({c}*{self.name})", self.shift, self.parity)

    def __add__(self, other):
        if not isinstance(other, LinearOp):
            raise TypeError("can only add LinearOp to LinearOp")
        shift = self.shift if self.shift == other.shift else None
        parity = self.parity if self.parity == other.parity else None
        return LinearOp(lambda f, a=self, b=other: a.fn(f) + b.fn(f),
                        f"({self.name}+{other.name})", shift, parity)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("power must be a nonnegative int")
        def run(f, a=self, k=k):
            for _ in range(k):
                f = a.fn(f)
            return f
        shift = None if self.shift is None else self.shift * k
        parity = None if self.parity is None else (self.parity * k) % 2
        return LinearOp(run, f"{self.name}^{k}", shift, parity)

    def __repr__(self):
        return f"LinearOp({self.name})"


def identity_op():
    return LinearOp(lambda f: f, "id", 0, 0)


def mult_op(poly, name=None):
    """Left multiplication by a fixed polynomial."""
    shift = poly.degree() if poly.is_homogeneous() else None
    return LinearOp(lambda f, p=poly: p * f, name or "mult", shift, poly.parity())


def sv_var(vs: VarSpec, a, m, block="x"):
    """Supervector component a (0-based) of a block as a polynomial."""
    bo, bc, fo, _ = vs.block(block)
    if a < m:
        return SuperPolynomial.bos_var(vs, bo + a)
    return SuperPolynomial.ferm_var(vs, fo + a - m)


def sv_deriv_op(vs: VarSpec, a, m, block="x"):
    """Derivative along supervector component a (lowered index)."""
    bo, bc, fo, _ = vs.block(block)
    if a < m:
        return LinearOp(lambda f, i=bo + a: f.deriv_bos(i), f"d_x{a+1}", -1, 0)
    return LinearOp(lambda f, j=fo + a - m: f.deriv_ferm(j), f"d_e{a+1-m}", -1, 1)


def raised_deriv_op(metric: Metric, vs: VarSpec, a, block="x"):
    """Raised derivative: sum_l g_inv[a][l] d/dX_l."""
    bo, bc, fo, _ = vs.block(block)
    m = metric.m
    terms = [(l, metric.g_inv[a][l]) for l in range(metric.dim)
             if metric.g_inv[a][l] != 0]

    def run(f):
        out = SuperPolynomial.zero(f.vs)
        for l, c in terms:
            if l < m:
                out = out + f.deriv_bos(bo + l) * c
            else:
                out = out + f.deriv_ferm(fo + l - m) * c
        return out
    return LinearOp(run, f"d^X{a+1}", -1, metric.parity(a))


# ---------------------------------------------------------------------------
# the basic operators
# ---------------------------------------------------------------------------

def laplacian(m, n, vs=None, block="x"):
    """Second order operator: bosonic Laplacian minus 4 * sum of fermionic
    pair derivatives (lower slot first within each pair)."""
    vs = vs or standard_varspec(m, n)
    bo, _, fo, _ = vs.block(block)

    def run(f):
        out = SuperPolynomial.zero(f.vs)
        for i in range(m):
            out = out + f.deriv_bos(bo + i).deriv_bos(bo + i)
        for j in range(n):
            out = out - 4 * f.deriv_ferm(fo + 2 * j + 1).deriv_ferm(fo + 2 * j)
        return out
    return LinearOp(run, "lap", -2, 0)


def r_squared_poly(m, n, vs=None, block="x"):
    """Norm square polynomial: sum x_i^2 - sum e_{2j-1} e_{2j}."""
    vs = vs or standard_varspec(m, n)
    bo, _, fo, _ = vs.block(block)
    out = SuperPolynomial.zero(vs)
    for i in range(m):
        out = out + SuperPolynomial.bos_var(vs, bo + i, 2)
    for j in range(n):
        out = out - (SuperPolynomial.ferm_var(vs, fo + 2 * j)
                     * SuperPolynomial.ferm_var(vs, fo + 2 * j + 1))
    return out


def theta_squared_poly(m, n, vs=None, block="x"):
    """Purely fermionic part of the norm square: -sum e_{2j-1} e_{2j}."""
    vs = vs or standard_varspec(m, n)
    _, _, fo, _ = vs.block(block)
    out = SuperPolynomial.zero(vs)
    for j in range(n):
        out = out - (SuperPolynomial.ferm_var(vs, fo + 2 * j)
                     * SuperPolynomial.ferm_var(vs, fo + 2 * j + 1))
    return out


def r_squared(m, n, vs=None, block="x"):
    return mult_op(r_squared_poly(m, n, vs, block), "R2")


def _graded_scale(f, weight, bo, m, fo, nf):
    """Map each monomial to weight(bos_degree, ferm_degree) times itself."""
    out = {}
    for (bos, mask), c in f.terms.items():
        db = sum(e for i, e in bos if bo <= i < bo + m)
        df = ((mask >> fo) & ((1 << nf) - 1)).bit_count() if nf else 0
        w = weight(db, df)
        if w != 0:
            out[(bos, mask)] = c * w
    return SuperPolynomial(f.vs, out)


def euler(m, n, vs=None, block="x"):
    """Degree-reading operator: f of degree k maps to k*f."""
    vs = vs or standard_varspec(m, n)
    bo, _, fo, _ = vs.block(block)
    nf = 2 * n
    return LinearOp(
        lambda f: _graded_scale(f, lambda db, df: db + df, bo, m, fo, nf),
        "E", 0, 0)


def euler_bos(m, n, vs=None, block="x"):
    vs = vs or standard_varspec(m, n)
    bo, _, fo, _ = vs.block(block)
    return LinearOp(
        lambda f: _graded_scale(f, lambda db, df: db, bo, m, fo, 2 * n),
        "Eb", 0, 0)


def euler_ferm(m, n, vs=None, block="x"):
    vs = vs or standard_varspec(m, n)
    bo, _, fo, _ = vs.block(block)
    return LinearOp(
        lambda f: _graded_scale(f, lambda db, df: df, bo, m, fo, 2 * n),
        "Ef", 0, 0)


def osp_generator(metric: Metric, i, j, vs=None, block="x"):
    """Invariance generator for the pair (i, j), 0-based supervector indices.

    X_i d^{X_j} - (-1)^{[i][j]} X_j d^{X_i}; identically zero for bosonic
    i == j.
    """
    vs = vs or standard_varspec(metric.m, metric.n)
    if not (0 <= i < metric.dim and 0 <= j < metric.dim):
        raise IndexError("generator index out of range")
    m = metric.m
    xi = sv_var(vs, i, m, block)
    xj = sv_var(vs, j, m, block)
    dj = raised_deriv_op(metric, vs, j, block)
    di = raised_deriv_op(metric, vs, i, block)
    sgn = -1 if (metric.parity(i) and metric.parity(j)) else 1

    def run(f):
        return xi * dj(f) - sgn * (xj * di(f))
    parity = (metric.parity(i) + metric.parity(j)) % 2
    return LinearOp(run, f"L[{i+1},{j+1}]", 0, parity)


def osp_generators(metric: Metric, vs=None, block="x"):
    """All nonzero generators with i <= j: bosonic rotations, mixed pairs,
    and the symmetric fermionic part including the diagonal."""
    out = []
    for i in range(metric.dim):
        for j in range(i, metric.dim):
            if i == j and metric.parity(i) == 0:
                continue
            out.append(((i, j), osp_generator(metric, i, j, vs, block)))
    return out


def laplace_beltrami(m, n, vs=None, block="x"):
    """R^2 lap - E(M - 2 + E) with M = m - 2n."""
    vs = vs or standard_varspec(m, n)
    M = m - 2 * n
    lap = laplacian(m, n, vs, block)
    r2 = r_squared_poly(m, n, vs, block)
    bo, _, fo, _ = vs.block(block)
    nf = 2 * n

    def run(f):
        t1 = r2 * lap(f)
        t2 = _graded_scale(f, lambda db, df: (db + df) * (M - 2 + db + df),
                           bo, m, fo, nf)
        return t1 - t2
    return LinearOp(run, "LB", 0, 0)


def laplace_beltrami_bos(m, n, vs=None, block="x"):
    """Bosonic-only variant: acts on the bosonic variables with M = m."""
    vs = vs or standard_varspec(m, n)
    lap = laplacian(m, 0, vs, block)
    bo, _, fo, _ = vs.block(block)
    r2b = SuperPolynomial.zero(vs)
    for i in range(m):
        r2b = r2b + SuperPolynomial.bos_var(vs, bo + i, 2)

    def run(f):
        t1 = r2b * lap(f)
        t2 = _graded_scale(f, lambda db, df: db * (m - 2 + db), bo, m, fo, 2 * n)
        return t1 - t2
    return LinearOp(run, "LBb", 0, 0)


def laplace_beltrami_ferm(m, n, vs=None, block="x"):
    """Fermionic-only variant: acts on the fermionic variables with M = -2n."""
    vs = vs or standard_varspec(m, n)
    bo, _, fo, _ = vs.block(block)
    th2 = theta_squared_poly(m, n, vs, block)

    def lapf(f):
        out = SuperPolynomial.zero(f.vs)
        for j in range(n):
            out = out - 4 * f.deriv_ferm(fo + 2 * j + 1).deriv_ferm(fo + 2 * j)
        return out

    def run(f):
        t1 = th2 * lapf(f)
        t2 = _graded_scale(f, lambda db, df: df * (-2 * n - 2 + df),
                           bo, m, fo, 2 * n)
        return t1 - t2
    return LinearOp(run, "LBf", 0, 0)


def casimir_form(metric: Metric, vs=None, block="x"):
    """Quadratic contraction of the generators against the metric:
    -(1/2) sum L_ij g[i][l] g[j][k] L_kl.

    Must agree with laplace_beltrami as an operator; the contraction uses
    the metric entries (the inverse metric would rescale the fermionic
    contribution and break the identity).
    """
    vs = vs or standard_varspec(metric.m, metric.n)
    nz = [(a, b, metric.g[a][b]) for a in range(metric.dim)
          for b in range(metric.dim) if metric.g[a][b] != 0]
    ops = {}

    def gen(i, j):
        if (i, j) not in ops:
            ops[(i, j)] = osp_generator(metric, i, j, vs, block)
        return ops[(i, j)]

    terms = []
    for i, l, gil in nz:
        for j, k, gjk in nz:
            terms.append((Fraction(-1, 2) * gil * gjk, gen(i, j), gen(k, l)))

    def run(f):
        out = SuperPolynomial.zero(f.vs)
        for c, a, b in terms:
            out = out + a(b(f)) * c
        return out
    return LinearOp(run, "casimir", 0, 0)


def gl_generator(i, j, m, n, vs=None, block="x"):
    """Weight-basis generator X_i d/dX_j (plain lowered derivative)."""
    vs = vs or standard_varspec(m, n)
    xi = sv_var(vs, i, m, block)
    dj = sv_deriv_op(vs, j, m, block)

    def run(f):
        return xi * dj(f)
    parity = ((1 if i >= m else 0) + (1 if j >= m else 0)) % 2
    return LinearOp(run, f"E[{i+1},{j+1}]", 0, parity)


def inner_product(metric: Metric, vs: VarSpec, xblock="x", yblock="y"):
    """Bilinear pairing polynomial of two supervector blocks:
    sum X_a g[a][b] Y_b."""
    out = SuperPolynomial.zero(vs)
    m = metric.m
    for a in range(metric.dim):
        for b in range(metric.dim):
            c = metric.g[a][b]
            if c == 0:
                continue
            out = out + c * (sv_var(vs, a, m, xblock) * sv_var(vs, b, m, yblock))
    return out


def matrix_of(op: LinearOp, space, target=None):
    """Exact matrix of an operator against graded bases.

    Columns are coordinates of op(basis vector) in the target space (the
    domain space itself when no target is given).  Raises if an image
    leaves the span of the target basis.
    """
    from .exactmath import RatMatrix

    target = target or space
    cols = []
    for b in space.basis:
        cols.append(target.coordinates(op(b)))
    data = [dict() for _ in range(len(target.basis))]
    for jcol, col in enumerate(cols):
        for irow, v in enumerate(col):
            if v != 0:
                data[irow][jcol] = v
    return RatMatrix(len(target.basis), len(space.basis), data)


# ---------------------------------------------------------------------------
# the enveloping oscillator algebra
# ---------------------------------------------------------------------------

def oscillator_generators(m, n, vs=None, block="x"):
    """Generators of the big oscillator algebra on polynomials.

    Returns a list of (label, (u, g), LinearOp): the variables X_i, the
    derivatives d_{X_i}, all quadratic multiplications X_i X_j, all second
    derivatives, and the shifted mixed terms
    X_i d_{X_j} + (-1)^{[i]} delta_ij / 2.

    Each generator carries two parities: u counts fermionic linear factors
    mod 2 (the ordinary operator parity) and g counts bosonic linear
    factors mod 2 (the assigned gradation, 1-[i] per linear generator).
    The bracket of the algebra uses the sign exponent
    g*g' + u*g' + g*u'; pure limits collapse it to the familiar rules
    (g*g' with no fermionic variables, a plain commutator with none
    bosonic), and the mixed brackets land in the span exactly.
    """
    vs = vs or standard_varspec(m, n)
    dim = m + 2 * n
    gens = []

    def par(a):
        return 0 if a < m else 1

    def up(a, b=None):
        u = par(a) + (par(b) if b is not None else 0)
        return u % 2

    def gp(a, b=None):
        g = (1 - par(a)) + ((1 - par(b)) if b is not None else 0)
        return g % 2

    for a in range(dim):
        gens.append((f"X{a+1}", (up(a), gp(a)),
                     mult_op(sv_var(vs, a, m, block), f"X{a+1}")))
    for a in range(dim):
        gens.append((f"D{a+1}", (up(a), gp(a)), sv_deriv_op(vs, a, m, block)))
    for a in range(dim):
        for b in range(a, dim):
            if a == b and par(a) == 1:
                continue  # fermionic squares vanish
            p = sv_var(vs, a, m, block) * sv_var(vs, b, m, block)
            gens.append((f"X{a+1}X{b+1}", (up(a, b), gp(a, b)),
                         mult_op(p, f"X{a+1}X{b+1}")))
    for a in range(dim):
        for b in range(a, dim):
            if a == b and par(a) == 1:
                continue
            da = sv_deriv_op(vs, a, m, block)
            db = sv_deriv_op(vs, b, m, block)
            gens.append((f"D{a+1}D{b+1}", (up(a, b), gp(a, b)), da * db))
    for a in range(dim):
        for b in range(dim):
            e = gl_generator(a, b, m, n, vs, block)
            if a == b:
                shift = Fraction(1, 2) if par(a) == 0 else Fraction(-1, 2)
                const = LinearOp(lambda f, s=shift: f * s, "shift", 0, 0)
                e = e + const
            gens.append((f"E{a+1},{b+1}", (up(a, b), gp(a, b)), e))
    return gens


def oscillator_bracket_sign(pa, pb):
    """Sign exponent of the big-algebra bracket for parity pairs (u, g)."""
    ua, ga = pa
    ub, gb = pb
    return (ga * gb + ua * gb + ga * ub) % 2


def oscillator_dimension(m, n):
    """Dimension of the orthosymplectic algebra on 4n+1 | 2m directions:
    r(r-1)/2 + s(2s+1) + 2rs with r = 4n+1, s = m."""
    r = 4 * n + 1
    s = m
    return r * (r - 1) // 2 + s * (2 * s + 1) + 2 * r * s
