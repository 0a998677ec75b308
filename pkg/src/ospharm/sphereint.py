"""Integration over the unit sphere of a superspace, three independent ways.

The primary route is the derivative series at the origin (a finite sum on
polynomials); the oracle route goes through classical sphere moments of
the bosonic factors combined with the top fermionic derivative and the
binomial expansion of the radial weight; the third route expands through
the norm-square ladder and keeps only the pieces proportional to powers
of the norm square.  All three must agree exactly, and the test-suite
holds them to zero tolerance.

Values are exact rationals times an integer power of pi; for a space with
m bosonic and 2n fermionic variables every sphere integral carries the
power floor((m-2n)/2).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactmath import gamma, gen_binomial
from .superalgebra import SuperPolynomial, VarSpec
from .operators import laplacian, r_squared_poly, theta_squared_poly
from .harmonic import cached_varspec, fischer_expand, FischerObstruction


class ScaledScalar:
    """An exact value coeff * pi**pi_exponent.

    Zero is normalized to exponent 0; addition of nonzero values demands
    equal exponents (they never legitimately mix in this package).
    """

    __slots__ = ("coeff", "pi_exponent")

    def __init__(self, coeff, pi_exponent=0):
        self.coeff = Fraction(coeff)
        self.pi_exponent = 0 if self.coeff == 0 else int(pi_exponent)

    def is_zero(self):
        return self.coeff == 0

    def __add__(self, other):
        if not isinstance(other, ScaledScalar):
            raise TypeError("can only add ScaledScalar")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.pi_exponent != other.pi_exponent:
            raise ValueError(
                f"cannot add pi^{self.pi_exponent} and pi^{other.pi_exponent} terms")
        return ScaledScalar(self.coeff + other.coeff, self.pi_exponent)

    def __mul__(self, other):
        if isinstance(other, ScaledScalar):
            return ScaledScalar(self.coeff * other.coeff,
                                self.pi_exponent + other.pi_exponent)
        return ScaledScalar(self.coeff * Fraction(other), self.pi_exponent)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ScaledScalar):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.coeff == other.coeff and self.pi_exponent == other.pi_exponent

    def __hash__(self):
        return hash((self.coeff, self.pi_exponent))

    def __repr__(self):
        if self.is_zero():
            return "ScaledScalar(0)"
        if self.pi_exponent == 0:
            return f"ScaledScalar({self.coeff})"
        return f"ScaledScalar({self.coeff}*pi^{self.pi_exponent})"

    def to_json(self):
        return {"coeff_num": self.coeff.numerator,
                "coeff_den": self.coeff.denominator,
                "pi_exponent": self.pi_exponent}

    def approx(self):
        """Float approximation (display only; never used in checks)."""
        import math
        return float(self.coeff) * math.pi ** self.pi_exponent


def series_constant(M, k):
    """The degree-2k series constant 2 pi^{M/2} / (2^{2k} k! Gamma(k+M/2)).

    The reciprocal of Gamma at a nonpositive integer is exactly zero, which
    silently kills the affected terms for even nonpositive superdimension.
    """
    g = gamma(Fraction(2 * k + M, 2))
    if g.is_pole:
        return ScaledScalar(0)
    base = Fraction(2, 4 ** k * factorial(k))
    if M % 2 == 0:
        return ScaledScalar(base / g.coeff, M // 2)
    # odd M: one sqrt(pi) of pi^{M/2} cancels against Gamma's sqrt(pi)
    return ScaledScalar(base / g.coeff, (M - 1) // 2)


def pizzetti(f: SuperPolynomial, m, n, block="x") -> ScaledScalar:
    """Sphere integral of a polynomial via the derivative series at zero."""
    if m == 0:
        raise ValueError("integration needs at least one bosonic variable")
    poly, exponent = pizzetti_partial(f, m, n, block)
    c = poly.constant_term()
    if poly.terms and list(poly.terms) != [((), 0)]:
        raise ValueError("polynomial has content outside the integration block")
    return ScaledScalar(Fraction(c), exponent) if c else ScaledScalar(0)


def pizzetti_partial(f: SuperPolynomial, m, n, block="x"):
    """Integrate out one block; coefficients in the other blocks survive.

    Returns (polynomial free of the block, pi exponent floor(M/2)).
    """
    if m == 0:
        raise ValueError("integration needs at least one bosonic variable")
    M = m - 2 * n
    vs = f.vs
    lap = laplacian(m, n, vs, block)
    bo, bc, fo, fc = vs.block(block)
    fmask = ((1 << fc) - 1) << fo
    exponent = M // 2 if M % 2 == 0 else (M - 1) // 2
    out = SuperPolynomial.zero(vs)
    v = f
    k = 0
    while not v.is_zero():
        c = series_constant(M, k)
        if not c.is_zero():
            assert c.pi_exponent == exponent
            part = _drop_block(v, bo, bc, fmask)
            if not part.is_zero():
                out = out + c.coeff * part
        v = lap(v)
        k += 1
    return out, exponent


def _drop_block(f, bo, bc, fmask):
    """Terms of f containing no variable of the block."""
    keep = {}
    for (bos, mask), c in f.terms.items():
        if mask & fmask:
            continue
        if any(bo <= i < bo + bc for i, _ in bos):
            continue
        keep[(bos, mask)] = c
    return SuperPolynomial(f.vs, keep)


def bosonic_sphere_moment(alpha, m) -> ScaledScalar:
    """Classical moment of a monomial over the unit sphere in m variables.

    Zero for any odd exponent; otherwise
    2 * prod Gamma((a_i+1)/2) / Gamma((|a|+m)/2).
    """
    if m < 1:
        raise ValueError("need at least one bosonic variable")
    if len(alpha) != m:
        raise ValueError("exponent vector length must be m")
    if any(a % 2 for a in alpha):
        return ScaledScalar(0)
    total = sum(alpha)
    num = Fraction(2)
    for a in alpha:
        g = gamma(Fraction(a + 1, 2))
        num *= g.coeff          # each factor carries one sqrt(pi)
    den = gamma(Fraction(total + m, 2))
    # sqrt(pi) bookkeeping: m from the numerator, (m odd) from the denominator
    if m % 2 == 0:
        return ScaledScalar(num / den.coeff, m // 2)
    return ScaledScalar(num / den.coeff, (m - 1) // 2)


def berezin_sphere_oracle(f: SuperPolynomial, m, n, block="x") -> ScaledScalar:
    """Sphere integral through classical moments and the top fermionic form.

    Works per term: a bosonic factor of homogeneous degree d times a
    fermionic monomial.  The radial substitution acts on the bosonic
    factor by the homogeneity rule (each radial derivative multiplies by
    (d/2 - j) at unit radius), the fermionic content picks up the expanded
    radial weight (1 - theta^2)^{m/2-1}, and the flat fermionic
    integration contributes its 1/pi^n normalization.
    """
    if m < 1:
        raise ValueError("integration needs at least one bosonic variable")
    vs = f.vs
    bo, bc, fo, fc = vs.block(block)
    if bc != m or fc != 2 * n:
        raise ValueError("block does not match (m, n)")
    nferm = n
    th2 = theta_squared_poly(m, n, vs, block)
    # radial weight (1 - theta^2)^(m/2 - 1), exact and finite by nilpotence
    weight = SuperPolynomial.zero(vs)
    for l in range(0, nferm + 1):
        cl = gen_binomial(Fraction(m - 2, 2), l) * (-1) ** l
        if cl != 0:
            weight = weight + cl * (th2 ** l)
    th_powers = [SuperPolynomial.const(vs, 1)]
    for _ in range(nferm):
        th_powers.append(th_powers[-1] * th2)

    total = ScaledScalar(0)
    # group terms by (fermionic monomial, bosonic degree)
    groups = {}
    for (bos, mask), c in f.terms.items():
        d = sum(e for _, e in bos)
        groups.setdefault((mask, d), []).append((bos, c))
    for (mask, d), terms in groups.items():
        # phi-map factor: sum_j (-1)^j/j! * falling(d/2, j) * theta^(2j)
        radial = SuperPolynomial.zero(vs)
        fall = Fraction(1)
        for j in range(0, nferm + 1):
            cj = Fraction((-1) ** j, factorial(j)) * fall
            if cj != 0:
                radial = radial + cj * th_powers[j]
            fall *= Fraction(d, 2) - j
        fpoly = radial * weight * SuperPolynomial(vs, {((), mask): 1})
        top = fpoly.berezin(block).constant_term()
        if top == 0:
            continue
        ferm_scalar = ScaledScalar(Fraction(top), -n)
        moments = ScaledScalar(0)
        for bos, c in terms:
            alpha = [0] * m
            for i, e in bos:
                alpha[i - bo] = e
            moments = moments + c * bosonic_sphere_moment(alpha, m)
        total = total + ferm_scalar * moments
    return total


def fischer_route_integral(f: SuperPolynomial, m, n) -> ScaledScalar:
    """Sphere integral by norm-square ladder expansion.

    Only the pieces proportional to a pure power of the norm square
    contribute, each exactly the integral of 1.  Rejects even nonpositive
    superdimension, where the ladder does not span.
    """
    if m == 0:
        raise ValueError("integration needs at least one bosonic variable")
    M = m - 2 * n
    if M <= 0 and M % 2 == 0:
        raise FischerObstruction(
            f"superdimension {M} is even and nonpositive: ladder route undefined")
    parts = fischer_expand(f, m, n)
    c = Fraction(0)
    for (j, kprime), h in parts.items():
        if kprime == 0:
            c += Fraction(h.constant_term())
    if c == 0:
        return ScaledScalar(0)
    unit = pizzetti(SuperPolynomial.const(f.vs, 1), m, n)
    return c * unit


def sphere_bilinear(f, g, m, n) -> ScaledScalar:
    """Pairing <f|g> = integral of f*g over the unit sphere (real scalars)."""
    if m == 0:
        raise ValueError("integration needs at least one bosonic variable")
    return pizzetti(f * g, m, n)


# ---------------------------------------------------------------------------
# the basic spherical mean and its differential equation
# ---------------------------------------------------------------------------

def mean_varspec(m, n):
    """Blocks (x, L, y): the original variables, the scalar radius of the
    mean, and the integrated dummy copy.  Keeping y last lets results that
    are free of y re-key directly into the (x, L) varspec."""
    return VarSpec([("x", m, 2 * n), ("L", 1, 0), ("y", m, 2 * n)],
                   names={"L": (["L"], [])})


def xl_varspec(m, n):
    return VarSpec([("x", m, 2 * n), ("L", 1, 0)], names={"L": (["L"], [])})


class MeanResult:
    """Spherical mean of a polynomial: a polynomial in the original
    variables and the radius L, times a common scaled unit."""

    def __init__(self, poly, unit):
        self.poly = poly
        self.unit = unit

    def __repr__(self):
        return f"MeanResult({self.poly!r} * {self.unit!r})"


def sphere_mean(f: SuperPolynomial, m, n) -> MeanResult:
    """Average of f over translated spheres: integrate f(x + L y) in y.

    The input lives in the plain (m, n) varspec; the output polynomial
    lives in the (x, L) varspec and is even in L.
    """
    if m == 0:
        raise ValueError("integration needs at least one bosonic variable")
    vs = mean_varspec(m, n)
    bo_x, _, fo_x, _ = vs.block("x")
    bo_y, _, fo_y, _ = vs.block("y")
    bo_l = vs.block("L")[0]
    L = SuperPolynomial.bos_var(vs, bo_l)
    images = {}
    for i in range(m):
        images[("b", bo_x + i)] = (SuperPolynomial.bos_var(vs, bo_x + i)
                                   + L * SuperPolynomial.bos_var(vs, bo_y + i))
    for j in range(2 * n):
        images[("f", fo_x + j)] = (SuperPolynomial.ferm_var(vs, fo_x + j)
                                   + L * SuperPolynomial.ferm_var(vs, fo_y + j))
    shifted = SuperPolynomial(vs, dict(f.terms)).substitute(images)
    poly, exponent = pizzetti_partial(shifted, m, n, block="y")
    out_vs = xl_varspec(m, n)
    out = SuperPolynomial(out_vs, dict(poly.terms))
    return MeanResult(out, ScaledScalar(1, exponent))


def darboux_residual(f: SuperPolynomial, m, n) -> SuperPolynomial:
    """Residual of the radial wave equation on the spherical mean.

    Applies lap_x - d^2/dL^2 - (M-1)/L d/dL to the mean's polynomial part;
    the result must vanish identically.  The 1/L is exact because the mean
    is even in L.
    """
    mr = sphere_mean(f, m, n)
    poly = mr.poly
    vs = poly.vs
    M = m - 2 * n
    lap = laplacian(m, n, vs, block="x")
    li = vs.block("L")[0]
    term1 = lap(poly)
    term2 = poly.deriv_bos(li).deriv_bos(li)
    term3 = _div_by_var(poly.deriv_bos(li), li) * Fraction(M - 1)
    return term1 - term2 - term3


def _div_by_var(f, i):
    out = {}
    for (bos, mask), c in f.terms.items():
        d = dict(bos)
        e = d.get(i, 0)
        if e == 0:
            if c != 0:
                raise ValueError("polynomial is not divisible by the variable")
            continue
        if e == 1:
            nb = tuple((a, b) for a, b in bos if a != i)
        else:
            nb = tuple((a, b - 1 if a == i else b) for a, b in bos)
        out[(nb, mask)] = c
    return SuperPolynomial(f.vs, out)
