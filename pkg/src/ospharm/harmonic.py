"""Graded polynomial spaces, harmonic subspaces and their decomposition.

A graded space is an explicit exact basis of homogeneous polynomials with
coordinate maps.  Harmonic subspaces (kernel of the Laplacian in one
degree) are computed from the kernel of the exact operator matrix; above a
size threshold an equivalent certified route is taken: the basis is built
from the tensor decomposition into joint eigenvectors of the bosonic and
fermionic Laplace-Beltrami operators, every member is verified to be
killed by the Laplacian, independence follows from exactly verified
eigenvalue separation, and the kernel dimension is pinned by an explicit
preimage construction proving the Laplacian surjective one degree down.
All certificates are exact; no floating point is involved anywhere.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

from .exactmath import (Echelon, RatMatrix, gamma_ratio, modp_rank, nullspace)
from .superalgebra import SuperPolynomial, VarSpec, standard_varspec
from .operators import (LinearOp, euler_bos, euler_ferm, laplacian,
                        laplace_beltrami_bos, laplace_beltrami_ferm,
                        r_squared_poly, theta_squared_poly)

# above this many monomials the harmonic basis switches from the raw
# kernel computation to the certified constructive route
NULLSPACE_LIMIT = 420

_VS_CACHE = {}


def cached_varspec(m, n):
    key = (m, n)
    if key not in _VS_CACHE:
        _VS_CACHE[key] = standard_varspec(m, n)
    return _VS_CACHE[key]


def dim_pk(m, n, k):
    """Number of monomials of total degree k."""
    if k < 0:
        return 0
    if m == 0:
        return comb(2 * n, k) if k <= 2 * n else 0
    return sum(comb(2 * n, i) * comb(k - i + m - 1, m - 1)
               for i in range(0, min(k, 2 * n) + 1) if k - i >= 0)


def dim_hk_formula(m, n, k):
    """Closed-form dimension of the degree-k harmonic space; needs m != 0."""
    if m == 0:
        raise ValueError("the closed form needs at least one bosonic variable")
    if k < 0:
        return 0
    first = sum(comb(2 * n, i) * comb(k - i + m - 1, m - 1)
                for i in range(0, min(k, 2 * n) + 1))
    second = sum(comb(2 * n, i) * comb(k - 2 - i + m - 1, m - 1)
                 for i in range(0, min(k - 2, 2 * n) + 1)) if k >= 2 else 0
    return first - second


def _monomials(m, n, k):
    """All monomial keys of degree k in the canonical deterministic order."""
    out = []
    for fdeg in range(0, min(2 * n, k) + 1):
        bosdeg = k - fdeg
        if m == 0 and bosdeg > 0:
            continue
        for bits in itertools.combinations(range(2 * n), fdeg):
            mask = 0
            for b in bits:
                mask |= 1 << b
            for bos in _bos_exponents(m, bosdeg):
                out.append((bos, mask))
    return out


def _bos_exponents(m, d):
    """Sparse exponent tuples of total degree d in m variables, lex order."""
    if d == 0:
        yield ()
        return
    if m == 0:
        return

    def rec(i, rem):
        if i == m - 1:
            yield ((i, rem),) if rem else ()
            return
        for e in range(rem, -1, -1):
            head = ((i, e),) if e else ()
            for tail in rec(i + 1, rem - e):
                yield head + tail
    yield from rec(0, d)


class GradedSpace:
    """An explicit basis of homogeneous polynomials with exact coordinates."""

    def __init__(self, vs, degree, basis, label=""):
        self.vs = vs
        self.degree = degree
        self.basis = list(basis)
        self.label = label
        self._mono_index = None
        self._solver = None

    @property
    def dim(self):
        return len(self.basis)

    def mono_index(self):
        if self._mono_index is None:
            monos = {}
            for b in self.basis:
                for mono in b.terms:
                    if mono not in monos:
                        monos[mono] = None
            for i, mono in enumerate(sorted(monos, key=lambda t: (t[1], t[0]))):
                monos[mono] = i
            self._mono_index = monos
        return self._mono_index

    def vector(self, f):
        """Dense coordinate list of f over the monomial support of the basis."""
        idx = self.mono_index()
        vec = [0] * len(idx)
        for mono, c in f.terms.items():
            pos = idx.get(mono)
            if pos is None:
                raise ValueError("polynomial leaves the monomial support of the space")
            vec[pos] = c
        return vec

    def _ensure_solver(self):
        if self._solver is None:
            n = len(self.mono_index())
            ech_rows = []   # (reduced dense vector, combo dict)
            for j, b in enumerate(self.basis):
                v = self.vector(b)
                combo = {j: Fraction(1)}
                v, combo = _reduce_tracked(v, combo, ech_rows)
                lead = _leading_index(v)
                if lead is None:
                    raise ValueError("basis is linearly dependent")
                inv = Fraction(1, 1) / v[lead]
                v = [c * inv for c in v]
                combo = {i: c * inv for i, c in combo.items()}
                ech_rows.append((lead, v, combo))
            self._solver = ech_rows
        return self._solver

    def coordinates(self, f):
        """Exact coordinates of f in the basis; raises when f is outside."""
        if f.is_zero():
            return [Fraction(0)] * self.dim
        rows = self._ensure_solver()
        v = self.vector(f)
        combo = {}
        # invariant of the reduction: current v = f + sum(combo[t] * basis_t)
        v, combo = _reduce_tracked(v, combo, rows)
        if any(c != 0 for c in v):
            raise ValueError("polynomial not in the span of the basis")
        out = [Fraction(0)] * self.dim
        for j, c in combo.items():
            out[j] = -c
        return out

    def contains(self, f):
        try:
            self.coordinates(f)
            return True
        except ValueError:
            return False

    def __repr__(self):
        return f"GradedSpace({self.label or 'basis'}, dim={self.dim}, deg={self.degree})"


def _leading_index(vec):
    for i, c in enumerate(vec):
        if c != 0:
            return i
    return None


def _reduce_tracked(v, combo, rows):
    v = list(v)
    for lead, rvec, rcombo in rows:
        c = v[lead]
        if c != 0:
            for j, rv in enumerate(rvec):
                if rv != 0:
                    v[j] -= c * rv
            for j, rc in rcombo.items():
                combo[j] = combo.get(j, 0) - c * rc
    return v, combo


_PK_CACHE = {}


def monomial_basis_pk(m, n, k, vs=None):
    """All monomials of degree k as a graded space."""
    key = (m, n, k, id(vs) if vs is not None else None)
    if key in _PK_CACHE:
        return _PK_CACHE[key]
    vs = vs or cached_varspec(m, n)
    basis = [SuperPolynomial(vs, {mono: 1}) for mono in _monomials(m, n, k)]
    space = GradedSpace(vs, k, basis, label=f"P_{k}({m}|{2*n})")
    assert space.dim == dim_pk(m, n, k)
    _PK_CACHE[key] = space
    return space


# ---------------------------------------------------------------------------
# harmonic spaces
# ---------------------------------------------------------------------------

_HK_CACHE = {}
_HB_CACHE = {}
_HF_CACHE = {}


def _kernel_basis(m, n, k, vs):
    """Raw kernel of the Laplacian on degree k, split by parity so every
    basis vector has homogeneous parity."""
    lap = laplacian(m, n, vs)
    monos_k = _monomials(m, n, k)
    monos_low = _monomials(m, n, k - 2) if k >= 2 else []
    low_index = {mono: i for i, mono in enumerate(monos_low)}
    basis = []
    for par in (0, 1):
        cols = [mono for mono in monos_k if mono[1].bit_count() % 2 == par]
        if not cols:
            continue
        rows = [dict() for _ in range(len(monos_low))]
        for j, mono in enumerate(cols):
            img = lap(SuperPolynomial(vs, {mono: 1}))
            for mo, c in img.terms.items():
                rows[low_index[mo]][j] = c
        mat = RatMatrix(len(monos_low), len(cols), rows)
        for vec in nullspace(mat):
            terms = {}
            for j, c in enumerate(vec):
                if c != 0:
                    terms[cols[j]] = c
            basis.append(SuperPolynomial(vs, terms))
    return basis


def harmonics(m, n, k, vs=None):
    """Harmonic polynomials of degree k: kernel of the Laplacian in P_k.

    Small spaces use the raw exact kernel; large ones the certified
    constructive basis (see module docstring).  The result carries exact
    polynomials either way.
    """
    key = (m, n, k)
    if key in _HK_CACHE and vs is None:
        return _HK_CACHE[key]
    vs = vs or cached_varspec(m, n)
    if m == 0:
        basis = _kernel_basis(m, n, k, vs)
    elif dim_pk(m, n, k) <= NULLSPACE_LIMIT:
        basis = _kernel_basis(m, n, k, vs)
        if m >= 1:
            assert len(basis) == dim_hk_formula(m, n, k)
    else:
        basis = _constructive_harmonic_basis(m, n, k, vs)
        expected = certified_harmonic_dimension(m, n, k)
        if len(basis) != expected:
            raise AssertionError("constructive basis does not reach the certified dimension")
    space = GradedSpace(vs, k, basis, label=f"H_{k}({m}|{2*n})")
    if vs is None or vs is cached_varspec(m, n):
        _HK_CACHE[key] = space
    return space


def bosonic_harmonics(m, p):
    """Classical harmonic polynomials of degree p in the bosonic variables."""
    key = (m, p)
    if key not in _HB_CACHE:
        vs = cached_varspec(m, 0)
        _HB_CACHE[key] = GradedSpace(vs, p, _kernel_basis(m, 0, p, vs),
                                     label=f"Hb_{p}({m})")
    return _HB_CACHE[key]


def fermionic_harmonics(n, q):
    """Harmonic elements of degree q of the fermionic algebra (empty for q > n)."""
    key = (n, q)
    if key not in _HF_CACHE:
        vs = cached_varspec(0, n)
        _HF_CACHE[key] = GradedSpace(vs, q, _kernel_basis(0, n, q, vs),
                                     label=f"Hf_{q}(2n={2*n})")
    return _HF_CACHE[key]


def _embed(f, vs_target, m_src, n_src):
    """Re-key a polynomial from (m_src, n_src) variables into a larger varspec
    sharing the same leading variable layout."""
    return SuperPolynomial(vs_target, dict(f.terms))


# ---------------------------------------------------------------------------
# the radial polynomials and the component decomposition
# ---------------------------------------------------------------------------

def fkpq(m, n, k, p, q, vs=None):
    """The radial factor polynomial of the component decomposition.

    sum_s a_s r^(2k-2s) theta^(2s), a_s = C(k,s) * (n-q-s)!/(n-q-k)! *
    Gamma(m/2+p+k)/Gamma(m/2+p+k-s); exact rationals throughout.
    Requires 0 <= q <= n and 0 <= k <= n-q; the k = 0 case is 1.
    """
    if not (0 <= q <= n):
        raise ValueError("fermionic label out of range")
    if not (0 <= k <= n - q):
        raise ValueError("radial degree out of range")
    vs = vs or cached_varspec(m, n)
    r2 = SuperPolynomial.zero(vs)
    bo, _, fo, _ = vs.block("x")
    for i in range(m):
        r2 = r2 + SuperPolynomial.bos_var(vs, bo + i, 2)
    th2 = theta_squared_poly(m, n, vs)
    top = Fraction(m, 2) + p + k
    out = SuperPolynomial.zero(vs)
    for s in range(0, k + 1):
        a_s = comb(k, s) * Fraction(factorial(n - q - s), factorial(n - q - k)) \
            * gamma_ratio(top, top - s)
        out = out + a_s * (r2 ** (k - s)) * (th2 ** s)
    return out


class HkComponent:
    """One joint eigencomponent of the harmonic space.

    labels (l, p, q) with 2l + p + q = k; basis vectors are the radial
    factor times products of a bosonic and a fermionic harmonic.  eig_bos
    and eig_ferm are the exact eigenvalues of the two one-sided
    Laplace-Beltrami operators on the component.
    """

    def __init__(self, l, p, q, basis, eig_bos, eig_ferm):
        self.l = l
        self.p = p
        self.q = q
        self.basis = basis
        self.eig_bos = eig_bos
        self.eig_ferm = eig_ferm

    @property
    def dim(self):
        return len(self.basis)

    def __repr__(self):
        return f"HkComponent(l={self.l}, p={self.p}, q={self.q}, dim={self.dim})"


def component_labels(m, n, k):
    """(l, p, q) labels in deterministic order, empty factors skipped."""
    out = []
    for j in range(0, min(n, k) + 1):
        for l in range(0, min(n - j, (k - j) // 2) + 1):
            p = k - 2 * l - j
            if p < 0:
                continue
            out.append((l, p, j))
    return out


_DECOMP_CACHE = {}


def decompose_hk(m, n, k):
    """Decompose the degree-k harmonic space into joint eigencomponents.

    Requires m != 0.  Components with an empty bosonic or fermionic factor
    are dropped.  Every returned basis vector is annihilated by the
    Laplacian; callers can rely on that exactly (it is asserted here).
    """
    if m == 0:
        raise ValueError("decomposition needs at least one bosonic variable")
    key = (m, n, k)
    if key in _DECOMP_CACHE:
        return _DECOMP_CACHE[key]
    vs = cached_varspec(m, n)
    lap = laplacian(m, n, vs)
    comps = []
    for (l, p, q) in component_labels(m, n, k):
        hb = bosonic_harmonics(m, p)
        hf = fermionic_harmonics(n, q)
        if hb.dim == 0 or hf.dim == 0:
            continue
        f_rad = fkpq(m, n, l, p, q, vs)
        basis = []
        for b in hb.basis:
            bb = _embed(b, vs, m, 0)
            for ff in hf.basis:
                shift = _shift_ferm(ff, vs)
                vec = f_rad * bb * shift
                basis.append(vec)
        comp = HkComponent(l, p, q, basis,
                           eig_bos=-p * (m - 2 + p),
                           eig_ferm=-q * (-2 * n - 2 + q))
        for v in comp.basis:
            if not lap(v).is_zero():
                raise AssertionError(f"component {(l, p, q)} contains a non-harmonic vector")
        comps.append(comp)
    _DECOMP_CACHE[key] = comps
    return comps


def _shift_ferm(f, vs_target):
    """Bring a purely fermionic polynomial into the fermionic slots of a
    full varspec (slot layout is shared, so terms copy verbatim)."""
    return SuperPolynomial(vs_target, dict(f.terms))


def _constructive_harmonic_basis(m, n, k, vs):
    """Union of the component bases, with exact independence certificates:
    each vector is a verified joint eigenvector and the eigenvalue pairs of
    distinct components differ; inside a component independence comes from
    the tensor structure."""
    comps = decompose_hk(m, n, k)
    pairs = [(c.eig_bos, c.eig_ferm) for c in comps]
    if len(set(pairs)) != len(pairs):
        raise AssertionError("eigenvalue pairs collide; constructive route invalid here")
    lbb = laplace_beltrami_bos(m, n, vs)
    lbf = laplace_beltrami_ferm(m, n, vs)
    basis = []
    for c in comps:
        for v in c.basis:
            if not (lbb(v) - c.eig_bos * v).is_zero():
                raise AssertionError("bosonic eigenvalue check failed")
            if not (lbf(v) - c.eig_ferm * v).is_zero():
                raise AssertionError("fermionic eigenvalue check failed")
            basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# kernel dimension certificates
# ---------------------------------------------------------------------------

def _laplacian_preimage(m, n, k, u, vs, r2_powers):
    """A polynomial P with lap(P) = u for homogeneous u of degree k-2,
    built from the norm-square ladder; None when the ladder constant
    vanishes (even nonpositive superdimension window)."""
    M = m - 2 * n
    lap = laplacian(m, n, vs)
    jmax = (k - 2) // 2
    b = []
    prev = None
    for j in range(0, jmax + 1):
        d_j = (2 * j + 2) * (2 * k + M - 2 * j - 4)
        if d_j == 0:
            return None
        b_j = Fraction(1, d_j) if j == 0 else -prev / d_j
        b.append(b_j)
        prev = b_j
    out = SuperPolynomial.zero(vs)
    v = u
    for j in range(0, jmax + 1):
        if v.is_zero():
            break
        out = out + b[j] * (r2_powers[j + 1] * v)
        v = lap(v)
    return out


def certified_harmonic_dimension(m, n, k):
    """Exact kernel dimension of the Laplacian on degree k, for m >= 1.

    Small spaces: raw kernel count.  Large ones: surjectivity one degree
    down is proven by explicit verified preimages of every monomial, so
    the kernel dimension is dim P_k - dim P_{k-2} by rank-nullity.
    """
    if m == 0:
        raise ValueError("use the raw kernel for purely fermionic spaces")
    if k < 2:
        return dim_pk(m, n, k)
    if dim_pk(m, n, k) <= NULLSPACE_LIMIT:
        return harmonics(m, n, k).dim
    vs = cached_varspec(m, n)
    lap = laplacian(m, n, vs)
    r2 = r_squared_poly(m, n, vs)
    jmax = (k - 2) // 2
    r2_powers = [SuperPolynomial.const(vs, 1)]
    for _ in range(jmax + 1):
        r2_powers.append(r2_powers[-1] * r2)
    low = monomial_basis_pk(m, n, k - 2, vs)
    for u in low.basis:
        pre = _laplacian_preimage(m, n, k, u, vs, r2_powers)
        if pre is None:
            raise ArithmeticError(
                "preimage ladder degenerates; no large-space certificate here")
        if not (lap(pre) - u).is_zero():
            raise AssertionError("preimage verification failed")
    return dim_pk(m, n, k) - dim_pk(m, n, k - 2)


# ---------------------------------------------------------------------------
# Fischer decomposition
# ---------------------------------------------------------------------------

class FischerObstruction(ValueError):
    """Raised when the direct-sum decomposition by norm-square powers fails
    (even nonpositive superdimension with bosonic variables present)."""


def fischer(m, n, k):
    """Direct-sum pieces of degree k by powers of the norm square.

    For m != 0 (needs superdimension not in {0,-2,-4,...}): pieces
    (j, basis of R^{2j} H_{k-2j}) for 2j <= k.  For m = 0: k is the
    harmonic degree and the pieces are (j, theta^{2j} Hf_k) for
    j <= n - k.
    """
    M = m - 2 * n
    if m == 0:
        th2 = theta_squared_poly(0, n)
        vs = cached_varspec(0, n)
        out = []
        hf = fermionic_harmonics(n, k)
        power = SuperPolynomial.const(vs, 1)
        for j in range(0, max(-1, n - k) + 1):
            basis = [power * _shift_ferm(h, vs) for h in hf.basis]
            out.append((j, basis))
            power = power * th2
        return out
    if M <= 0 and M % 2 == 0:
        raise FischerObstruction(
            f"superdimension {M} is even and nonpositive: the norm-square "
            "powers of harmonics do not span")
    vs = cached_varspec(m, n)
    r2 = r_squared_poly(m, n, vs)
    out = []
    power = SuperPolynomial.const(vs, 1)
    for j in range(0, k // 2 + 1):
        hk = harmonics(m, n, k - 2 * j)
        out.append((j, [power * h for h in hk.basis]))
        power = power * r2
    return out


def harmonic_projection_coeffs(M, d):
    """Coefficients a_j with sum_j a_j R^{2j} lap^{2j} projecting degree-d
    polynomials onto their harmonic part along the norm-square multiples.

    Solved exactly from the triangular conditions on the ladder scalars;
    raises FischerObstruction when a ladder scalar vanishes.
    """
    jmax = d // 2
    # mu[a][j]: scalar of R^{2j} lap^{2j} on R^{2a} H_{d-2a}
    mu = [[Fraction(0)] * (jmax + 1) for _ in range(jmax + 1)]
    for a in range(jmax + 1):
        bdeg = d - 2 * a
        mu[a][0] = Fraction(1)
        for j in range(1, a + 1):
            c = a - (j - 1)
            mu[a][j] = mu[a][j - 1] * 2 * c * (2 * c + 2 * bdeg + M - 2)
    coeffs = [Fraction(0)] * (jmax + 1)
    coeffs[0] = Fraction(1)
    for a in range(1, jmax + 1):
        if mu[a][a] == 0:
            raise FischerObstruction(
                "projection ladder degenerates (even nonpositive superdimension)")
        coeffs[a] = -sum(coeffs[j] * mu[a][j] for j in range(a)) / mu[a][a]
    return coeffs


def harmonic_projection(f, m, n):
    """Harmonic part of a homogeneous polynomial along norm-square multiples."""
    if f.is_zero():
        return f
    d = f.degree()
    M = m - 2 * n
    coeffs = harmonic_projection_coeffs(M, d)
    vs = f.vs
    lap = laplacian(m, n, vs)
    r2 = r_squared_poly(m, n, vs)
    out = SuperPolynomial.zero(vs)
    v = f
    rp = SuperPolynomial.const(vs, 1)
    for j, c in enumerate(coeffs):
        if v.is_zero():
            break
        if c != 0:
            out = out + c * (rp * v)
        v = lap(v)
        rp = rp * r2
    return out


def divide_by_r2(f, m, n):
    """Exact division by the norm square; raises when f is not a multiple."""
    vs = f.vs
    r2 = r_squared_poly(m, n, vs)
    bo, _, _, _ = vs.block("x")
    lead_var = bo  # x1^2 is the lex-leading term of the norm square
    quotient = SuperPolynomial.zero(vs)
    rest = f
    while not rest.is_zero():
        mono, c = max(rest.terms.items(), key=lambda t: _lex_key(t[0], vs))
        bos, mask = mono
        e1 = dict(bos).get(lead_var, 0)
        if e1 < 2:
            raise ValueError("polynomial is not a multiple of the norm square")
        nb = tuple((i, e - 2 if i == lead_var else e) for i, e in bos if not (i == lead_var and e == 2))
        q = SuperPolynomial(vs, {(nb, mask): c})
        quotient = quotient + q
        rest = rest - q * r2
    return quotient


def _lex_key(mono, vs):
    bos, mask = mono
    dense = [0] * vs.nbos
    for i, e in bos:
        dense[i] = e
    fbits = [1 if mask >> j & 1 else 0 for j in range(vs.nferm)]
    return tuple(dense + fbits)


def fischer_expand(f, m, n):
    """Expand a polynomial into its norm-square ladder pieces.

    Returns {(j, k'): harmonic polynomial H} with f = sum R^{2j} H and H
    homogeneous harmonic of degree k'.  Exact; needs the projection ladder
    to be nondegenerate (superdimension not even nonpositive).
    """
    out = {}
    vs = f.vs
    lap = laplacian(m, n, vs)
    degs = sorted({sum(e for _, e in b) + mask.bit_count() for (b, mask) in f.terms})
    for k in degs:
        piece = f.homogeneous_part(k)
        j = 0
        while not piece.is_zero():
            h = harmonic_projection(piece, m, n)
            if not lap(h).is_zero():
                raise AssertionError("projection produced a non-harmonic piece")
            if not h.is_zero():
                out[(j, k - 2 * j)] = h
            piece = divide_by_r2(piece - h, m, n)
            j += 1
    return out


# ---------------------------------------------------------------------------
# projections onto components
# ---------------------------------------------------------------------------

def projector(m, n, k, r, s, vs=None):
    """Component projector on degree-k harmonics, labels (r, s).

    Product of shifted one-sided Laplace-Beltrami factors; the scalar
    denominators are the factor values on the target component.  Valid for
    m >= 3 (below that the bosonic eigenvalues collide and a denominator
    can vanish); the decomposition itself covers small m by construction.
    """
    if m < 3:
        raise ValueError(
            "projector formula degenerates for m < 3 (eigenvalue collision); "
            "use the constructive decomposition instead")
    if (r, k - 2 * r - s, s) not in component_labels(m, n, k):
        raise ValueError("not a valid component label")
    vs = vs or cached_varspec(m, n)
    lbb = laplace_beltrami_bos(m, n, vs)
    lbf = laplace_beltrami_ferm(m, n, vs)
    p0 = k - 2 * r - s
    factors = []
    for i in range(0, k + 1):
        if i == p0:
            continue
        den = (i - p0) * (i + p0 + m - 2)
        if den == 0:
            raise ZeroDivisionError("projector denominator vanishes (eigenvalue collision)")
        factors.append(("b", i * (m - 2 + i), Fraction(1, den)))
    for j in range(0, min(n, k) + 1):
        if j == s:
            continue
        den = (j - s) * (j + s - 2 * n - 2)
        if den == 0:
            raise ZeroDivisionError("projector denominator vanishes (eigenvalue collision)")
        factors.append(("f", j * (-2 * n - 2 + j), Fraction(1, den)))

    def run(f):
        out = f
        for kind, shift, scale in factors:
            op = lbb if kind == "b" else lbf
            out = (op(out) + shift * out) * scale
        return out
    return LinearOp(run, f"Q[{r},{s}]^{k}", 0, 0)


def project_onto_component(f, m, n, k, comp_labels_list, target, comps=None):
    """Exact projection of a harmonic polynomial onto one component.

    For m >= 3 uses the product projector; otherwise solves coordinates in
    the component union basis (small spaces by construction).
    """
    if m >= 3:
        r, p, s = target
        return projector(m, n, k, r, s)(f)
    comps = comps or decompose_hk(m, n, k)
    union = []
    spans = []
    for c in comps:
        spans.append((c, len(union), len(union) + c.dim))
        union.extend(c.basis)
    space = GradedSpace(f.vs, k, union, label="Hk-union")
    coords = space.coordinates(f)
    out = SuperPolynomial.zero(f.vs)
    for c, lo, hi in spans:
        if (c.l, c.p, c.q) == target:
            for i in range(lo, hi):
                if coords[i] != 0:
                    out = out + coords[i] * union[i]
    return out
