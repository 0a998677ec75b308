"""Exact scalar arithmetic and exact linear algebra.

Everything downstream (polynomial algebra, operator matrices, module
closures) runs on the primitives in this file.  Scalars are either plain
Python ints or ``fractions.Fraction``; mixing the two is deliberate, ints
are a fast path and Fraction only appears once a division happens.

The gamma bookkeeping works on half-integers: values are kept as an exact
rational times an optional factor sqrt(pi), poles at nonpositive integers
are tracked explicitly and 1/Gamma at a pole is exactly 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


# ---------------------------------------------------------------------------
# half-integers and the gamma function on them
# ---------------------------------------------------------------------------

class HalfInt:
    """An exact element of (1/2)Z, stored as twice its value."""

    __slots__ = ("twice",)

    def __init__(self, twice):
        if not isinstance(twice, int):
            raise TypeError("HalfInt stores twice the value as an int")
        self.twice = twice

    @classmethod
    def of(cls, value):
        """Build from an int, Fraction with denominator 1 or 2, or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return cls(2 * value.numerator)
            if value.denominator == 2:
                return cls(value.numerator)
        raise ValueError(f"not a half-integer: {value!r}")

    @property
    def is_integer(self):
        return self.twice % 2 == 0

    def as_fraction(self):
        return Fraction(self.twice, 2)

    def __add__(self, other):
        other = HalfInt.of(other)
        return HalfInt(self.twice + other.twice)

    def __sub__(self, other):
        other = HalfInt.of(other)
        return HalfInt(self.twice - other.twice)

    def __eq__(self, other):
        return isinstance(other, HalfInt) and self.twice == other.twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __repr__(self):
        if self.is_integer:
            return f"HalfInt({self.twice // 2})"
        return f"HalfInt({self.twice}/2)"


class GammaValue:
    """Gamma at a half-integer point: coeff * pi**(sqrt_pi_power/2), or a pole.

    ``sqrt_pi_power`` is 0 for integer arguments and 1 for strict
    half-integer arguments.  At a pole (nonpositive integer argument)
    ``coeff`` is 0 and the reciprocal is taken to be exactly 0.
    """

    __slots__ = ("coeff", "sqrt_pi_power", "is_pole")

    def __init__(self, coeff, sqrt_pi_power, is_pole=False):
        self.coeff = Fraction(coeff)
        self.sqrt_pi_power = sqrt_pi_power
        self.is_pole = is_pole

    def __eq__(self, other):
        return (isinstance(other, GammaValue)
                and self.is_pole == other.is_pole
                and (self.is_pole
                     or (self.coeff == other.coeff
                         and self.sqrt_pi_power == other.sqrt_pi_power)))

    def __repr__(self):
        if self.is_pole:
            return "GammaValue(pole)"
        tail = "*sqrt(pi)" if self.sqrt_pi_power else ""
        return f"GammaValue({self.coeff}{tail})"


def gamma(s) -> GammaValue:
    """Gamma function at a half-integer, exact.

    Positive integers give (s-1)!.  Half-integers, of either sign, come
    from Gamma(1/2) = sqrt(pi) and the recurrence Gamma(s+1) = s*Gamma(s).
    Nonpositive integers are poles.
    """
    s = HalfInt.of(s)
    if s.is_integer:
        k = s.twice // 2
        if k <= 0:
            return GammaValue(0, 0, is_pole=True)
        return GammaValue(factorial(k - 1), 0)
    # strict half-integer: walk the recurrence from Gamma(1/2) = sqrt(pi)
    coeff = Fraction(1)
    t = 1  # twice the current argument, starting at 1/2
    while t < s.twice:
        coeff *= Fraction(t, 2)
        t += 2
    while t > s.twice:
        t -= 2
        coeff /= Fraction(t, 2)
    return GammaValue(coeff, 1)


def recip_gamma(s) -> GammaValue:
    """1/Gamma(s); exactly 0 at the poles of Gamma."""
    g = gamma(s)
    if g.is_pole:
        return GammaValue(0, 0)
    if g.sqrt_pi_power == 0:
        return GammaValue(1 / g.coeff, 0)
    # 1/(c*sqrt(pi)) = (1/c) * pi**(-1/2); report with power -1
    return GammaValue(1 / g.coeff, -1)


def gamma_ratio(top, bottom) -> Fraction:
    """Gamma(top)/Gamma(bottom) for arguments differing by an integer.

    The ratio is the rising product bottom*(bottom+1)*...*(top-1) and is a
    polynomial in the arguments, hence defined even across poles (where it
    degenerates to 0 by the reciprocal-zero convention).
    """
    top = HalfInt.of(top)
    bottom = HalfInt.of(bottom)
    diff = top.twice - bottom.twice
    if diff % 2 != 0:
        raise ValueError("gamma_ratio needs arguments differing by an integer")
    d = diff // 2
    if d >= 0:
        out = Fraction(1)
        t = bottom.twice
        for _ in range(d):
            out *= Fraction(t, 2)
            t += 2
        return out
    inv = gamma_ratio(bottom, top)
    if inv == 0:
        raise ZeroDivisionError("gamma_ratio hits a pole of the numerator")
    return 1 / inv


def gen_binomial(a, l: int) -> Fraction:
    """Generalized binomial coefficient a*(a-1)*...*(a-l+1)/l! for half-integer a."""
    a = HalfInt.of(a)
    if l < 0:
        raise ValueError("lower index must be nonnegative")
    out = Fraction(1)
    t = a.twice
    for _ in range(l):
        out *= Fraction(t, 2)
        t -= 2
    return out / factorial(l)


# ---------------------------------------------------------------------------
# exact matrices
# ---------------------------------------------------------------------------

class RatMatrix:
    """Sparse exact matrix over the rationals.

    Rows are dicts column->coefficient; coefficients are ints or Fractions
    and zero entries are never stored.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        self.data = data if data is not None else [dict() for _ in range(rows)]

    @classmethod
    def from_rows(cls, rows, cols=None):
        """Build from an iterable of dense lists or sparse dicts."""
        rows = list(rows)
        data = []
        width = cols
        for r in rows:
            if isinstance(r, dict):
                d = {j: v for j, v in r.items() if v != 0}
            else:
                d = {j: v for j, v in enumerate(r) if v != 0}
                if width is None:
                    width = len(r)
            data.append(d)
        if width is None:
            width = 1 + max((j for d in data for j in d), default=-1)
        return cls(len(data), width, data)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: 1} for i in range(n)])

    def entry(self, i, j):
        return self.data[i].get(j, 0)

    def dense(self):
        return [[Fraction(self.data[i].get(j, 0)) for j in range(self.cols)]
                for i in range(self.rows)]

    def transpose(self):
        out = [dict() for _ in range(self.cols)]
        for i, row in enumerate(self.data):
            for j, v in row.items():
                out[j][i] = v
        return RatMatrix(self.cols, self.rows, out)

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = [dict() for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            acc = out[i]
            for k, a in row.items():
                for j, b in other.data[k].items():
                    c = acc.get(j, 0) + a * b
                    if c == 0:
                        acc.pop(j, None)
                    else:
                        acc[j] = c
        return RatMatrix(self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times a dense coordinate list."""
        out = []
        for row in self.data:
            s = 0
            for j, v in row.items():
                s += v * vec[j]
            out.append(s)
        return out

    def __eq__(self, other):
        return (isinstance(other, RatMatrix) and self.rows == other.rows
                and self.cols == other.cols
                and all(_normdict(a) == _normdict(b)
                        for a, b in zip(self.data, other.data)))

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, nnz={sum(len(r) for r in self.data)})"


def _normdict(d):
    return {j: Fraction(v) for j, v in d.items() if v != 0}


def rref(matrix: RatMatrix):
    """Reduced row-echelon form over the rationals.

    Returns (R, pivot_columns).  Plain fraction elimination with partial
    sparsity: the pivot row chosen at each column is the shortest one.
    """
    data = [dict(row) for row in matrix.data]
    rows, cols = matrix.rows, matrix.cols
    pivots = []
    r = 0
    for c in range(cols):
        # pick the sparsest row with a nonzero entry in column c
        best = -1
        for i in range(r, rows):
            if data[i].get(c, 0) != 0:
                if best < 0 or len(data[i]) < len(data[best]):
                    best = i
        if best < 0:
            continue
        data[r], data[best] = data[best], data[r]
        piv = data[r]
        inv = Fraction(1, 1) / piv[c]
        if inv != 1:
            data[r] = piv = {j: v * inv for j, v in piv.items()}
        for i in range(rows):
            if i == r:
                continue
            f = data[i].get(c, 0)
            if f == 0:
                continue
            tgt = data[i]
            for j, v in piv.items():
                u = tgt.get(j, 0) - f * v
                if u == 0:
                    tgt.pop(j, None)
                else:
                    tgt[j] = u
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return RatMatrix(rows, cols, data), pivots


def rank(matrix: RatMatrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: RatMatrix):
    """Exact basis of the kernel, as dense coordinate lists of length cols."""
    R, pivots = rref(matrix)
    pivset = set(pivots)
    free = [c for c in range(matrix.cols) if c not in pivset]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * matrix.cols
        vec[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            v = R.data[r].get(fcol, 0)
            if v != 0:
                vec[pcol] = -Fraction(v)
        basis.append(vec)
    return basis


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace of Q^n.

    Vectors are dense lists.  ``insert`` reduces against the current rows
    and either absorbs the vector (returns True, rank grew) or proves it
    dependent (returns False).
    """

    def __init__(self, n):
        self.n = n
        self.rows = []     # reduced rows, each normalized to leading 1
        self.lead = []     # leading index per row, strictly increasing order not required

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        """Fully reduce a copy of vec against the echelon rows."""
        v = list(vec)
        for row, l in zip(self.rows, self.lead):
            c = v[l]
            if c != 0:
                for j, rv in enumerate(row):
                    if rv != 0:
                        v[j] -= c * rv
        return v

    def insert(self, vec):
        v = self.reduce(vec)
        for l, c in enumerate(v):
            if c != 0:
                inv = Fraction(1, 1) / c
                v = [x * inv for x in v]
                # keep existing rows reduced against the new one
                for i, row in enumerate(self.rows):
                    f = row[l]
                    if f != 0:
                        self.rows[i] = [a - f * b for a, b in zip(row, v)]
                self.rows.append(v)
                self.lead.append(l)
                return True
        return False

    def contains(self, vec):
        return all(c == 0 for c in self.reduce(vec))


def span_basis(vectors, n):
    """Row-reduce a list of dense vectors; returns an Echelon."""
    ech = Echelon(n)
    for v in vectors:
        ech.insert(v)
    return ech


def subspace_sum(basis_a, basis_b, n):
    """Basis of span(A) + span(B), vectors dense of length n."""
    ech = Echelon(n)
    out = []
    for v in list(basis_a) + list(basis_b):
        if ech.insert(v):
            out.append(v)
    return out


def subspace_intersect(basis_a, basis_b, n):
    """Basis of span(A) ∩ span(B) by the kernel of the stacked matrix."""
    a = [list(v) for v in basis_a]
    b = [list(v) for v in basis_b]
    if not a or not b:
        return []
    stacked = RatMatrix.from_rows(a + b, n).transpose()
    combos = nullspace(stacked)
    out = []
    ech = Echelon(n)
    for combo in combos:
        vec = [Fraction(0)] * n
        for i, c in enumerate(combo[:len(a)]):
            if c != 0:
                for j, av in enumerate(a[i]):
                    vec[j] += c * av
        if any(x != 0 for x in vec) and ech.insert(vec):
            out.append(vec)
    return out


def contains(vector, basis, n):
    """Is the vector in the span of the basis?"""
    ech = span_basis(basis, n)
    return ech.contains(vector)


# ---------------------------------------------------------------------------
# modular certificates
# ---------------------------------------------------------------------------
#
# Ranks over Q are certified from below by ranks mod a prime: reducing an
# integer matrix mod p can only lower the rank, so a full-rank reduction
# proves full rank exactly.  The prime is small enough that numpy int64
# products of a full row never overflow.

CERT_PRIME = 1048573  # largest prime below 2**20


def _to_int_rows(vectors):
    """Clear denominators row by row; returns integer row dicts/lists."""
    out = []
    for v in vectors:
        if isinstance(v, dict):
            den = 1
            for c in v.values():
                if isinstance(c, Fraction):
                    den = den * c.denominator // _gcd(den, c.denominator)
            out.append({j: int(c * den) for j, c in v.items()})
        else:
            den = 1
            for c in v:
                if isinstance(c, Fraction):
                    den = den * c.denominator // _gcd(den, c.denominator)
            out.append([int(c * den) for c in v])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def modp_rank(vectors, n, p=CERT_PRIME):
    """Rank mod p of a list of vectors (dense lists or sparse dicts).

    A lower bound for the rank over Q once denominators are cleared.
    Vectorized elimination over int64.
    """
    import numpy as np

    ints = _to_int_rows(vectors)
    if not ints:
        return 0
    mat = np.zeros((len(ints), n), dtype=np.int64)
    for i, row in enumerate(ints):
        if isinstance(row, dict):
            for j, v in row.items():
                mat[i, j] = v % p
        else:
            mat[i, :len(row)] = [v % p for v in row]
    return _modp_eliminate(mat, p)


def _modp_eliminate(mat, p):
    import numpy as np

    rows, cols = mat.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = mat[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            mat[[r, i]] = mat[[i, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r] = (mat[r] * inv) % p
        below = mat[r + 1:, c]
        sel = np.nonzero(below)[0]
        if sel.size:
            idx = r + 1 + sel
            mat[idx] = (mat[idx] - below[sel, None] * mat[r]) % p
        r += 1
    return r
