"""Sparse exact polynomial algebra in commuting and anticommuting variables.

A variable specification ("varspec") declares ordered blocks, each with a
number of commuting (bosonic) and anticommuting (fermionic) variables.
Monomials store bosonic exponents as a sorted tuple of (index, exponent)
pairs and the fermionic content as a bitmask over global fermionic slots,
kept in canonical ascending order; the reordering sign lives in the
coefficient.  Coefficients are exact (int or Fraction).

Anticommutation is the single source of all signs here: X_i X_j equals
(-1)**([i][j]) X_j X_i where [i] is 1 exactly for fermionic variables, and
squares of fermionic variables vanish.  Fermionic derivatives act from the
left.
"""

from __future__ import annotations

from fractions import Fraction


class VarSpec:
    """Ordered blocks of named bosonic/fermionic variables.

    blocks: list of (name, bosonic_count, fermionic_count).  Fermionic
    counts are even in every intended application (pairs), but the algebra
    itself does not require it.  The derived global ordering is fixed:
    bosonic indices run block by block, fermionic slots likewise.
    """

    def __init__(self, blocks, names=None):
        self.blocks = list(blocks)
        seen = set()
        for name, _, _ in self.blocks:
            if name in seen:
                raise ValueError(f"duplicate block name {name!r}")
            seen.add(name)
        self.nbos = sum(b for _, b, _ in self.blocks)
        self.nferm = sum(f for _, _, f in self.blocks)
        self._offsets = {}
        ob = of = 0
        for name, b, f in self.blocks:
            self._offsets[name] = (ob, b, of, f)
            ob += b
            of += f
        # printable names per variable
        self.bos_names = []
        self.ferm_names = []
        for name, b, f in self.blocks:
            custom = (names or {}).get(name)
            if custom:
                bn, fn = custom
                if len(bn) != b or len(fn) != f:
                    raise ValueError("name list lengths do not match block")
                self.bos_names.extend(bn)
                self.ferm_names.extend(fn)
            else:
                bp, fp = _DEFAULT_PREFIXES.get(name, (name + "_x", name + "_e"))
                self.bos_names.extend(f"{bp}{i + 1}" for i in range(b))
                self.ferm_names.extend(f"{fp}{i + 1}" for i in range(f))
        self._by_name = {}
        for i, nm in enumerate(self.bos_names):
            self._by_name[nm] = ("b", i)
        for i, nm in enumerate(self.ferm_names):
            self._by_name[nm] = ("f", i)

    def block(self, name):
        """(bos_offset, bos_count, ferm_offset, ferm_count) of a block."""
        return self._offsets[name]

    def lookup(self, name):
        """('b'|'f', global index) for a printable variable name."""
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __eq__(self, other):
        return isinstance(other, VarSpec) and self.blocks == other.blocks \
            and self.bos_names == other.bos_names and self.ferm_names == other.ferm_names

    def __repr__(self):
        return f"VarSpec({self.blocks})"


_DEFAULT_PREFIXES = {"x": ("x", "e"), "y": ("y", "f")}


def standard_varspec(m, n):
    """The default single-block varspec: x1..xm bosonic, e1..e2n fermionic."""
    return VarSpec([("x", m, 2 * n)])


# monomial = (bos, mask); bos = tuple of (index, exponent), exponent > 0
_ONE = ((), 0)


def _merge_bos(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ai, ae = a[i]
        bj, be = b[j]
        if ai < bj:
            out.append(a[i]); i += 1
        elif ai > bj:
            out.append(b[j]); j += 1
        else:
            out.append((ai, ae + be)); i += 1; j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _merge_mask_sign(m1, m2):
    """Sign from sorting the concatenation of two disjoint ascending masks."""
    sign = 1
    m = m2
    while m:
        low = m & -m
        b = low.bit_length() - 1
        if (m1 >> (b + 1)).bit_count() & 1:
            sign = -sign
        m ^= low
    return sign


def _mono_degree(mono):
    bos, mask = mono
    return sum(e for _, e in bos) + mask.bit_count()


class SuperPolynomial:
    """Sparse exact polynomial over a varspec."""

    __slots__ = ("vs", "terms")

    def __init__(self, vs, terms=None):
        self.vs = vs
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vs):
        return cls(vs, {})

    @classmethod
    def const(cls, vs, c):
        if c == 0:
            return cls(vs, {})
        return cls(vs, {_ONE: c})

    @classmethod
    def bos_var(cls, vs, i, power=1):
        if not 0 <= i < vs.nbos:
            raise IndexError("bosonic index out of range")
        if power == 0:
            return cls.const(vs, 1)
        return cls(vs, {(((i, power),), 0): 1})

    @classmethod
    def ferm_var(cls, vs, j):
        if not 0 <= j < vs.nferm:
            raise IndexError("fermionic index out of range")
        return cls(vs, {((), 1 << j): 1})

    # -- ring structure ------------------------------------------------------

    def _check(self, other):
        if self.vs is not other.vs and self.vs != other.vs:
            raise ValueError("varspec mismatch")

    def __add__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.const(self.vs, other)
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return SuperPolynomial(self.vs, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial(self.vs, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.const(self.vs, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            if other == 0:
                return SuperPolynomial.zero(self.vs)
            return SuperPolynomial(self.vs,
                                   {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out = {}
        for (b1, m1), c1 in self.terms.items():
            for (b2, m2), c2 in other.terms.items():
                if m1 & m2:
                    continue  # repeated fermionic variable
                mono = (_merge_bos(b1, b2), m1 | m2)
                c = c1 * c2
                if m1 and m2 and _merge_mask_sign(m1, m2) < 0:
                    c = -c
                s = out.get(mono, 0) + c
                if s == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return SuperPolynomial(self.vs, out)

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        out = SuperPolynomial.const(self.vs, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.terms == {} if other == 0 else \
                self.terms == {_ONE: other} or \
                (len(self.terms) == 1 and self.terms.get(_ONE, None) is not None
                 and Fraction(self.terms[_ONE]) == Fraction(other))
        return self.vs == other.vs and _normterms(self.terms) == _normterms(other.terms)

    def __hash__(self):
        return hash(frozenset((m, Fraction(c)) for m, c in self.terms.items()))

    def is_zero(self):
        return not self.terms

    # -- structure queries ---------------------------------------------------

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(_mono_degree(m) for m in self.terms)

    def is_homogeneous(self):
        degs = {_mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, k):
        return SuperPolynomial(
            self.vs, {m: c for m, c in self.terms.items() if _mono_degree(m) == k})

    def parity(self):
        """0 or 1 for parity-homogeneous polynomials, None for mixed, 0 for zero."""
        ps = {m[1].bit_count() & 1 for m in self.terms}
        if not ps:
            return 0
        if len(ps) > 1:
            return None
        return ps.pop()

    def constant_term(self):
        return self.terms.get(_ONE, 0)

    def coefficient(self, mono):
        return self.terms.get(mono, 0)

    # -- calculus ------------------------------------------------------------

    def deriv_bos(self, i):
        out = {}
        for (bos, mask), c in self.terms.items():
            for pos, (idx, e) in enumerate(bos):
                if idx == i:
                    if e == 1:
                        nb = bos[:pos] + bos[pos + 1:]
                    else:
                        nb = bos[:pos] + ((idx, e - 1),) + bos[pos + 1:]
                    mono = (nb, mask)
                    s = out.get(mono, 0) + c * e
                    if s == 0:
                        out.pop(mono, None)
                    else:
                        out[mono] = s
                    break
        return SuperPolynomial(self.vs, out)

    def deriv_ferm(self, j):
        """Left derivative with respect to fermionic slot j."""
        bit = 1 << j
        out = {}
        for (bos, mask), c in self.terms.items():
            if not mask & bit:
                continue
            if (mask & (bit - 1)).bit_count() & 1:
                c = -c
            mono = (bos, mask ^ bit)
            s = out.get(mono, 0) + c
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return SuperPolynomial(self.vs, out)

    def deriv(self, var):
        """Derivative by printable variable name."""
        kind, idx = self.vs.lookup(var)
        return self.deriv_bos(idx) if kind == "b" else self.deriv_ferm(idx)

    def berezin(self, block):
        """Top fermionic derivative of a block, lowest slot first.

        Applies d/de_{2n} ... d/de_1 over the block's fermionic slots.  The
        conventional 1/pi**n normalization of flat integration is *not*
        included here; integration code accounts for it.
        """
        _, _, fo, fc = self.vs.block(block)
        out = self
        for j in range(fo, fo + fc):
            out = out.deriv_ferm(j)
        return out

    # -- substitution --------------------------------------------------------

    def substitute(self, images):
        """Replace variables by polynomials of the same parity.

        ``images``: dict mapping ('b'|'f', index) -> SuperPolynomial over a
        single target varspec.  Unmapped variables must exist in the target
        varspec under the same indices (identity images are filled in).
        """
        if not self.terms:
            # empty substitution target: need a varspec to hang the zero on
            vs2 = next(iter(images.values())).vs if images else self.vs
            return SuperPolynomial.zero(vs2)
        vs2 = next(iter(images.values())).vs if images else self.vs
        for (kind, idx), img in images.items():
            if kind == "f" and img.parity() not in (1,):
                raise ValueError("fermionic variable must map to an odd polynomial")
            if kind == "b" and img.parity() not in (0,):
                raise ValueError("bosonic variable must map to an even polynomial")
        bcache = {}
        out = SuperPolynomial.zero(vs2)
        for (bos, mask), c in self.terms.items():
            acc = SuperPolynomial.const(vs2, c)
            for idx, e in bos:
                key = (idx, e)
                img = bcache.get(key)
                if img is None:
                    base = images.get(("b", idx))
                    if base is None:
                        base = SuperPolynomial.bos_var(vs2, idx)
                    img = base ** e
                    bcache[key] = img
                acc = acc * img
            m = mask
            while m:
                low = m & -m
                j = low.bit_length() - 1
                img = images.get(("f", j))
                if img is None:
                    img = SuperPolynomial.ferm_var(vs2, j)
                acc = acc * img
                m ^= low
            out = out + acc
        return out

    def substitute_linear(self, S, block="x"):
        """Action of an invertible block matrix on the variables of one block.

        S is square of size (bos+ferm) of the block, parity preserving
        (block diagonal); each variable X_j is replaced by the linear form
        sum_k (S^{-1})[j][k] X_k.
        """
        from .exactmath import RatMatrix, rref

        bo, bc, fo, fc = self.vs.block(block)
        size = bc + fc
        if len(S) != size or any(len(r) != size for r in S):
            raise ValueError("matrix size does not match block")
        for i in range(size):
            for j in range(size):
                if S[i][j] != 0 and (i < bc) != (j < bc):
                    raise ValueError("matrix mixes parities")
        aug = RatMatrix.from_rows(
            [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(size)]
             for i, row in enumerate(S)], 2 * size)
        R, piv = rref(aug)
        if piv != list(range(size)):
            raise ValueError("matrix is not invertible")
        sinv = [[R.entry(i, size + j) for j in range(size)] for i in range(size)]
        images = {}
        for j in range(size):
            form = SuperPolynomial.zero(self.vs)
            for k in range(size):
                c = sinv[j][k]
                if c == 0:
                    continue
                if k < bc:
                    form = form + c * SuperPolynomial.bos_var(self.vs, bo + k)
                else:
                    form = form + c * SuperPolynomial.ferm_var(self.vs, fo + k - bc)
            key = ("b", bo + j) if j < bc else ("f", fo + j - bc)
            images[key] = form
        return self.substitute(images)

    # -- printing ------------------------------------------------------------

    def __repr__(self):
        return f"SuperPolynomial({poly_print(self)!r})"

    def sorted_terms(self):
        """Terms in the canonical deterministic order (graded, then exponents)."""
        def key(item):
            (bos, mask), _ = item
            dense = [0] * self.vs.nbos
            for i, e in bos:
                dense[i] = e
            return (_mono_degree((bos, mask)), dense, mask)
        return sorted(self.terms.items(), key=key)


def _normterms(terms):
    return {m: Fraction(c) for m, c in terms.items() if c != 0}


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def poly_print(f: SuperPolynomial) -> str:
    """Canonical text form: ascending variables, explicit '*', '^' for exp >= 2."""
    if not f.terms:
        return "0"
    pieces = []
    for (bos, mask), c in f.sorted_terms():
        c = Fraction(c)
        factors = []
        for i, e in bos:
            nm = f.vs.bos_names[i]
            factors.append(nm if e == 1 else f"{nm}^{e}")
        m = mask
        while m:
            low = m & -m
            factors.append(f.vs.ferm_names[low.bit_length() - 1])
            m ^= low
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign0, body0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


def poly_parse(text: str, vs: VarSpec) -> SuperPolynomial:
    """Parse the textual polynomial grammar against a varspec.

    expr := ['+'|'-'] term (('+'|'-') term)*
    term := element ('*' element)*
    element := rational | var ['^' posint]

    A fermionic variable raised to a power >= 2 yields the zero
    polynomial; unknown names and malformed syntax raise ParseError with
    the offending position.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind=None):
        nonlocal pos
        t = toks[pos]
        if kind is not None and t.kind != kind:
            raise ParseError(f"expected {kind}, found {t.text or 'end of input'}", t.pos)
        pos += 1
        return t

    def parse_rational(t):
        num = int(t.text)
        if peek().kind == "/":
            take("/")
            den_t = take("int")
            den = int(den_t.text)
            if den == 0:
                raise ParseError("zero denominator", den_t.pos)
            return Fraction(num, den)
        return num

    def parse_element():
        t = peek()
        if t.kind == "int":
            take()
            c = parse_rational(t)
            return SuperPolynomial.const(vs, c)
        if t.kind == "name":
            take()
            try:
                kind, idx = vs.lookup(t.text)
            except KeyError:
                raise ParseError(f"unknown variable {t.text!r}", t.pos) from None
            exp = 1
            if peek().kind == "^":
                take("^")
                e_t = take("int")
                exp = int(e_t.text)
                if exp < 1:
                    raise ParseError("exponent must be positive", e_t.pos)
            if kind == "b":
                return SuperPolynomial.bos_var(vs, idx, exp)
            if exp >= 2:
                return SuperPolynomial.zero(vs)
            return SuperPolynomial.ferm_var(vs, idx)
        raise ParseError(f"expected a number or variable, found {t.text or 'end of input'}", t.pos)

    def parse_term():
        acc = parse_element()
        while peek().kind == "*":
            take("*")
            acc = acc * parse_element()
        return acc

    sign = 1
    if peek().kind in "+-":
        sign = -1 if take().kind == "-" else 1
    total = parse_term() * sign
    while peek().kind in "+-":
        op = take().kind
        t = parse_term()
        total = total - t if op == "-" else total + t
    take("end")
    return total
