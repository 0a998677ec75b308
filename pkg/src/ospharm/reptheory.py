"""Module structure of the harmonic spaces under the invariance generators.

The work horse is an invariant-closure computation: starting from seed
vectors, generator images are accumulated into an exact echelon until the
span stops growing.  Closures decide irreducibility, exhibit the proper
submodule in the reducible window of even nonpositive superdimension, and
certify maximality and indecomposability there.

Three execution tiers keep this affordable while staying exact:

* small spaces run the closure with exact rational arithmetic;
* medium spaces run it modulo a prime; a full-rank closure mod p proves
  full rank over the rationals (rank can only drop under reduction), and
  anything short of full rank falls back to the exact engine;
* the largest spaces track closures through the joint eigencomponents of
  the two one-sided Laplace-Beltrami operators: a generator image with a
  nonzero exact projection onto a component pulls the whole component in,
  so the closure is the component-reachability set.  Every edge used is
  witnessed by an exact nonzero projection.

The reducible-window witnesses are always produced and verified with
exact rational arithmetic, whatever the tier.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb

from .exactmath import CERT_PRIME
from .superalgebra import SuperPolynomial
from .operators import Metric, matrix_of, osp_generators, oscillator_generators, \
    oscillator_bracket_sign, oscillator_dimension, laplacian, r_squared_poly, euler
from .harmonic import (GradedSpace, cached_varspec, component_labels,
                       decompose_hk, dim_hk_formula, dim_pk, harmonics,
                       monomial_basis_pk, projector, _lex_key)

EXACT_LIMIT = 36      # closure with exact rationals up to this module dimension
MODP_LIMIT = 200      # per-seed modular certificates up to this dimension


def is_window(m, n, k):
    """The reducible window: even nonpositive superdimension with
    2 - M/2 <= k <= 2 - M."""
    M = m - 2 * n
    return M <= 0 and M % 2 == 0 and 2 - M // 2 <= k <= 2 - M


def irreducible_predicate(m, n, k):
    return not is_window(m, n, k)


# ---------------------------------------------------------------------------
# sparse exact echelon over monomial keys
# ---------------------------------------------------------------------------

class PolyEchelon:
    """Echelon basis of a space of polynomials, rows keyed by leading
    monomial in the lexicographic order.  Partial (one-sided) reduction:
    enough for rank growth and membership."""

    def __init__(self, vs):
        self.vs = vs
        self.rows = {}   # lead key -> dict mono->coeff with lead coeff 1

    @property
    def dim(self):
        return len(self.rows)

    def _key(self, mono):
        return _lex_key(mono, self.vs)

    def reduce(self, f):
        terms = dict(f.terms)
        while terms:
            lead = max(terms, key=self._key)
            row = self.rows.get(self._key(lead))
            if row is None:
                return terms, lead
            c = terms[lead]
            for mo, rv in row.items():
                u = terms.get(mo, 0) - c * rv
                if u == 0:
                    terms.pop(mo, None)
                else:
                    terms[mo] = u
        return terms, None

    def insert(self, f):
        """Returns the reduced representative if f grew the span, else None."""
        terms, lead = self.reduce(f)
        if lead is None:
            return None
        c = terms[lead]
        if c != 1:
            inv = Fraction(1, 1) / c
            terms = {mo: v * inv for mo, v in terms.items()}
        self.rows[self._key(lead)] = terms
        return SuperPolynomial(self.vs, terms)

    def contains(self, f):
        terms, lead = self.reduce(f)
        return lead is None

    def normal_form(self, f):
        """Canonical representative modulo the row span: no monomial of the
        result is a row lead.  Linear in f."""
        terms = dict(f.terms)
        while True:
            cand = None
            for mo in terms:
                kk = self._key(mo)
                if kk in self.rows and (cand is None or kk > cand[1]):
                    cand = (mo, kk)
            if cand is None:
                return SuperPolynomial(self.vs, terms)
            mo, kk = cand
            c = terms[mo]
            for m2, rv in self.rows[kk].items():
                u = terms.get(m2, 0) - c * rv
                if u == 0:
                    terms.pop(m2, None)
                else:
                    terms[m2] = u


class SubmoduleReport:
    """Result of one invariant-closure computation."""

    def __init__(self, seeds, dim, space_dim, basis=None, method="exact"):
        self.seeds = seeds
        self.dim = dim
        self.space_dim = space_dim
        self.basis = basis
        self.method = method

    @property
    def is_whole(self):
        return self.dim == self.space_dim

    @property
    def is_proper(self):
        return 0 < self.dim < self.space_dim

    def __repr__(self):
        return (f"SubmoduleReport(dim={self.dim}/{self.space_dim}, "
                f"method={self.method})")


def invariant_closure(seeds, gens, space, method="exact"):
    """Smallest generator-invariant subspace containing the seeds.

    Iterated application of every generator with saturation in an exact
    echelon; terminates because the dimension grows strictly.  Stops early
    once the whole space is reached.
    """
    if method == "modp":
        dim = _modp_closure_dim(seeds, gens, space)
        if dim == space.dim:
            # full rank mod p certifies full rank over Q
            return SubmoduleReport(len(seeds), dim, space.dim, method="modp")
        return invariant_closure(seeds, gens, space, method="exact")
    ech = PolyEchelon(space.vs)
    queue = []
    for s in seeds:
        rep = ech.insert(s)
        if rep is not None:
            queue.append(rep)
    basis = list(queue)
    while queue and ech.dim < space.dim:
        v = queue.pop()
        for _, L in gens:
            w = L(v)
            if w.is_zero():
                continue
            rep = ech.insert(w)
            if rep is not None:
                queue.append(rep)
                basis.append(rep)
                if ech.dim == space.dim:
                    break
    return SubmoduleReport(len(seeds), ech.dim, space.dim, basis=basis,
                           method="exact")


class ModpAction:
    """The generator action on one graded space, materialized mod p.

    Symbolic work happens once: each generator (and, on request, each
    one-sided Laplace-Beltrami operator) becomes a sparse
    coordinate-triple matrix over the monomial support of the space.
    Closures and projections then run in vectorized modular arithmetic.
    Nonzero results certify exact nonzeroness; full ranks certify exact
    full rank.  Anything short of that must be re-derived exactly.
    """

    def __init__(self, space, gens, p=CERT_PRIME):
        import numpy as np

        self.np = np
        self.space = space
        self.p = p
        self.idx = space.mono_index()
        self.width = len(self.idx)
        self.gen_mats = [self._op_coo(L) for _, L in gens]
        self._basis_mat = None

    def _frac_mod(self, c):
        p = self.p
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ArithmeticError("denominator divisible by the certificate prime")
        return (c.numerator * pow(c.denominator, p - 2, p)) % p

    def _op_coo(self, op):
        np = self.np
        rows, cols, vals = [], [], []
        for mono, j in self.idx.items():
            img = op(SuperPolynomial(self.space.vs, {mono: 1}))
            for mo, c in img.terms.items():
                i = self.idx.get(mo)
                if i is None:
                    raise ValueError("operator leaves the space support")
                rows.append(i)
                cols.append(j)
                vals.append(self._frac_mod(c))
        return (np.asarray(rows, dtype=np.int64),
                np.asarray(cols, dtype=np.int64),
                np.asarray(vals, dtype=np.int64))

    def coo_apply(self, coo, v):
        np = self.np
        rows, cols, vals = coo
        out = np.zeros(self.width, dtype=np.int64)
        if rows.size:
            np.add.at(out, rows, (vals * v[cols]) % self.p)
        return out % self.p

    def vec_of(self, f):
        np = self.np
        v = np.zeros(self.width, dtype=np.int64)
        for mono, c in f.terms.items():
            v[self.idx[mono]] = self._frac_mod(c)
        return v

    def basis_matrix(self):
        if self._basis_mat is None:
            np = self.np
            mat = np.zeros((self.space.dim, self.width), dtype=np.int64)
            for i, b in enumerate(self.space.basis):
                mat[i] = self.vec_of(b)
            self._basis_mat = mat
        return self._basis_mat

    def closure_dim(self, seed_vecs):
        """Dimension mod p of the invariant closure of the seeds (a lower
        bound for the exact dimension; equality certified when full)."""
        np = self.np
        p = self.p
        cap = self.space.dim
        arr = np.zeros((cap, self.width), dtype=np.int64)
        pcols = np.zeros(cap, dtype=np.int64)
        rank = 0
        queue = []

        def insert(vec):
            nonlocal rank
            if rank:
                c = vec[pcols[:rank]]
                if c.any():
                    vec = (vec - c @ arr[:rank]) % p
            nz = np.nonzero(vec)[0]
            if nz.size == 0:
                return False
            pos = int(nz[0])
            inv = pow(int(vec[pos]), p - 2, p)
            vec = (vec * inv) % p
            if rank:
                col = arr[:rank, pos].copy()
                if col.any():
                    arr[:rank] = (arr[:rank] - col[:, None] * vec[None, :]) % p
            arr[rank] = vec
            pcols[rank] = pos
            rank += 1
            queue.append(vec)
            return True

        for s in seed_vecs:
            insert(s % p)
        while queue and rank < cap:
            v = queue.pop()
            for coo in self.gen_mats:
                w = self.coo_apply(coo, v)
                if w.any():
                    insert(w)
                    if rank == cap:
                        break
        return rank


def _modp_closure_dim(seeds, gens, space, p=CERT_PRIME):
    action = ModpAction(space, gens, p)
    return action.closure_dim([action.vec_of(s) for s in seeds])


# ---------------------------------------------------------------------------
# component-reachability closures for the largest spaces
# ---------------------------------------------------------------------------

class ComponentGraph:
    """Reachability structure of the eigencomponents under the generators.

    Edges are only ever added with a nonzero projection witness (a nonzero
    value mod p certifies exact nonzeroness), so reachability
    under-approximates closures; the scan keeps going until every start
    component reaches everything (the expected outcome away from the
    reducible window) or the supply of witnesses is exhausted.
    """

    def __init__(self, m, n, k, space=None, action=None):
        if m < 3:
            raise ValueError("component route needs m >= 3 projectors")
        self.m, self.n, self.k = m, n, k
        self.comps = decompose_hk(m, n, k)
        self.nc = len(self.comps)
        self.edges = {i: {i} for i in range(self.nc)}
        self.complete = False
        self.action = action
        self.space = space
        self._proj_factors = None

    def _factors(self):
        """Projector factor data: per component, the shifted one-sided
        Laplace-Beltrami products as mod-p sparse matrices."""
        if self._proj_factors is None:
            from .operators import laplace_beltrami_bos, laplace_beltrami_ferm
            act = self.action
            vs = self.space.vs
            lbb = act._op_coo(laplace_beltrami_bos(self.m, self.n, vs))
            lbf = act._op_coo(laplace_beltrami_ferm(self.m, self.n, vs))
            per_comp = []
            for c in self.comps:
                p0, s = c.p, c.q
                fac = []
                for i in range(0, self.k + 1):
                    if i != p0:
                        fac.append((lbb, i * (self.m - 2 + i)))
                for j in range(0, min(self.n, self.k) + 1):
                    if j != s:
                        fac.append((lbf, j * (-2 * self.n - 2 + j)))
                per_comp.append(fac)
            self._proj_factors = per_comp
        return self._proj_factors

    def _project_nonzero(self, cj, w_vec):
        """Mod-p test that the component-cj projection of w is nonzero."""
        act = self.action
        p = act.p
        v = w_vec
        for coo, shift in self._factors()[cj]:
            v = (act.coo_apply(coo, v) + (shift % p) * v) % p
            if not v.any():
                return False
        return True

    def _reach(self, starts):
        seen = set(starts)
        stack = list(starts)
        while stack:
            u = stack.pop()
            for v in self.edges[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def saturate(self, gens):
        """Scan generator images for projection witnesses until every
        component reaches every other one; returns True on success."""
        if self.complete:
            return True
        act = self.action
        max_depth = max(c.dim for c in self.comps)
        vec_cache = {}

        def comp_vec(ci, depth):
            key = (ci, depth)
            if key not in vec_cache:
                vec_cache[key] = act.vec_of(self.comps[ci].basis[depth])
            return vec_cache[key]

        for depth in range(max_depth):
            for ci, c in enumerate(self.comps):
                if depth >= c.dim:
                    continue
                reach_ci = self._reach([ci])
                if len(reach_ci) == self.nc:
                    continue
                v = comp_vec(ci, depth)
                for gi in range(len(act.gen_mats)):
                    w = act.coo_apply(act.gen_mats[gi], v)
                    if not w.any():
                        continue
                    for cj in range(self.nc):
                        # an edge into the reachable set helps no start
                        # vertex, skip the projection work
                        if cj in reach_ci:
                            continue
                        if self._project_nonzero(cj, w):
                            self.edges[ci].add(cj)
                            reach_ci = self._reach([ci])
                            if len(reach_ci) == self.nc:
                                break
                    if len(reach_ci) == self.nc:
                        break
                if all(len(self._reach([i])) == self.nc for i in range(self.nc)):
                    self.complete = True
                    return True
        self.complete = all(
            len(self._reach([i])) == self.nc for i in range(self.nc))
        return self.complete

    def closure_dim(self, start_components):
        reach = self._reach(start_components)
        return sum(self.comps[i].dim for i in reach)


def _component_signature_of_coords(comps, coords):
    """Nonzero component blocks of a coordinate vector over the union basis."""
    out = []
    off = 0
    for i, c in enumerate(comps):
        if any(x != 0 for x in coords[off:off + c.dim]):
            out.append(i)
        off += c.dim
    return out


# ---------------------------------------------------------------------------
# module realizations and irreducibility
# ---------------------------------------------------------------------------

class ModuleRealization:
    """A graded space together with the generator action (and matrices on
    demand for spaces of workable size)."""

    def __init__(self, space, gens, metric):
        self.space = space
        self.gens = gens
        self.metric = metric
        self._matrices = None

    def matrices(self):
        if self._matrices is None:
            self._matrices = [((i, j), matrix_of(L, self.space))
                              for (i, j), L in self.gens]
        return self._matrices

    def __repr__(self):
        return f"ModuleRealization(dim={self.space.dim}, gens={len(self.gens)})"


def realize_hk(m, n, k):
    metric = Metric(m, n)
    vs = cached_varspec(m, n)
    return ModuleRealization(harmonics(m, n, k), osp_generators(metric, vs), metric)


def _random_seeds(space, count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        f = SuperPolynomial.zero(space.vs)
        while f.is_zero():
            f = SuperPolynomial.zero(space.vs)
            for b in space.basis:
                c = rng.randint(-3, 3)
                if c:
                    f = f + c * b
        out.append(f)
    return out


def window_submodule(m, n, k):
    """The invariant subspace R^(2k+M-2) H_{2-M-k} inside H_k (window only).

    Verified exactly: members are harmonic of degree k, the space is
    proper, and every generator maps it into itself.
    """
    M = m - 2 * n
    if not is_window(m, n, k):
        raise ValueError("outside the reducible window")
    vs = cached_varspec(m, n)
    power = k + M // 2 - 1
    r2 = r_squared_poly(m, n, vs)
    r2p = SuperPolynomial.const(vs, 1)
    for _ in range(power):
        r2p = r2p * r2
    inner = harmonics(m, n, 2 - M - k)
    basis = [r2p * h for h in inner.basis]
    space = GradedSpace(vs, k, basis, label=f"W({m}|{2*n},k={k})")
    lap = laplacian(m, n, vs)
    ech = PolyEchelon(vs)
    for b in basis:
        if not lap(b).is_zero():
            raise AssertionError("window submodule member is not harmonic")
        if ech.insert(b) is None:
            raise AssertionError("window submodule basis is dependent")
    metric = Metric(m, n)
    for _, L in osp_generators(metric, vs):
        for b in basis:
            if not ech.contains(L(b)):
                raise AssertionError("window submodule is not invariant")
    return space


def check_irreducible(m, n, k, extra_seeds=20, seed=20240801):
    """Closure-based irreducibility verdict for the degree-k harmonics.

    Seeds every basis vector plus deterministic random vectors (plus, in
    the window, the constructed submodule vectors); the verdict is
    reducible exactly when some closure is proper.  Returns a report dict
    with the verdict, the expected predicate, per-tier methods and the
    witness submodule if one exists.
    """
    metric = Metric(m, n)
    vs = cached_varspec(m, n)
    space = harmonics(m, n, k)
    gens = osp_generators(metric, vs)
    window = is_window(m, n, k)
    report = {
        "m": m, "n": n, "k": k, "dim": space.dim,
        "window": window,
        "predicate_irreducible": irreducible_predicate(m, n, k),
    }
    if space.dim == 0:
        report.update(verdict_irreducible=True, method="empty", closures=[])
        return report

    proper = []          # (seed label, closure dim)
    witness = None

    if window:
        wsub = window_submodule(m, n, k)
        report["window_submodule_dim"] = wsub.dim
        rep = invariant_closure([wsub.basis[0]], gens, space, method="exact")
        if not rep.is_proper:
            raise AssertionError("window seed failed to close properly")
        proper.append(("window-seed", rep.dim))
        witness = wsub
        report["window_seed_closure_dim"] = rep.dim

    seeds = list(space.basis) + _random_seeds(space, extra_seeds, seed)
    if space.dim <= EXACT_LIMIT:
        method = "exact"
        for i, s in enumerate(seeds):
            rep = invariant_closure([s], gens, space, method="exact")
            if rep.is_proper:
                proper.append((f"seed{i}", rep.dim))
    elif space.dim <= MODP_LIMIT or m < 3:
        method = "modp"
        action = ModpAction(space, gens)
        for i, s in enumerate(seeds):
            dim_p = action.closure_dim([action.vec_of(s)])
            if dim_p < space.dim:
                # inconclusive modular result, settle it exactly
                rep = invariant_closure([s], gens, space, method="exact")
                if rep.is_proper:
                    proper.append((f"seed{i}", rep.dim))
    else:
        method = "components"
        action = ModpAction(space, gens)
        graph = ComponentGraph(m, n, k, space=space, action=action)
        union = [v for c in graph.comps for v in c.basis]
        if len(union) != space.dim:
            raise AssertionError("component union does not match the space dimension")
        if not all(a is b for a, b in zip(union, space.basis)):
            # the space basis came from the raw kernel; certify that the
            # union of component bases spans it (full rank mod p)
            from .exactmath import _modp_eliminate
            import numpy as np
            mat = np.stack([action.vec_of(v) for v in union])
            if _modp_eliminate(mat % action.p, action.p) != space.dim:
                raise AssertionError("component union rank certificate failed")
        ok = graph.saturate(gens)
        if not ok:
            # reachability did not cover everything: fall back per seed
            method = "components+modp"
            for i, s in enumerate(seeds):
                dim_p = action.closure_dim([action.vec_of(s)])
                if dim_p < space.dim:
                    rep = invariant_closure([s], gens, space, method="exact")
                    if rep.is_proper:
                        proper.append((f"seed{i}", rep.dim))
        else:
            # every component reaches every other one, so any nonzero
            # vector (it has a nonzero projection somewhere since the
            # components span) generates the whole space; seeds are
            # nonzero by construction
            for s in seeds:
                if s.is_zero():
                    raise AssertionError("zero seed in closure scan")
            # cross-check sampled closures through the modular engine
            # (skipped at the very largest dimensions, where the verdict
            # already rests on the exact union and edge certificates)
            if space.dim <= 1200:
                rng = random.Random(seed ^ 0x5EED)
                for s in rng.sample(space.basis, min(2, space.dim)):
                    if action.closure_dim([action.vec_of(s)]) != space.dim:
                        raise AssertionError("modular cross-check contradicts reachability")
    report["method"] = method
    report["proper_closures"] = proper
    # reducible exactly when some closure came out proper; in the window the
    # verified submodule seed guarantees one
    report["verdict_irreducible"] = not proper
    if witness is not None:
        report["witness_dim"] = witness.dim
        report["witness_expected_dim"] = dim_hk_formula(m, n, 2 - (m - 2 * n) - k)
    return report


def maximality_and_indecomposability(m, n, k, extra_seeds=20, seed=20240801):
    """Window-case structure: the constructed submodule is maximal (every
    basis vector outside closes to everything) and contained in every
    sampled nonzero closure (no invariant complement)."""
    M = m - 2 * n
    if not is_window(m, n, k):
        space = harmonics(m, n, k)
        return {"window": False, "maximal_submodule_dim": 0,
                "space_dim": space.dim}
    metric = Metric(m, n)
    vs = cached_varspec(m, n)
    space = harmonics(m, n, k)
    gens = osp_generators(metric, vs)
    wsub = window_submodule(m, n, k)
    wech = PolyEchelon(vs)
    for b in wsub.basis:
        wech.insert(b)
    outside_whole = True
    contains_w = True
    checked_outside = 0
    for b in space.basis:
        if wech.contains(b):
            continue
        checked_outside += 1
        rep = invariant_closure([b], gens, space, method="exact")
        if not rep.is_whole:
            outside_whole = False
    for s in list(space.basis) + _random_seeds(space, extra_seeds, seed):
        rep = invariant_closure([s], gens, space, method="exact")
        cech = PolyEchelon(vs)
        for v in rep.basis:
            cech.insert(v)
        if not all(cech.contains(w) for w in wsub.basis):
            contains_w = False
    return {
        "window": True,
        "space_dim": space.dim,
        "maximal_submodule_dim": wsub.dim,
        "basis_vectors_outside": checked_outside,
        "outside_closures_whole": outside_whole,
        "all_closures_contain_submodule": contains_w,
    }


# ---------------------------------------------------------------------------
# dimensions and branching
# ---------------------------------------------------------------------------

def _combz(a, b):
    if a < 0 or b < 0 or a < b:
        return 0
    return comb(a, b)


def dim_Lk(m, n, k):
    """Dimension of the irreducible top of the degree-k harmonics.

    Outside the reducible window this is the harmonic dimension itself; in
    the window the two correction sums remove the unique submodule.  The
    m = 1 case reduces to the harmonic dimension (always irreducible
    there).
    """
    if m < 1:
        raise ValueError("needs at least one bosonic variable")
    if k < 0:
        return 0
    M = m - 2 * n
    base = dim_hk_formula(m, n, k)
    if m == 1 or not is_window(m, n, k):
        return base
    third = sum(comb(2 * n, i) * _combz(2 * n - k - i - 1, m - 1)
                for i in range(0, min(-M - k, 2 * n) + 1)) if -M - k >= 0 else 0
    fourth = sum(comb(2 * n, i) * _combz(2 * n - k - i + 1, m - 1)
                 for i in range(0, min(2 - M - k, 2 * n) + 1)) if 2 - M - k >= 0 else 0
    return base + third - fourth


def branch_levels(m, n, k):
    """Restriction of the degree-k module to one bosonic direction fewer.

    Returns a dict with the regime ('full', 'truncated' or
    'not_completely_reducible'), the level range when defined, and the
    exact dimension identity checked in the reducible regimes.
    """
    if m < 2:
        raise ValueError("branching needs at least two bosonic variables")
    M = m - 2 * n
    out = {"m": m, "n": n, "k": k, "M": M}
    if M > 1:
        regime, levels = "full", list(range(0, k + 1))
    elif M % 2 != 0:  # odd M <= 1
        if k < 2 + (1 - M) // 2:
            regime, levels = "full", list(range(0, k + 1))
        else:
            regime, levels = "not_completely_reducible", None
    else:  # even M <= 0
        if 2 - M // 2 <= k <= 2 - M:
            regime, levels = "truncated", list(range(3 - M - k, k + 1))
        else:
            regime, levels = "full", list(range(0, k + 1))
    out["regime"] = regime
    out["levels"] = levels
    if levels is not None:
        total = sum(dim_Lk(m - 1, n, l) for l in levels)
        out["sum_lower"] = total
        out["dim_upper"] = dim_Lk(m, n, k)
        out["dimension_identity"] = total == out["dim_upper"]
    return out


# ---------------------------------------------------------------------------
# quotients by norm-square multiples
# ---------------------------------------------------------------------------

class QuotientRealization:
    """The degree-k polynomials modulo norm-square multiples, with the
    induced generator matrices on a complement-coordinate basis.

    Representatives are the monomials that are not leading monomials of
    the subspace echelon; the canonical projection is the echelon normal
    form, which is linear, so the induced action is well defined.
    """

    def __init__(self, m, n, k):
        if m == 0:
            raise ValueError("needs at least one bosonic variable")
        self.m, self.n, self.k = m, n, k
        vs = cached_varspec(m, n)
        self.vs = vs
        metric = Metric(m, n)
        r2 = r_squared_poly(m, n, vs)
        self.sub_ech = PolyEchelon(vs)
        if k >= 2:
            for u in monomial_basis_pk(m, n, k - 2, vs).basis:
                self.sub_ech.insert(r2 * u)
        self.sub_dim = self.sub_ech.dim
        pk = monomial_basis_pk(m, n, k, vs)
        reps = [b for b in pk.basis
                if self.sub_ech._key(next(iter(b.terms))) not in self.sub_ech.rows]
        self.space = GradedSpace(vs, k, reps, label=f"P{k}/R2P{k-2}")
        self.gens = osp_generators(metric, vs)
        assert self.space.dim == dim_pk(m, n, k) - dim_pk(m, n, k - 2)

    def reduce(self, f):
        return self.sub_ech.normal_form(f)

    def gen_action(self):
        """Induced generators as operations on reduced representatives."""
        return [((i, j), _QuotOp(self, L)) for (i, j), L in self.gens]

    def matrices(self):
        return [(lbl, matrix_of(op, self.space)) for lbl, op in self.gen_action()]


class _QuotOp:
    def __init__(self, quot, L):
        self.quot = quot
        self.L = L
        self.shift = 0
        self.parity = L.parity

    def __call__(self, f):
        return self.quot.reduce(self.L(f))


def quotient_module(m, n, k):
    return QuotientRealization(m, n, k)


# ---------------------------------------------------------------------------
# the enveloping oscillator algebra closure
# ---------------------------------------------------------------------------

def _op_vector(op, domain_basis):
    """Flattened sparse vector of an operator over a domain basis."""
    vec = {}
    for j, b in enumerate(domain_basis):
        img = op(b)
        for mono, c in img.terms.items():
            vec[(j, mono)] = c
    return vec


class _SparseEchelon:
    """Echelon over arbitrary orderable sparse keys (for operator vectors)."""

    def __init__(self):
        self.rows = {}

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        vec = dict(vec)
        while vec:
            lead = max(vec)
            row = self.rows.get(lead)
            if row is None:
                return vec, lead
            c = vec[lead]
            for kk, rv in row.items():
                u = vec.get(kk, 0) - c * rv
                if u == 0:
                    vec.pop(kk, None)
                else:
                    vec[kk] = u
        return vec, None

    def insert(self, vec):
        vec, lead = self.reduce(vec)
        if lead is None:
            return False
        c = vec[lead]
        if c != 1:
            inv = Fraction(1, 1) / c
            vec = {kk: v * inv for kk, v in vec.items()}
        self.rows[lead] = vec
        return True

    def contains(self, vec):
        _, lead = self.reduce(vec)
        return lead is None


def big_algebra_closure(m, n, d):
    """Supercommutator closure of the oscillator generators on low degrees.

    Builds all generators on the polynomials of degree <= d, checks that
    every pairwise supercommutator stays in their exact span, that the
    span has the dimension of the big orthosymplectic algebra, and that
    the invariance generators together with the norm square, the Laplacian
    and the shifted Euler operator centralize each other as expected.
    """
    vs = cached_varspec(m, n)
    metric = Metric(m, n)
    domain = []
    for k in range(0, d + 1):
        domain.extend(monomial_basis_pk(m, n, k, vs).basis)
    gens = oscillator_generators(m, n, vs)
    ech = _SparseEchelon()
    vecs = []
    for label, parity, op in gens:
        v = _op_vector(op, domain)
        vecs.append((label, parity, op, v))
        ech.insert(v)
    span_dim = ech.dim
    expected = oscillator_dimension(m, n)
    closure_ok = True
    failures = []
    for a in range(len(gens)):
        la, pa, opa, _ = vecs[a]
        for b in range(a, len(gens)):
            lb, pb, opb, _ = vecs[b]
            sign = -1 if oscillator_bracket_sign(pa, pb) else 1

            def comm(f, opa=opa, opb=opb, sign=sign):
                return opa(opb(f)) - sign * opb(opa(f))
            v = _op_vector(comm, domain)
            if v and not ech.contains(v):
                closure_ok = False
                failures.append((la, lb))
    # centralizer block: invariance generators commute with the three
    # quadratic operators of the dual partner
    lap = laplacian(m, n, vs)
    r2 = r_squared_poly(m, n, vs)
    E = euler(m, n, vs)
    M = m - 2 * n
    central_ok = True
    for _, L in osp_generators(metric, vs):
        for f in domain:
            if not (L(lap(f)) - lap(L(f))).is_zero():
                central_ok = False
            if not (L(r2 * f) - r2 * L(f)).is_zero():
                central_ok = False
            half = E(f) + Fraction(M, 2) * f
            if not (L(half) - (E(L(f)) + Fraction(M, 2) * L(f))).is_zero():
                central_ok = False
    return {
        "m": m, "n": n, "degree": d,
        "generator_count": len(gens),
        "span_dimension": span_dim,
        "expected_dimension": expected,
        "span_matches": span_dim == expected,
        "closure_holds": closure_ok,
        "failures": failures,
        "centralizer_holds": central_ok,
    }
