"""Named verification suites over a grid of variable signatures.

Every check is exact (rational arithmetic or a certified modular rank);
a suite result carries the counts and a minimal witness for the first few
failures.  The default grid covers positive, zero and negative even
superdimension, including the reducible window and the
non-completely-reducible branching regime.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exactmath import _modp_eliminate, CERT_PRIME
from .superalgebra import SuperPolynomial, poly_print
from .operators import (Metric, casimir_form, euler, laplacian,
                        laplace_beltrami, laplace_beltrami_bos,
                        laplace_beltrami_ferm, osp_generators,
                        r_squared_poly)
from .harmonic import (FischerObstruction, cached_varspec, certified_harmonic_dimension,
                       component_labels, decompose_hk, dim_hk_formula, dim_pk,
                       fischer, harmonics, monomial_basis_pk, _monomials, projector)
from .sphereint import (ScaledScalar, berezin_sphere_oracle, darboux_residual,
                        fischer_route_integral, pizzetti, sphere_bilinear)
from .reptheory import (branch_levels, big_algebra_closure, check_irreducible,
                        dim_Lk, is_window, maximality_and_indecomposability,
                        window_submodule)

DEFAULT_GRID = [(1, 1), (2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2), (6, 2)]


class SuiteResult:
    def __init__(self, name):
        self.name = name
        self.checks = 0
        self.failures = []
        self.details = {}

    @property
    def passed(self):
        return not self.failures

    def check(self, ok, witness):
        self.checks += 1
        if not ok:
            if len(self.failures) < 16:
                self.failures.append(witness if isinstance(witness, str) else witness())
            else:
                self.failures.append("...")

    def to_json(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures[:16],
            "details": self.details,
        }

    def __repr__(self):
        return f"SuiteResult({self.name}, passed={self.passed}, checks={self.checks})"


def suite_sl2(grid=None, kmax=6):
    """The three bracket identities of the quadratic operator triple, as
    exact operator identities on every monomial up to degree kmax."""
    out = SuiteResult("sl2")
    for (m, n) in grid or DEFAULT_GRID:
        vs = cached_varspec(m, n)
        M = m - 2 * n
        lap = laplacian(m, n, vs)
        r2 = r_squared_poly(m, n, vs)
        E = euler(m, n, vs)
        half = Fraction(1, 2)
        for k in range(0, kmax + 1):
            for mono in _monomials(m, n, k):
                u = SuperPolynomial(vs, {mono: 1})
                lhs1 = (lap(r2 * u) - r2 * lap(u)) * Fraction(1, 4)
                rhs1 = E(u) + Fraction(M, 2) * u
                out.check((lhs1 - rhs1).is_zero(),
                          lambda u=u, m=m, n=n: f"bracket1 ({m},{n}) {poly_print(u)}")
                eu = E(u) + Fraction(M, 2) * u
                lhs2 = (lap(eu) - (E(lap(u)) + Fraction(M, 2) * lap(u))) * half
                out.check((lhs2 - lap(u)).is_zero(),
                          lambda u=u, m=m, n=n: f"bracket2 ({m},{n}) {poly_print(u)}")
                lhs3 = (r2 * eu - (E(r2 * u) + Fraction(M, 2) * (r2 * u))) * half
                out.check((lhs3 + r2 * u).is_zero(),
                          lambda u=u, m=m, n=n: f"bracket3 ({m},{n}) {poly_print(u)}")
    return out


def suite_dims(grid=None, kmax=8):
    """Kernel dimension of the Laplacian against the closed form, plus the
    irreducible-top dimension identities in the reducible window."""
    out = SuiteResult("dims")
    for (m, n) in grid or DEFAULT_GRID:
        if m < 1:
            continue
        for k in range(0, kmax + 1):
            got = certified_harmonic_dimension(m, n, k)
            want = dim_hk_formula(m, n, k)
            out.check(got == want, f"dim kernel ({m},{n},{k}): {got} != formula {want}")
    # classical and derived spot values
    out.check(harmonics(3, 0, 2).dim == 5, "classical dim (3,0,2) != 5")
    out.check(harmonics(2, 1, 2).dim == 7, "derived dim (2,1,2) != 7")
    # window identity: the four-sum formula equals the kernel difference
    for (m, n, k) in [(2, 1, 2), (2, 2, 3), (2, 2, 4), (4, 2, 2)]:
        M = m - 2 * n
        lhs = dim_Lk(m, n, k)
        rhs = harmonics(m, n, k).dim - harmonics(m, n, 2 - M - k).dim
        out.check(lhs == rhs, f"window top-dim ({m},{n},{k}): {lhs} != {rhs}")
    return out


def suite_integration(grid=None, degmax=6):
    """Triple-route equality of the sphere integral on every monomial."""
    out = SuiteResult("integration")
    for (m, n) in grid or DEFAULT_GRID:
        if m < 1:
            continue
        vs = cached_varspec(m, n)
        M = m - 2 * n
        ladder_ok = not (M <= 0 and M % 2 == 0)
        for k in range(0, degmax + 1):
            for mono in _monomials(m, n, k):
                f = SuperPolynomial(vs, {mono: 1})
                a = pizzetti(f, m, n)
                b = berezin_sphere_oracle(f, m, n)
                out.check(a == b,
                          lambda f=f, m=m, n=n, a=a, b=b:
                          f"series vs oracle ({m},{n}) {poly_print(f)}: {a} != {b}")
                if ladder_ok:
                    c = fischer_route_integral(f, m, n)
                    out.check(a == c,
                              lambda f=f, m=m, n=n, a=a, c=c:
                              f"series vs ladder ({m},{n}) {poly_print(f)}: {a} != {c}")
    return out


def _orthosymplectic_samples(m, n, count, seed):
    """Deterministic rational matrices S with S^T g S = g (block Cayley)."""
    from .exactmath import RatMatrix, rref

    metric = Metric(m, n)
    rng = random.Random(seed)
    dim = m + 2 * n
    samples = []
    attempts = 0
    while len(samples) < count and attempts < 60 * count:
        attempts += 1
        A = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(m):
            for j in range(i + 1, m):
                c = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
                A[i][j] = c
                A[j][i] = -c
        # fermionic block: J^{-1} * (symmetric) is in the symplectic algebra
        sym = [[Fraction(rng.randint(-2, 2), rng.randint(1, 3))
                for _ in range(2 * n)] for _ in range(2 * n)]
        for i in range(2 * n):
            for j in range(i, 2 * n):
                sym[j][i] = sym[i][j]
        jinv = [[metric.g_inv[m + i][m + j] for j in range(2 * n)] for i in range(2 * n)]
        for i in range(2 * n):
            for j in range(2 * n):
                A[m + i][m + j] = sum(jinv[i][l] * sym[l][j] for l in range(2 * n))
        # S = (I - A)(I + A)^{-1}
        aug = RatMatrix.from_rows(
            [[(Fraction(1) if i == j else Fraction(0)) + A[i][j] for j in range(dim)]
             + [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)],
            2 * dim)
        R, piv = rref(aug)
        if piv != list(range(dim)):
            continue
        inv = [[R.entry(i, dim + j) for j in range(dim)] for i in range(dim)]
        S = [[sum((Fraction(int(i == l)) - A[i][l]) * inv[l][j] for l in range(dim))
              for j in range(dim)] for i in range(dim)]
        # exact check of the defining property
        g = metric.g
        good = all(
            sum(S[a][i] * g[a][b] * S[b][j] for a in range(dim) for b in range(dim)) == g[i][j]
            for i in range(dim) for j in range(dim))
        if good:
            samples.append(S)
    return samples


def suite_invariance(grid=None, degmax=3, seed=20240801):
    """Characterizing properties of the sphere integral: norm-square
    absorption, generator annihilation, cross-degree orthogonality of
    harmonics, and invariance under sampled rational metric-preserving
    matrices."""
    out = SuiteResult("invariance")
    rng = random.Random(seed)
    for (m, n) in grid or DEFAULT_GRID:
        if m < 1:
            continue
        vs = cached_varspec(m, n)
        metric = Metric(m, n)
        r2 = r_squared_poly(m, n, vs)
        gens = osp_generators(metric, vs)
        monos = []
        for k in range(0, degmax + 1):
            monos.extend(SuperPolynomial(vs, {mo: 1}) for mo in _monomials(m, n, k))
        for f in monos:
            out.check(pizzetti(r2 * f, m, n) == pizzetti(f, m, n),
                      lambda f=f, m=m, n=n: f"T(R2 f) != T(f) at ({m},{n}) {poly_print(f)}")
            for (ij, L) in gens:
                out.check(pizzetti(L(f), m, n).is_zero(),
                          lambda f=f, ij=ij, m=m, n=n:
                          f"T(L{ij} f) != 0 at ({m},{n}) {poly_print(f)}")
        # cross-degree orthogonality, exhaustive on small spaces, sampled above
        for k in range(0, 5):
            for l in range(0, k):
                Hk = harmonics(m, n, k)
                Hl = harmonics(m, n, l)
                if Hk.dim * Hl.dim <= 1600:
                    pairs = [(f, g) for f in Hk.basis for g in Hl.basis]
                else:
                    pairs = [(rng.choice(Hk.basis), rng.choice(Hl.basis))
                             for _ in range(40)]
                for f, g in pairs:
                    out.check(sphere_bilinear(f, g, m, n).is_zero(),
                              lambda m=m, n=n, k=k, l=l:
                              f"T(H_{k} H_{l}) != 0 at ({m},{n})")
        # matrix-group invariance for sampled rational matrices
        samples = _orthosymplectic_samples(m, n, 5, seed + 31 * m + 7 * n)
        out.check(len(samples) == 5, f"could not sample 5 matrices at ({m},{n})")
        probes = [f for f in monos[:dim_pk(m, n, 2) + m + 1] if not f.is_zero()]
        for S in samples:
            for f in probes:
                out.check(pizzetti(f.substitute_linear(S), m, n) == pizzetti(f, m, n),
                          lambda m=m, n=n, f=f:
                          f"matrix invariance fails at ({m},{n}) {poly_print(f)}")
            out.check((r2.substitute_linear(S) - r2).is_zero(),
                      lambda m=m, n=n: f"sampled matrix moves the norm square ({m},{n})")
    return out


def suite_casimir(grid=None, kmax=4):
    """Quadratic contraction of the generators equals the direct
    Laplace-Beltrami expression, on all monomials of degree <= kmax."""
    out = SuiteResult("casimir")
    for (m, n) in grid or DEFAULT_GRID:
        if m + 2 * n > 8:
            continue
        vs = cached_varspec(m, n)
        metric = Metric(m, n)
        lb = laplace_beltrami(m, n, vs)
        ca = casimir_form(metric, vs)
        for k in range(0, kmax + 1):
            for mono in _monomials(m, n, k):
                u = SuperPolynomial(vs, {mono: 1})
                out.check((lb(u) - ca(u)).is_zero(),
                          lambda u=u, m=m, n=n:
                          f"casimir mismatch ({m},{n}) on {poly_print(u)}")
    return out


def suite_fischer(grid=None, kmax=6, rank_limit=800):
    """Norm-square ladder pieces: dimensions always add up; the stacked
    pieces have full rank (certified mod p) on spaces of workable size;
    the obstruction is raised exactly for even nonpositive superdimension."""
    import numpy as np

    out = SuiteResult("fischer")
    for (m, n) in grid or DEFAULT_GRID:
        M = m - 2 * n
        for k in range(0, kmax + 1):
            if M <= 0 and M % 2 == 0:
                try:
                    fischer(m, n, k)
                    out.check(False, f"obstruction not raised at ({m},{n},{k})")
                except FischerObstruction:
                    out.check(True, "")
                continue
            pieces = fischer(m, n, k)
            total = sum(len(b) for _, b in pieces)
            out.check(total == dim_pk(m, n, k),
                      f"piece dims at ({m},{n},{k}): {total} != {dim_pk(m, n, k)}")
            if dim_pk(m, n, k) <= rank_limit:
                space = monomial_basis_pk(m, n, k)
                idx = space.mono_index()
                rows = []
                for _, basis in pieces:
                    for v in basis:
                        rows.append({idx[mo]: c for mo, c in v.terms.items()})
                from .exactmath import modp_rank
                r = modp_rank(rows, len(idx))
                out.check(r == total,
                          f"stacked rank at ({m},{n},{k}): {r} != {total}")
    return out


def _eig_checks(m, n, k, out):
    """Exact joint eigenvector verification for every component member."""
    vs = cached_varspec(m, n)
    lbb = laplace_beltrami_bos(m, n, vs)
    lbf = laplace_beltrami_ferm(m, n, vs)
    lap = laplacian(m, n, vs)
    comps = decompose_hk(m, n, k)
    total = 0
    pairs = set()
    for c in comps:
        pairs.add((c.eig_bos, c.eig_ferm))
        total += c.dim
        for v in c.basis:
            out.check(lap(v).is_zero(),
                      f"component member not harmonic at ({m},{n},{k})")
            out.check((lbb(v) - c.eig_bos * v).is_zero(),
                      f"bosonic eigen check fails at ({m},{n},{k},{(c.l, c.p, c.q)})")
            out.check((lbf(v) - c.eig_ferm * v).is_zero(),
                      f"fermionic eigen check fails at ({m},{n},{k},{(c.l, c.p, c.q)})")
    out.check(len(pairs) == len(comps),
              f"eigenvalue pairs collide at ({m},{n},{k})")
    return comps, total


def suite_decomp(grid=None, kmax=6, direct_limit=120):
    """Component decomposition of the harmonic spaces: dimension sums,
    harmonicity, and the projector identities.

    Projector identities on the union basis follow exactly from the
    verified eigenvector relations plus the scalar values of the factor
    products; on small spaces with at least three bosonic variables the
    operator products are additionally applied literally.
    """
    out = SuiteResult("decomp")
    for (m, n) in grid or DEFAULT_GRID:
        if m < 1:
            continue
        for k in range(0, kmax + 1):
            comps, total = _eig_checks(m, n, k, out)
            want = certified_harmonic_dimension(m, n, k)
            out.check(total == want,
                      f"component dims at ({m},{n},{k}): {total} != {want}")
            if m < 3:
                continue
            # scalar projector identities on the verified eigenbasis
            for c in comps:
                for c2 in comps:
                    val = _projector_scalar(m, n, k, c2, c)
                    expect = 1 if c2 is c else 0
                    out.check(val == expect,
                              f"projector scalar at ({m},{n},{k}) {(c2.l, c2.q)} on "
                              f"{(c.l, c.q)}: {val} != {expect}")
            if want <= direct_limit:
                # literal operator products on every basis member
                for c2 in comps:
                    Q = projector(m, n, k, c2.l, c2.q)
                    for c in comps:
                        for v in c.basis:
                            img = Q(v)
                            expect = v if c2 is c else SuperPolynomial.zero(v.vs)
                            out.check((img - expect).is_zero(),
                                      f"projector action at ({m},{n},{k})")
    return out


def _projector_scalar(m, n, k, target, comp):
    """Exact value of the target projector on the eigencomponent comp."""
    p0, s = target.p, target.q
    val = Fraction(1)
    for i in range(0, k + 1):
        if i == p0:
            continue
        num = comp.eig_bos + i * (m - 2 + i)
        den = (i - p0) * (i + p0 + m - 2)
        val *= Fraction(num, den)
    for j in range(0, min(n, k) + 1):
        if j == s:
            continue
        num = comp.eig_ferm + j * (-2 * n - 2 + j)
        den = (j - s) * (j + s - 2 * n - 2)
        val *= Fraction(num, den)
    return val


def suite_darboux(grid=None, degmax=5):
    """The radial wave equation residual of the spherical mean vanishes
    identically on every monomial of degree <= degmax."""
    out = SuiteResult("darboux")
    for (m, n) in grid or DEFAULT_GRID:
        if m < 1:
            continue
        vs = cached_varspec(m, n)
        for k in range(0, degmax + 1):
            for mono in _monomials(m, n, k):
                f = SuperPolynomial(vs, {mono: 1})
                res = darboux_residual(f, m, n)
                out.check(res.is_zero(),
                          lambda f=f, m=m, n=n:
                          f"darboux residual at ({m},{n}) {poly_print(f)}")
    return out


def suite_irreducibility(grid=None, kmax=6, seed=20240801):
    """Closure verdicts against the reducibility predicate, window
    submodules with exact dimensions, and the window maximality and
    indecomposability certificates."""
    out = SuiteResult("irreducibility")
    details = []
    for (m, n) in grid or DEFAULT_GRID:
        if m < 1:
            continue
        M = m - 2 * n
        for k in range(0, kmax + 1):
            rep = check_irreducible(m, n, k, seed=seed)
            out.check(rep["verdict_irreducible"] == rep["predicate_irreducible"],
                      f"verdict mismatch at ({m},{n},{k}): {rep['method']}")
            details.append({"m": m, "n": n, "k": k,
                            "dim": rep["dim"],
                            "irreducible": rep["verdict_irreducible"],
                            "method": rep["method"]})
            if is_window(m, n, k):
                wdim = rep.get("window_submodule_dim")
                want = dim_hk_formula(m, n, 2 - M - k)
                out.check(wdim == want,
                          f"window submodule dim at ({m},{n},{k}): {wdim} != {want}")
                mx = maximality_and_indecomposability(m, n, k, seed=seed)
                out.check(mx["outside_closures_whole"],
                          f"maximality fails at ({m},{n},{k})")
                out.check(mx["all_closures_contain_submodule"],
                          f"indecomposability fails at ({m},{n},{k})")
    out.details["cases"] = details
    return out


def suite_branching(grid=None, kmax=6):
    """Dimension identities of the one-variable-down restriction in both
    completely reducible regimes; the remaining regime is only flagged."""
    out = SuiteResult("branching")
    regimes = []
    for (m, n) in grid or DEFAULT_GRID:
        if m < 2:
            continue
        for k in range(0, kmax + 1):
            b = branch_levels(m, n, k)
            regimes.append({"m": m, "n": n, "k": k, "regime": b["regime"]})
            if b["levels"] is not None:
                out.check(b["dimension_identity"],
                          f"branching sum at ({m},{n},{k}): "
                          f"{b['sum_lower']} != {b['dim_upper']}")
            else:
                out.check(b["regime"] == "not_completely_reducible",
                          f"unexpected regime at ({m},{n},{k})")
    out.details["regimes"] = regimes
    return out


def suite_bigalgebra(points=((1, 1), (2, 1)), degree=3):
    """Supercommutator closure and dimension of the oscillator algebra."""
    out = SuiteResult("bigalgebra")
    for (m, n) in points:
        rep = big_algebra_closure(m, n, degree)
        out.check(rep["closure_holds"],
                  f"bracket closure fails at ({m},{n}): {rep['failures'][:3]}")
        out.check(rep["span_matches"],
                  f"span dimension at ({m},{n}): {rep['span_dimension']} != "
                  f"{rep['expected_dimension']}")
        out.check(rep["centralizer_holds"], f"centralizer fails at ({m},{n})")
        out.details[f"{m}|{2*n}"] = {
            "span": rep["span_dimension"], "expected": rep["expected_dimension"]}
    return out


SUITES = {
    "sl2": suite_sl2,
    "dims": suite_dims,
    "integration": suite_integration,
    "invariance": suite_invariance,
    "casimir": suite_casimir,
    "fischer": suite_fischer,
    "decomp": suite_decomp,
    "projectors": suite_decomp,
    "darboux": suite_darboux,
    "irreducibility": suite_irreducibility,
    "branching": suite_branching,
    "bigalgebra": suite_bigalgebra,
}


def run_suite(name, grid=None, kmax=None, seed=20240801):
    """Run one named suite (or 'all') with optional grid/degree overrides."""
    if name == "all":
        return [run_suite(s, grid=grid, kmax=kmax, seed=seed) for s in SUITES
                if s != "projectors"]
    fn = SUITES.get(name)
    if fn is None:
        raise KeyError(f"unknown suite {name!r}")
    kwargs = {}
    if fn is suite_bigalgebra:
        return fn() if grid is None else fn(points=tuple(grid))
    if grid is not None:
        kwargs["grid"] = grid
    if kmax is not None:
        if fn in (suite_integration, suite_darboux):
            kwargs["degmax"] = kmax
        else:
            kwargs["kmax"] = kmax
    if fn in (suite_invariance, suite_irreducibility):
        kwargs["seed"] = seed
    return fn(**kwargs)
