"""Command line interface.

Subcommands expose construction, integration, decomposition and
verification with machine-readable output.  Exit codes: 0 success, 1
verification failure or domain obstruction, 2 usage or parse error.
Output is deterministic for identical invocations: keys are sorted,
orderings fixed, the sampling seed defaults to a constant, and wall-clock
timing is only attached when explicitly requested.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .superalgebra import ParseError, poly_parse, poly_print
from .harmonic import (FischerObstruction, cached_varspec, certified_harmonic_dimension,
                       decompose_hk, dim_hk_formula, dim_pk, fischer, harmonics)
from .sphereint import (ScaledScalar, berezin_sphere_oracle, darboux_residual,
                        fischer_route_integral, pizzetti, sphere_mean)
from .reptheory import branch_levels, dim_Lk, is_window
from .suites import DEFAULT_GRID, SUITES, run_suite

SCHEMA_VERSION = 1


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _nonneg(value, label):
    try:
        v = int(value)
    except (TypeError, ValueError):
        raise CliError(f"{label} must be an integer", 2) from None
    if v < 0:
        raise CliError(f"{label} must be nonnegative", 2)
    return v


def _parse_grid(text):
    if text is None or text == "default":
        return list(DEFAULT_GRID)
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        bits = part.split(":")
        if len(bits) != 2:
            raise CliError(f"bad grid entry {part!r}; use m:n,m:n", 2)
        out.append((_nonneg(bits[0], "grid m"), _nonneg(bits[1], "grid n")))
    if not out:
        raise CliError("empty grid", 2)
    return out


def _scaled_json(s: ScaledScalar):
    return s.to_json()


def _scaled_text(s: ScaledScalar):
    if s.is_zero():
        return "0"
    coeff = str(s.coeff)
    if s.pi_exponent == 0:
        return coeff
    return f"{coeff}*pi^{s.pi_exponent}"


def _approx_text(s: ScaledScalar):
    return f"{s.approx():.12g} (approximate)"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_dim(args):
    m, n, k = args.m, args.n, args.k
    if k is None:
        raise CliError("--k is required", 2)
    result = {
        "dim_Pk": dim_pk(m, n, k),
        "window": bool(m >= 1 and is_window(m, n, k)),
    }
    if m == 0:
        result["dim_Hk_formula"] = "n/a"
        result["dim_Hk"] = harmonics(m, n, k).dim
    else:
        result["dim_Hk_formula"] = dim_hk_formula(m, n, k)
        result["dim_Hk"] = certified_harmonic_dimension(m, n, k)
        result["dim_Lk"] = dim_Lk(m, n, k) if m >= 1 else None
    return {"results": result}, 0


def _parse_poly_arg(args):
    if args.poly is None:
        raise CliError("--poly is required", 2)
    vs = cached_varspec(args.m, args.n)
    try:
        return poly_parse(args.poly, vs)
    except ParseError as e:
        raise CliError(f"polynomial parse error: {e}", 2) from None


def cmd_pizzetti(args):
    if args.m == 0:
        raise CliError("sphere integration needs at least one bosonic variable", 1)
    f = _parse_poly_arg(args)
    val = pizzetti(f, args.m, args.n)
    oracle = berezin_sphere_oracle(f, args.m, args.n)
    result = {
        "integral": _scaled_json(val),
        "oracle": _scaled_json(oracle),
        "routes_agree": val == oracle,
    }
    M = args.m - 2 * args.n
    if not (M <= 0 and M % 2 == 0):
        ladder = fischer_route_integral(f, args.m, args.n)
        result["ladder"] = _scaled_json(ladder)
        result["routes_agree"] = result["routes_agree"] and val == ladder
    code = 0 if result["routes_agree"] else 1
    return {"results": result}, code


def cmd_decompose(args):
    m, n, k = args.m, args.n, args.k
    if k is None:
        raise CliError("--k is required", 2)
    if m == 0:
        raise CliError("decomposition needs at least one bosonic variable", 1)
    comps = decompose_hk(m, n, k)
    rows = [{"l": c.l, "p": c.p, "q": c.q, "dim": c.dim} for c in comps]
    total = sum(c.dim for c in comps)
    return {"results": {
        "components": rows,
        "total": total,
        "dim_Hk": certified_harmonic_dimension(m, n, k),
        "consistent": total == certified_harmonic_dimension(m, n, k),
    }}, 0


def cmd_fischer(args):
    m, n, k = args.m, args.n, args.k
    if k is None:
        raise CliError("--k is required", 2)
    try:
        pieces = fischer(m, n, k)
    except FischerObstruction as e:
        raise CliError(str(e), 1) from None
    rows = [{"j": j, "dim": len(basis)} for j, basis in pieces]
    return {"results": {
        "pieces": rows,
        "total": sum(r["dim"] for r in rows),
        "dim_Pk": dim_pk(m, n, k) if m else None,
    }}, 0


def cmd_mean(args):
    if args.m == 0:
        raise CliError("the spherical mean needs at least one bosonic variable", 1)
    f = _parse_poly_arg(args)
    mr = sphere_mean(f, args.m, args.n)
    res = darboux_residual(f, args.m, args.n)
    result = {
        "mean_poly": poly_print(mr.poly),
        "unit": _scaled_json(mr.unit),
        "darboux_residual": poly_print(res),
    }
    return {"results": result}, 0 if res.is_zero() else 1


def cmd_branch(args):
    m, n, k = args.m, args.n, args.k
    if k is None:
        raise CliError("--k is required", 2)
    if m < 2:
        raise CliError("branching needs at least two bosonic variables", 1)
    b = branch_levels(m, n, k)
    code = 0
    if b["levels"] is not None and not b["dimension_identity"]:
        code = 1
    return {"results": b}, code


def cmd_verify(args):
    name = args.suite
    if name != "all" and name not in SUITES:
        raise CliError(f"unknown suite {name!r}; choose from "
                       f"{sorted(SUITES) + ['all']}", 2)
    grid = _parse_grid(args.grid)
    if args.m is not None or args.n is not None:
        if args.m is None or args.n is None:
            raise CliError("--m and --n must be given together", 2)
        grid = [(args.m, args.n)]
    results = run_suite(name, grid=grid, kmax=args.kmax, seed=args.seed)
    if not isinstance(results, list):
        results = [results]
    payload = {"results": [r.to_json() for r in results]}
    code = 0 if all(r.passed for r in results) else 1
    return payload, code


COMMANDS = {
    "dim": (cmd_dim, "dimensions of the graded and harmonic spaces"),
    "pizzetti": (cmd_pizzetti, "sphere integral of a polynomial, all routes"),
    "decompose": (cmd_decompose, "eigencomponent decomposition of harmonics"),
    "fischer": (cmd_fischer, "norm-square ladder pieces of one degree"),
    "mean": (cmd_mean, "spherical mean and its radial wave residual"),
    "branch": (cmd_branch, "restriction to one bosonic variable fewer"),
    "verify": (cmd_verify, "run a named verification suite over a grid"),
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ospharm",
        description="exact harmonic analysis in commuting and anticommuting variables")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--m", type=int, default=None, help="bosonic variable count")
        sp.add_argument("--n", type=int, default=None, help="fermionic pair count")
        sp.add_argument("--k", type=int, default=None, help="degree")
        sp.add_argument("--kmax", type=int, default=None, help="degree bound for suites")
        sp.add_argument("--poly", type=str, default=None,
                        help="polynomial text, e.g. 'x1^2*e1*e2 - 3/2*x1'")
        sp.add_argument("--grid", type=str, default=None,
                        help="'default' or inline 'm:n,m:n'")
        sp.add_argument("--format", dest="fmt", choices=["json", "csv", "text"],
                        default="json")
        sp.add_argument("--seed", type=int, default=20240801)
        sp.add_argument("--timing", action="store_true",
                        help="attach wall-clock timing (breaks byte determinism)")
        if name == "verify":
            sp.add_argument("--suite", type=str, default="all")
    return ap


def _flatten_csv(payload):
    """Flatten the results into header+rows; rationals as num/den."""
    res = payload["results"]
    if isinstance(res, dict) and "components" in res:
        rows = [(c["l"], c["p"], c["q"], c["dim"]) for c in res["components"]]
        return ["l", "p", "q", "dim"], rows
    if isinstance(res, dict) and "pieces" in res:
        return ["j", "dim"], [(r["j"], r["dim"]) for r in res["pieces"]]
    if isinstance(res, list):  # suites
        return ["suite", "passed", "checks", "failures"], [
            (r["suite"], r["passed"], r["checks"], len(r["failures"])) for r in res]

    def render(v):
        if isinstance(v, dict) and "coeff_num" in v:
            return f"{v['coeff_num']}/{v['coeff_den']}*pi^{v['pi_exponent']}"
        return v
    items = sorted(res.items()) if isinstance(res, dict) else [("value", res)]
    return ["key", "value"], [(k, render(v)) for k, v in items]


def _render_text(payload):
    lines = []
    res = payload["results"]

    def emit(prefix, v):
        if isinstance(v, dict) and "coeff_num" in v:
            s = ScaledScalar(Fraction(v["coeff_num"], v["coeff_den"]), v["pi_exponent"])
            lines.append(f"{prefix}: {_scaled_text(s)}  [{_approx_text(s)}]")
        elif isinstance(v, dict):
            for k2 in sorted(v):
                emit(f"{prefix}.{k2}" if prefix else k2, v[k2])
        elif isinstance(v, list):
            for i, item in enumerate(v):
                emit(f"{prefix}[{i}]", item)
        else:
            lines.append(f"{prefix}: {v}")
    emit("", res) if isinstance(res, dict) else emit("results", res)
    return "\n".join(lines) + "\n"


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0,) else 0
    fn, _ = COMMANDS[args.command]
    needs_mn = args.command != "verify"
    try:
        if needs_mn:
            args.m = _nonneg(args.m, "--m")
            args.n = _nonneg(args.n, "--n")
        started = time.monotonic()
        payload, code = fn(args)
        elapsed_ms = int((time.monotonic() - started) * 1000)
    except CliError as e:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": str(e)},
                         sort_keys=True), file=sys.stderr)
        return e.code
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "params": {k: v for k, v in (("m", args.m), ("n", args.n), ("k", args.k),
                                     ("kmax", args.kmax), ("poly", args.poly),
                                     ("grid", args.grid), ("seed", args.seed),
                                     ("suite", getattr(args, "suite", None)))
                   if v is not None},
        "timing_ms": elapsed_ms if args.timing else None,
    }
    report.update(payload)
    if args.fmt == "json":
        print(json.dumps(report, sort_keys=True))
    elif args.fmt == "csv":
        header, rows = _flatten_csv(payload)
        print(",".join(header))
        for row in rows:
            print(",".join(str(x) for x in row))
    else:
        print(_render_text(payload), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
