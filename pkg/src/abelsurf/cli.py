"""Command-line front end.

Exit codes: 0 success, 1 a verification failed (the report carries a
witness), 2 invalid input.  Every randomised step draws from one
``random.Random(seed)`` so reports are reproducible.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .abelian13 import (ModuliError, SurfaceParams, bl_branch_sextic, bl_params, branch_on_line,
                        build_ideal, build_irregular_ideal, chart_compatibility, check_equivariance,
                        default_degree_bound, fiber_algebra, fiber_ring, irregular_relation,
                        random_irregular_ctable, trace_discriminant)
from .exactring import INHOMOGENEOUS, ZERO, FieldSpec, PolyRing, exact_divide, parse_poly, substitute
from .heisenberg import classify_two_twist
from .moduli import DegenerateError, IrrationalPointsError, moduli_point, normalize_beta, orbit_equivalent

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


def schema_path() -> Path:
    """Location of the JSON schema every report validates against."""
    return Path(__file__).with_name("schema") / "report.schema.json"


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def _field(args) -> FieldSpec:
    try:
        return FieldSpec.parse(args.field)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _scalars(text: str, fld: FieldSpec, n: int, what: str) -> tuple:
    parts = [p for p in text.split(",")]
    if len(parts) != n:
        raise InputError("%s needs %d comma-separated entries" % (what, n))
    try:
        return tuple(fld.from_text(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("bad %s entry: %s" % (what, exc)) from None


def _params(args, fld, rng, alpha="alpha", beta="beta") -> SurfaceParams:
    a, b = getattr(args, alpha), getattr(args, beta)
    if a is None and b is None:
        return SurfaceParams.random(fld, rng)
    if a is None or b is None:
        raise InputError("give both --%s and --%s, or neither for a random admissible draw"
                         % (alpha.replace("_", "-"), beta.replace("_", "-")))
    try:
        return SurfaceParams(fld, _scalars(a, fld, 4, alpha), _scalars(b, fld, 4, beta))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _point(text, fld, rng) -> tuple:
    if text is not None:
        return _scalars(text, fld, 3, "point")
    while True:
        pt = tuple(fld.random(rng) for _ in range(3))
        if pt[2]:
            return pt


def _strs(xs) -> list:
    return [str(x) for x in xs]


def _failed(report, witness):
    report["status"] = "failed"
    report["witness"] = witness
    return EXIT_FAILED


# ---------------------------------------------------------------------------
# commands; each fills ``report`` and returns an exit code


def cmd_ring_build(args, report):
    fld = _field(args)
    p = _params(args, fld, random.Random(args.seed))
    report["parameters"] = p.to_json()
    if not p.is_admissible():
        return _failed(report, "moduli equation residual %s" % p.residual)
    ideal = build_ideal(p, args.chart)
    report["ideal"] = ideal.to_json()
    report["text"] = [str(g) for g in ideal.cleared()]
    return EXIT_OK


def _fiber_checks(ideal, fld, rng, samples):
    bad = None
    for _ in range(samples):
        pt = _point(None, fld, rng)
        fa = fiber_algebra(ideal, pt)
        if fa.dimension != 6 or not fa.is_commutative() or not fa.is_associative():
            bad = "fiber over (%s) is not a commutative associative algebra of rank 6" % ", ".join(_strs(pt))
            break
    return bad


def cmd_ring_verify(args, report):
    fld = _field(args)
    rng = random.Random(args.seed)
    p = _params(args, fld, rng)
    report["parameters"] = p.to_json()
    checks = {}
    report["checks"] = checks
    if not p.is_admissible():
        checks["moduli_equation"] = {"ok": False, "witness": "moduli equation residual %s" % p.residual}
        return _failed(report, checks["moduli_equation"]["witness"])
    checks["moduli_equation"] = {"ok": True}
    ideal = build_ideal(p, args.chart)
    degs = ideal.degrees()
    homog = all(d not in (INHOMOGENEOUS, ZERO) for d in degs)
    checks["homogeneity"] = {"ok": homog, "degrees": [str(d) for d in degs]}
    if fld.has_omega() and args.chart == "u2":
        for g, r in check_equivariance(ideal).items():
            checks["equivariance_" + g] = {"ok": r.ok, "witness": r.witness} if not r.ok else {"ok": True}
    else:
        checks["equivariance"] = {"ok": True, "skipped": "needs a cube root of unity and chart u2"}
    cc = chart_compatibility(p)
    checks["chart_compatibility"] = {"ok": cc.ok} if cc.ok else {"ok": False, "witness": cc.witness}
    bad = _fiber_checks(ideal, fld, rng, args.samples)
    checks["fibers"] = {"ok": bad is None, "samples": args.samples}
    if bad:
        checks["fibers"]["witness"] = bad
    failing = [k for k, v in checks.items() if not v["ok"]]
    if failing:
        return _failed(report, "%s: %s" % (failing[0], checks[failing[0]].get("witness", "failed")))
    return EXIT_OK


def cmd_fiber(args, report):
    fld = _field(args)
    rng = random.Random(args.seed)
    p = _params(args, fld, rng)
    report["parameters"] = p.to_json()
    if not p.is_admissible():
        return _failed(report, "moduli equation residual %s" % p.residual)
    ideal = build_ideal(p, args.chart)
    pt = _point(args.point, fld, rng)
    try:
        fa = fiber_algebra(ideal, pt)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    disc = trace_discriminant(fa)
    fib = {
        "point": _strs(pt),
        "basis": ["1"] + list(ideal.fiber) + ["w"],
        "dimension": fa.dimension,
        "commutative": fa.is_commutative(),
        "associative": fa.is_associative(),
        "trace_discriminant": str(disc),
        "etale": bool(disc),
        "multiplication": [[_strs(v) for v in row] for row in fa.mult],
    }
    report["fiber"] = fib
    report["text"] = ["dimension %d" % fa.dimension, "commutative %s" % fib["commutative"],
                      "associative %s" % fib["associative"], "trace discriminant %s" % disc]
    if not (fib["commutative"] and fib["associative"] and fa.dimension == 6):
        return _failed(report, "fiber is not a commutative associative algebra of rank 6")
    return EXIT_OK


def cmd_branch_scan(args, report):
    fld = _field(args)
    if fld.kind != "FP":
        raise InputError("branch scan interpolates over a prime field; use --field fp:<p>")
    rng = random.Random(args.seed)
    lam = None
    if args.lam is not None:
        lam = _scalars(args.lam, fld, 1, "lam")[0]
        p = bl_params(lam, fld)
    else:
        p = _params(args, fld, rng)
    report["parameters"] = p.to_json()
    if not p.is_admissible():
        return _failed(report, "moduli equation residual %s" % p.residual)
    bound = args.bound or default_degree_bound()
    if fld.modulus <= bound + 2:
        raise InputError("prime %d too small for degree bound %d" % (fld.modulus, bound))
    lines = []
    if args.line:
        for spec in args.line:
            try:
                a, b = spec.split(";")
            except ValueError:
                raise InputError("a line is given as p0;p1, e.g. 1,4,2;5,1,3") from None
            lines.append((_scalars(a, fld, 3, "line"), _scalars(b, fld, 3, "line")))
    else:
        for _ in range(args.samples):
            lines.append((_point(None, fld, rng), _point(None, fld, rng)))
    out = []
    ok = True
    for p0, p1 in lines:
        f = branch_on_line(p, p0, p1, bound, args.chart, jobs=args.jobs)
        entry = {"p0": _strs(p0), "p1": _strs(p1), "degree": f.degree_in("s")[1] if f.terms else -1,
                 "polynomial": str(f)}
        if lam is not None:
            entry.update(_cube_factor(f, lam, p0, p1, args.chart))
            ok &= entry["cube_divides"]
        out.append(entry)
    report["branch"] = {"bound": bound, "lines": out}
    report["text"] = ["%s;%s degree %d%s" % (",".join(e["p0"]), ",".join(e["p1"]), e["degree"],
                                             "" if lam is None else " = %s * C^3 * x%s^%s" % (e["cofactor"], args.chart[-1], e.get("chart_power")))
                     for e in out]
    if not ok:
        return _failed(report, "the branch polynomial is not divisible by the cube of the sextic")
    return EXIT_OK


def _cube_factor(f, lam, p0, p1, chart):
    ring = f.ring
    s = ring.var("s")
    line = {"x%d" % i: ring.const(p0[i]) + s * p1[i] for i in range(3)}
    C = substitute(bl_branch_sextic(lam, PolyRing(ring.field, ["x0", "x1", "x2"])), line, ring)
    try:
        rest = exact_divide(f, C ** 3)
    except ArithmeticError:
        return {"cube_divides": False, "cofactor": None}
    k = 0
    xk = line["x" + chart[-1]]
    while not rest.is_constant() and not xk.is_constant():
        try:
            rest = exact_divide(rest, xk)
        except ArithmeticError:
            break
        k += 1
    return {"cube_divides": True, "cofactor": str(rest), "chart_power": k}


def _normalised(p):
    try:
        g, q = normalize_beta(p)
    except DegenerateError:
        raise InputError("beta is degenerate: its three points are not distinct") from None
    except IrrationalPointsError as exc:
        raise InputError(str(exc)) from None
    return g, q


def _moduli_setup(args, alpha="alpha", beta="beta"):
    fld = _field(args)
    if fld.kind == "QW":
        raise InputError("moduli commands run over q or fp:<p>")
    p = _params(args, fld, random.Random(args.seed), alpha, beta)
    return fld, p


def cmd_moduli_normalize(args, report):
    fld, p = _moduli_setup(args)
    report["parameters"] = p.to_json()
    g, q = _normalised(p)
    report["moduli"] = {"change": [_strs(r) for r in g], "normalized": q.to_json()}
    report["text"] = ["g = %s" % json.dumps([_strs(r) for r in g]), "alpha = %s" % ",".join(_strs(q.alpha)),
                      "beta = %s" % ",".join(_strs(q.beta))]
    if not q.is_admissible():
        return _failed(report, "moduli equation residual %s" % q.residual)
    return EXIT_OK


def _alpha3(args, alpha="alpha", beta="beta"):
    fld, p = _moduli_setup(args, alpha, beta)
    if not p.is_admissible():
        return p, None
    _, q = _normalised(p)
    a = q.alpha
    return p, (a[0], a[1], a[3])


def cmd_moduli_invariants(args, report):
    p, a3 = _alpha3(args)
    report["parameters"] = p.to_json()
    if a3 is None:
        return _failed(report, "moduli equation residual %s" % p.residual)
    mp = moduli_point(a3)
    report["moduli"] = mp.to_json()
    report["text"] = ["alpha3 %s" % ",".join(_strs(mp.alpha3)), "delta %s" % ",".join(_strs(mp.delta)),
                      "invariants %s" % ",".join(_strs(mp.invariants)), "bielliptic %s" % mp.bielliptic]
    return EXIT_OK


def cmd_moduli_equivalent(args, report):
    p, a = _alpha3(args)
    q, b = _alpha3(args, "other_alpha", "other_beta")
    report["parameters"] = p.to_json()
    report["other_parameters"] = q.to_json()
    for x, y in ((p, a), (q, b)):
        if y is None:
            return _failed(report, "moduli equation residual %s" % x.residual)
    eq = orbit_equivalent(a, b)
    report["moduli"] = {"alpha3": _strs(a), "other_alpha3": _strs(b), "equivalent": eq,
                        "invariants": _strs(moduli_point(a).invariants),
                        "other_invariants": _strs(moduli_point(b).invariants)}
    report["text"] = ["equivalent %s" % eq]
    if not eq:
        return _failed(report, "alpha3 %s and %s lie in different S3-orbits" % (_strs(a), _strs(b)))
    return EXIT_OK


def cmd_classify_twists(args, report):
    fld = _field(args)
    if not fld.has_omega():
        raise InputError("classification needs a cube root of unity: qw or fp:<p> with p = 1 mod 3")
    rows = []
    for m in range(3):
        for n in range(3):
            r = classify_two_twist(m, n, fld)
            rows.append({"m": m, "n": n, "case": r.case, "label": r.label, "dimension": r.dimension,
                         "surviving_blocks": ["C%d" % b for b in r.surviving_blocks], "certificate": r.certificate})
    report["classification"] = rows
    report["text"] = ["(%d,%d) %-12s %-20s dim %d" % (r["m"], r["n"], r["case"], r["label"], r["dimension"])
                      for r in rows]
    return EXIT_OK


def _read_ctable(args, fld):
    ring = fiber_ring(fld, "u2", (1, 2, 3))
    entries = {}
    if args.ctable:
        try:
            with open(args.ctable) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError("cannot read c-table: %s" % exc) from None
        items = list(raw.items())
    else:
        items = []
        for spec in args.c or ():
            if "=" not in spec:
                raise InputError("entries are given as c10=<polynomial>")
            k, v = spec.split("=", 1)
            items.append((k.strip(), v))
    for k, v in items:
        if len(k) != 3 or k[0] != "c" or k[1] not in "13" or k[2] not in "0123":
            raise InputError("unknown c-table entry %r; use c10..c13, c30..c33" % k)
        try:
            entries[(int(k[1]), int(k[2]))] = parse_poly(str(v), ring)
        except ValueError as exc:
            raise InputError("bad polynomial for %s: %s" % (k, exc)) from None
    for i in (1, 3):
        for j in range(4):
            entries.setdefault((i, j), ring.zero())
    return entries


def cmd_irregular_build(args, report):
    fld = _field(args)
    if args.ctable or args.c:
        c = _read_ctable(args, fld)
    else:
        c = random_irregular_ctable(fld, random.Random(args.seed))
    report["c_table"] = {"c%d%d" % k: str(v) for k, v in sorted(c.items())}
    try:
        ideal = build_irregular_ideal(c, fld)
    except ModuliError:
        return _failed(report, "relation residual %s" % irregular_relation(c))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report["ideal"] = ideal.to_json()
    report["text"] = [str(g) for g in ideal.cleared()]
    return EXIT_OK


def cmd_selftest(args, report):
    from .acceptance import format_line, run_all

    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise InputError("--only takes criterion numbers, e.g. 1,5,10") from None
    results = run_all(only, printer=None)
    report["selftest"] = results
    report["text"] = [format_line(r) for r in results]
    bad = [r for r in results if not r["passed"]]
    if bad:
        return _failed(report, "criterion %d: %s" % (bad[0]["number"], bad[0]["detail"]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parser


def _common(p, params=True, chart=True):
    p.add_argument("--field", default="fp:31", help="q, qw or fp:<p> (default fp:31)")
    if params:
        p.add_argument("--alpha", help="a0,a1,a2,a3; rationals as p/q")
        p.add_argument("--beta", help="b0,b1,b2,b3")
    if chart:
        p.add_argument("--chart", default="u2", choices=("u0", "u1", "u2"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for scans")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelsurf", description="Exact computations for (1,3)-polarised "
                                     "abelian surfaces as triple covers of the plane.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    top = parser.add_subparsers(dest="group", required=True)

    ring = top.add_parser("ring", help="build or verify the ideal of a surface").add_subparsers(dest="action", required=True)
    p = ring.add_parser("build")
    _common(p)
    p.set_defaults(func=cmd_ring_build)
    p = ring.add_parser("verify")
    _common(p)
    p.set_defaults(func=cmd_ring_verify)

    p = top.add_parser("fiber", help="fiber algebra over a point")
    _common(p)
    p.add_argument("--point", help="x0,x1,x2")
    p.set_defaults(func=cmd_fiber)

    branch = top.add_parser("branch", help="branch curves").add_subparsers(dest="action", required=True)
    p = branch.add_parser("scan")
    _common(p)
    p.add_argument("--lam", help="use the E x E family with this lambda")
    p.add_argument("--line", action="append", help="p0;p1, may be repeated; default --samples random lines")
    p.add_argument("--bound", type=int, help="degree bound for interpolation")
    p.set_defaults(func=cmd_branch_scan)

    mod = top.add_parser("moduli", help="normal forms and invariants").add_subparsers(dest="action", required=True)
    for name, func in (("invariants", cmd_moduli_invariants), ("normalize", cmd_moduli_normalize),
                       ("equivalent", cmd_moduli_equivalent)):
        p = mod.add_parser(name)
        _common(p, chart=False)
        if name == "equivalent":
            p.add_argument("--other-alpha", dest="other_alpha")
            p.add_argument("--other-beta", dest="other_beta")
        p.set_defaults(func=func)

    cls = top.add_parser("classify", help="twist classification").add_subparsers(dest="action", required=True)
    p = cls.add_parser("twists")
    _common(p, params=False, chart=False)
    p.set_defaults(func=cmd_classify_twists)

    irr = top.add_parser("irregular", help="the weight (1,2,3) variant").add_subparsers(dest="action", required=True)
    p = irr.add_parser("build")
    _common(p, params=False, chart=False)
    p.add_argument("--ctable", help="JSON file mapping c10..c13, c30..c33 to polynomials")
    p.add_argument("--c", action="append", help="one entry, e.g. c10=x2^2; may be repeated")
    p.set_defaults(func=cmd_irregular_build)

    p = top.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", default="fp:31")
    p.set_defaults(func=cmd_selftest)
    return parser


def _command_name(args) -> str:
    return args.group + (" " + args.action if getattr(args, "action", None) else "")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)          # exits with 2 and usage on bad flags
    report = {"command": _command_name(args), "status": "ok", "version": __version__}
    if hasattr(args, "field"):
        report["field"] = args.field
    if getattr(args, "samples", 1) < 0 or getattr(args, "jobs", 1) < 1:
        code = EXIT_INVALID
        report.update(status="error", error="--samples must be >= 0 and --jobs >= 1")
    else:
        try:
            code = args.func(args, report)
        except InputError as exc:
            code = EXIT_INVALID
            report.update(status="error", error=str(exc))
    report.setdefault("text", [])
    if args.json:
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        for line in report["text"]:
            out.write(line + "\n")
        if report["status"] == "failed":
            out.write("FAILED: %s\n" % report["witness"])
        elif report["status"] == "error":
            sys.stderr.write("error: %s\n" % report["error"])
        elif report["command"] == "ring verify":
            out.write("verified: %s\n" % ", ".join(sorted(report["checks"])))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
