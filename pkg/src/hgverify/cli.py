"""Command-line front end.

Every subcommand writes one JSON report ``{command, inputs, results, checks}``
to stdout and a short summary to stderr.  Exit status is 0 when every check
passes, 1 on a failed check or an internal error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import acceptance, conic, gkz, hodge, hypergeom as hg, lattice as lat, monodromy as mono
from .checks import Check, check
from .exact import rat_to_str
from .ore import apply_to_series, ore_multiply, to_derivative_form

_GAMMA_TOKEN = re.compile(r"^-\d+(,\s*-?\d+)+$")


def _gamma(s: str) -> hg.GammaList:
    try:
        return hg.GammaList.parse(s.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from exc


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from exc
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _common() -> argparse.ArgumentParser:
    # Defaults are suppressed so flags given before and after the subcommand merge.
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="JSON only: suppress the summary on stderr")
    p.add_argument("--bits", type=_positive_int, default=argparse.SUPPRESS, help="working precision in bits")
    p.add_argument("--tol", type=_fraction, default=argparse.SUPPRESS, help="numerical tolerance")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled points")
    p.add_argument("--budget", type=_positive_int, default=argparse.SUPPRESS,
                   help="cap on enumerated lattice or grid points")
    return p


DEFAULTS = {"json": False, "bits": 192, "tol": Fraction(1, 10**8), "seed": 0, "budget": lat.DEFAULT_BUDGET}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hgverify", parents=[common],
                                     description="Exact and numerical checks for hypergeometric gamma data.")
    sub = parser.add_subparsers(dest="command", required=True)

    def gamma_arg(p):
        p.add_argument("gamma_pos", metavar="GAMMA", nargs="?", type=_gamma, default=None,
                       help="comma-separated gamma list (default -18,-1,2,3,5,9)")
        p.add_argument("--gamma", dest="gamma_opt", metavar="GAMMA", type=_gamma, default=None,
                       help="same as the positional GAMMA")

    p = sub.add_parser("gamma", parents=[common], help="exponents, series and singular value")
    gamma_arg(p)
    p.add_argument("--terms", type=_positive_int, default=8, help="series coefficients to print")

    p = sub.add_parser("operator", parents=[common], help="hypergeometric operators in the Ore algebra")
    gamma_arg(p)
    p.add_argument("--which", choices=("H", "Htilde", "G"), default="H")
    p.add_argument("--derivative", action="store_true", help="also print the d/dalpha form")

    p = sub.add_parser("gkz", parents=[common], help="GKZ system, restriction and point counts")
    gsub = p.add_subparsers(dest="action", required=True)
    gamma_arg(gsub.add_parser("build", parents=[common], help="Euler and box operators"))
    gamma_arg(gsub.add_parser("restrict", parents=[common], help="restriction to the alpha-line"))
    q = gsub.add_parser("count", parents=[common], help="torus point counts over F_p")
    gamma_arg(q)
    q.add_argument("--p", dest="prime", type=_positive_int, required=True)
    q.add_argument("--alpha", type=int, action="append", help="alpha residue (repeatable; default all units)")
    q.add_argument("--model", choices=("both", "reference", "alternate"), default="both",
                   help="torus model(s) for the default gamma list")

    p = sub.add_parser("conic", parents=[common], help="conic bundle pipeline for the reference model")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("analyze", parents=[common], help="discriminant, double cover, genera, ranks")
    q.add_argument("--alpha", type=_fraction, default=Fraction(1))

    p = sub.add_parser("polytope", parents=[common], help="Newton polytope as coordinate lists")
    gamma_arg(p)
    p.add_argument("--dilate", type=_positive_int, default=1)
    p.add_argument("--points", action="store_true", help="list all lattice points")

    p = sub.add_parser("hodge", parents=[common], help="dimension identities")
    hsub = p.add_subparsers(dest="action", required=True)
    hsub.add_parser("report", parents=[common], help="table, volume and rank chain")

    p = sub.add_parser("monodromy", parents=[common], help="numerical monodromy")
    msub = p.add_subparsers(dest="action", required=True)
    q = msub.add_parser("run", parents=[common], help="continue around 0, alpha_0 and infinity")
    gamma_arg(q)
    q.add_argument("--step-safety", type=_fraction, default=Fraction(1, 4))

    p = sub.add_parser("verify-all", parents=[common], help="run every acceptance criterion")
    p.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], default=None,
                   help="comma-separated criterion numbers")
    return parser


def _protect_gamma_tokens(argv: Sequence[str]) -> list[str]:
    """Keep ``-18,-1,...`` from being read as an option."""
    return [" " + a if _GAMMA_TOKEN.match(a) else a for a in argv]


def _jsonable(x):
    if isinstance(x, Fraction):
        return rat_to_str(x)
    if isinstance(x, complex):
        return [repr(x.real), repr(x.imag)]
    if isinstance(x, hg.GammaList):
        return list(x.entries)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, tuple):
        return list(x)
    return str(x)


# ---------------------------------------------------------------------------
# Commands: each returns (results, checks)
# ---------------------------------------------------------------------------


def _annihilation_check(g: hg.GammaList, op, label: str) -> Check:
    name = f"{label} annihilates the series through degree 59"
    if Fraction(0) not in hg.reduced_exponents(g).exps0:
        return Check(name, "series", "skipped", "0 is not an exponent at alpha = 0; the series is not a solution")
    bad = [i for i, v in enumerate(apply_to_series(op, hg.series(g, 61), 60)) if v]
    return check(name, "series", not bad, "all zero", "all zero" if not bad else f"nonzero at {bad[:5]}")


def cmd_gamma(a) -> tuple[dict, list[Check]]:
    g = a.gamma
    ed = hg.reduced_exponents(g)
    f0, finf = hg.local_charpolys(g)
    s = hg.series(g, a.terms)
    results = {
        "gamma": list(g.entries),
        "primitive": g.is_primitive(),
        "alpha0": rat_to_str(ed.alpha0),
        "exponents": ed.to_json(),
        "cyclotomic": {"q0": {str(k): v for k, v in f0.items()}, "qinf": {str(k): v for k, v in finf.items()}},
        "series": [rat_to_str(c) for c in s],
        "integral_through_200": hg.integrality_scan(g, 200),
    }
    checks = [
        check("cyclotomic ratio identity", "cyclotomic-ratio", hg.bh_ratio_check(g), True, hg.bh_ratio_check(g)),
        _annihilation_check(g, hg.build_irreducible_operator(g), "H"),
        check("alpha0 = prod |g|^g", "singular-value", ed.alpha0 == hg.singular_value(g), ed.alpha0,
              hg.singular_value(g)),
    ]
    return results, checks


def cmd_operator(a) -> tuple[dict, list[Check]]:
    g = a.gamma
    H = hg.build_irreducible_operator(g)
    G = hg.build_cancelled_factor(g)
    Ht = hg.build_reducible_operator(g)
    op = {"H": H, "Htilde": Ht, "G": G}[a.which]
    results = {"which": a.which, "order": op.order, "operator": op.to_json(), "operator_str": str(op)}
    if a.derivative:
        df = to_derivative_form(op)
        results["derivative_form"] = df.to_json()
        results["leading"] = str(df.leading)
    ok = ore_multiply(G, H) == Ht
    checks = [
        check("G * H = H~", "operator-Htilde", ok, "equal", "equal" if ok else "different"),
    ]
    if a.which == "H":
        ed = hg.reduced_exponents(g)
        checks.append(check("order(H) = number of reduced exponents", "operator-H", H.order == ed.order,
                            ed.order, H.order))
    if a.which != "G":
        checks.append(_annihilation_check(g, op, a.which))
    return results, checks


def _model(g: hg.GammaList) -> gkz.ToricModel:
    return gkz.reference_model() if g == hg.GAMMA_STAR else gkz.realize_monomials(g)


def cmd_gkz(a) -> tuple[dict, list[Check]]:
    g = a.gamma
    model = _model(g)
    if a.action == "build":
        sys_ = gkz.build_gkz(model.monomials)
        results = {"model": model.to_json(), "gkz": sys_.to_json()}
        checks = [
            check("Euler operators annihilate the box relations", "gkz-system", gkz.euler_annihilates_box(sys_),
                  True, gkz.euler_annihilates_box(sys_)),
            check("monomials span the lattice affinely", "torus-matrix",
                  gkz.affine_span_primitive(model.monomials.points), True,
                  gkz.affine_span_primitive(model.monomials.points)),
        ]
        return results, checks
    if a.action == "restrict":
        r = gkz.restrict_to_line(gkz.build_gkz(model.monomials), g, model.kexp)
        ok = r.intertwines and r.unit is not None
        return {"model": model.to_json(), "restriction": r.to_json()}, [
            check("restriction equals H~ up to a unit", "restriction", ok, "intertwiner and unit",
                  f"unit {r.unit}, shift D^{r.shift}, sign {r.alpha_sign}")]
    p = a.prime
    if p < 3 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"--p must be an odd prime, got {p}")
    alphas = sorted({x % p for x in a.alpha}) if a.alpha else list(range(1, p))
    if 0 in alphas:
        raise ValueError("alpha must be a unit mod p")
    results: dict = {"p": p, "alphas": alphas}
    checks: list[Check] = []
    if g != hg.GAMMA_STAR and a.model != "both":
        raise ValueError("--model applies only to the default gamma list")
    if g == hg.GAMMA_STAR:
        names = ("alternate", "reference") if a.model == "both" else (a.model,)
        models = {"alternate": gkz.alt_model(), "reference": model}
        counts = {n: gkz.count_torus_points_many(models[n].f, p, alphas, budget=a.budget) for n in names}
        results["counts"] = [{"alpha": x, **{n: counts[n][i] for n in names}} for i, x in enumerate(alphas)]
        if len(names) == 2:
            cb, cp = counts["alternate"], counts["reference"]
            checks.append(check(f"torus counts agree mod {p}", "coordinate-change", cb == cp, cb, cp))
    else:
        c = gkz.count_torus_points_many(model.f, p, alphas, budget=a.budget)
        results["counts"] = [{"alpha": x, "realized": n} for x, n in zip(alphas, c)]
    return results, checks


def cmd_conic(a) -> tuple[dict, list[Check]]:
    alpha = a.alpha
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    model = gkz.reference_model()
    an = conic.analyze(model, alpha)
    alpha0 = conic.critical_alpha(model)
    table = conic.rank_table(an.chart, an.delta, seed=a.seed)
    smooth = conic.smoothness_certificate(an.delta, alpha)
    smooth_cover = conic.smoothness_certificate(an.cover, alpha)
    chain = hodge.theorem_chain_report(an.genus, an.genus_cover, an.fixed["total"])
    results = {
        "alpha": rat_to_str(alpha),
        "chart": an.chart.to_strings(),
        "diagonal": an.diag.form.to_strings(),
        "substitutions": list(an.diag.substitutions),
        "delta": an.delta.to_json(),
        "cover": an.cover.to_json(),
        "N": an.N.to_json(),
        "Ntilde": an.Ntilde.to_json(),
        "genus": an.genus,
        "genus_cover": an.genus_cover,
        "fixed_points": an.fixed,
        "branch_points": an.branch,
        "prym_rank": 2 * an.genus_cover - 2 * an.genus,
        "rank_table": table,
        "smoothness": {"delta": smooth.to_json(), "cover": smooth_cover.to_json()},
        "divisors": {k: str(v) for k, v in conic.divisor_checks(an.chart).items()},
        "critical_alpha": rat_to_str(alpha0),
        "rank_chain": chain["ranks"],
    }
    expect_smooth = alpha != alpha0
    witness = conic.critical_alpha_certificate(model)
    checks = [
        check("discriminant", "discriminant", an.delta.f == acceptance.DELTA, str(acceptance.DELTA),
              str(an.delta.f)),
        check("genera from interior points", "newton-polygons", (an.genus, an.genus_cover) == (3, 7), (3, 7),
              (an.genus, an.genus_cover)),
        check("critical fiber at alpha_0", "critical-fiber",
              witness.alpha == hg.singular_value(hg.GAMMA_STAR) and witness.residual < 1e-10,
              rat_to_str(hg.singular_value(hg.GAMMA_STAR)), f"{witness.alpha} (residual {witness.residual:.1e})"),
        check("diagonalization certificate", "conic-diagonal", an.diag.certificate(an.chart), True,
              an.diag.certificate(an.chart)),
        check("f_Delta~(u1,u2) = f_Delta(alpha u1^2, u2)", "double-cover", conic.covering_identity(an.delta, an.cover),
              True, conic.covering_identity(an.delta, an.cover)),
        check("N~ weighted homogeneous", "closures", an.Ntilde.is_homogeneous(), True, an.Ntilde.is_homogeneous()),
        check("rank 2 on Delta, 3 off Delta", "minors", table["on_ranks"] == [2] and table["off_ranks"] == [3],
              "[2] / [3]", f"{table['on_ranks']} / {table['off_ranks']}", detail=f"seed {a.seed}"),
        check("Delta smooth iff alpha != alpha_0", "smooth-delta", smooth.torus_smooth == expect_smooth,
              expect_smooth, smooth.torus_smooth),
        *chain["checks"],
    ]
    return results, checks


def cmd_polytope(a) -> tuple[dict, list[Check]]:
    g = a.gamma
    P = hodge.newton_polytope(g)
    vol = lat.normalized_volume(P)
    interior = lat.lattice_points(P, a.dilate, interior_only=True, budget=a.budget)
    delta = lat.delta_vector(P, budget=a.budget)
    results = {
        "dim": P.dim,
        "polytope": P.to_json(),
        "normalized_volume": vol,
        "delta_vector": delta,
        "dilate": a.dilate,
        "interior_points": [list(x) for x in interior],
    }
    if a.points:
        results["lattice_points"] = [list(x) for x in lat.lattice_points(P, a.dilate, budget=a.budget)]
    order = hg.build_reducible_operator(g).order
    checks = [
        check("normalized volume = order(H~)", "volume", vol == order, order, vol),
        check("sum of delta vector = volume", "volume", sum(delta) == vol, vol, sum(delta)),
    ]
    return results, checks


def cmd_hodge(a) -> tuple[dict, list[Check]]:
    t = hodge.reference_table()
    d = hodge.dimension_identities(hg.GAMMA_STAR, t)
    gg = hodge.geometric_genus_check(hg.GAMMA_STAR)
    gc = hodge.geometric_genus_check(hg.GammaList((-9, 1, 3, 5)))
    an = conic.analyze(gkz.reference_model())
    chain = hodge.theorem_chain_report(an.genus, an.genus_cover, an.fixed["total"])
    results = {
        "table": t.to_json(),
        "weight_totals": t.weight_totals(),
        "triple": list(d["triple"]),
        "order_H": d["order_H"],
        "order_Htilde": d["order_Htilde"],
        "interior": {"fourfold": gg, "curve": gc},
        "rank_chain": chain["ranks"],
        "twist_offsets": chain["twist_offsets"],
        "cokernel": chain["cokernel"],
    }
    checks = [
        *d["checks"],
        check("table symmetric", "hodge-table", t.is_symmetric(), True, t.is_symmetric()),
        check("table nonnegative", "hodge-table", t.is_nonnegative(), True, t.is_nonnegative()),
        check("interior count = h(3,0)", "hodge-table", gg["ok"], gg["expected"], gg["interior"]),
        check("curve interior count = genus", "curve-rank", gc["ok"], gc["expected"], gc["interior"]),
        *chain["checks"],
    ]
    return results, checks


def cmd_monodromy(a) -> tuple[dict, list[Check]]:
    cfg = mono.ContinuationConfig(precision=a.bits, tolerance=a.tol, step_safety=a.step_safety)
    rep = mono.run(a.gamma, cfg)
    return rep.to_json(), mono.certify(rep)


def cmd_verify_all(a) -> tuple[dict, list[Check]]:
    wanted = a.only or list(acceptance.CRITERIA)
    unknown = [k for k in wanted if k not in acceptance.CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}")
    results, checks = {}, []
    for k in wanted:
        title, fn = acceptance.CRITERIA[k]
        if k == 9:
            cs = fn(seed=a.seed)
        elif k == 11:
            cs = fn(bits=a.bits, tol=a.tol)
        else:
            cs = fn()
        results[str(k)] = {"title": title, "passed": all(c.passed for c in cs), "checks": len(cs)}
        checks.extend(Check(f"[{k}] {c.name}", c.paper_anchor, c.status, c.detail) for c in cs)
    return results, checks


COMMANDS = {
    "gamma": cmd_gamma,
    "operator": cmd_operator,
    "gkz": cmd_gkz,
    "conic": cmd_conic,
    "polytope": cmd_polytope,
    "hodge": cmd_hodge,
    "monodromy": cmd_monodromy,
    "verify-all": cmd_verify_all,
}


def _inputs(a) -> dict:
    skip = {"command", "action", "json"}
    return {k: _jsonable(v) if not isinstance(v, (int, str, bool, type(None), list)) else v
            for k, v in sorted(vars(a).items()) if k not in skip}


def _summary(report: dict) -> str:
    checks = report["checks"]
    failed = [c for c in checks if c["status"] == "fail"]
    lines = [f"{report['command']}: {len(checks) - len(failed)}/{len(checks)} checks passed"]
    lines += [f"  FAIL {c['name']} [{c['paper_anchor']}]: {c['detail']}" for c in failed]
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        a = parser.parse_args(_protect_gamma_tokens(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    for k, v in DEFAULTS.items():
        if not hasattr(a, k):
            setattr(a, k, v)
    if hasattr(a, "gamma_pos"):
        pos, opt = a.gamma_pos, a.gamma_opt
        if pos is not None and opt is not None and pos != opt:
            print("hgverify: error: positional GAMMA and --gamma disagree", file=stderr)
            return 2
        a.gamma = opt or pos or hg.GAMMA_STAR
        del a.gamma_pos, a.gamma_opt
    command = a.command + (f" {a.action}" if getattr(a, "action", None) else "")
    try:
        results, checks = COMMANDS[a.command](a)
    except (ValueError, ArithmeticError, RuntimeError, lat.BudgetExceeded) as exc:
        print(f"hgverify: error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    report = {"command": command, "inputs": _inputs(a), "results": results,
              "checks": [c.to_json() for c in checks]}
    stdout.write(json.dumps(report, indent=2, default=_jsonable) + "\n")
    if not a.json:
        print(_summary(report), file=stderr)
    return 1 if any(c.status == "fail" for c in checks) else 0


def main() -> None:
    sys.exit(run())
