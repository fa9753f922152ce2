"""The thirteen acceptance criteria, each returning a list of checks."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from . import conic, gkz, hodge, hypergeom as hg, lattice as lat, monodromy as mono
from .checks import Check, check
from .exact import LaurentPoly, poly_identity_check
from .ore import apply_to_series, ore_multiply

GAMMA = hg.GAMMA_STAR
ALPHA0 = Fraction(5**5, 3**15 * 2**16)
V3 = conic.CHART_VARS


def _lp(vars_, terms) -> LaurentPoly:
    return LaurentPoly(vars_, terms)


# Displayed polynomials, transcribed term by term.
DELTA = _lp(V3, {(0, 3, 1): 4, (0, 0, 3): 4, (1, 0, 0): 1, (0, 1, 2): -1})
DELTA_TILDE = _lp(V3, {(3, 6, 1): 4, (0, 0, 3): 4, (1, 0, 0): 1, (1, 2, 2): -1})
N_QUARTIC = _lp(("alpha", "u0", "u1", "u2"), {(0, 0, 3, 1): 4, (0, 1, 0, 3): 4, (1, 4, 0, 0): 1, (0, 1, 1, 2): -1})
N_TILDE = _lp(("alpha", "x0", "x1", "y"), {(0, 0, 0, 3): 4, (1, 1, 2, 2): -1, (3, 0, 6, 1): 4, (1, 9, 0, 0): 1})
DIAGONAL = (
    _lp(V3, {(0, 3, 1): 1, (0, 0, 3): 1, (1, 0, 0): Fraction(1, 4), (0, 1, 2): Fraction(-1, 4)}),
    _lp(V3, {(0, 1, 0): 1}),
    _lp(V3, {(-1, 0, 0): -1}),
)
MPRIME = [[1, 1, 1, 1, 1, 1], [1, 0, 0, 3, 0, 1], [1, 0, 0, 1, 3, 0], [1, 0, 0, 0, 0, 2], [0, 2, 1, 0, 0, 0]]


def criterion_1() -> list[Check]:
    H = hg.build_irreducible_operator(GAMMA)
    s = hg.series(GAMMA, 61)
    out = apply_to_series(H, s, 60)
    bad = [i for i, v in enumerate(out) if v]
    return [
        check("H annihilates the series through degree 59", "series", not bad, "all zero",
              "all zero" if not bad else f"nonzero at {bad[:5]}"),
        check("A_1 = 12252240", "series", hg.coefficient(GAMMA, 1) == 12252240, 12252240,
              hg.coefficient(GAMMA, 1)),
    ]


def criterion_2() -> list[Check]:
    v = hg.singular_value(GAMMA)
    return [check("singular value", "singular-value", v == ALPHA0, ALPHA0, v)]


def criterion_3() -> list[Check]:
    ed = hg.reduced_exponents(GAMMA)
    e0 = sorted([Fraction(0), Fraction(0), Fraction(1, 3), Fraction(2, 3)] + [Fraction(n, 5) for n in range(1, 5)])
    einf = sorted(Fraction(2 * n + 1, 18) for n in range(9) if n != 4)
    f0, finf = hg.local_charpolys(GAMMA)
    return [
        check("order(H) = 8", "operator-H", ed.order == 8, 8, ed.order),
        check("exps0 multiset", "operator-H", list(ed.exps0) == e0, e0, list(ed.exps0)),
        check("expsInf multiset", "operator-H", list(ed.expsInf) == einf, einf, list(ed.expsInf)),
        check("order(H~) = 19", "operator-Htilde",
              hg.build_reducible_operator(GAMMA).order == 19, 19, hg.build_reducible_operator(GAMMA).order),
        check("q0 = phi1^2 phi3 phi5, qinf = phi6 phi18", "cyclotomic-ratio",
              f0 == {1: 2, 3: 1, 5: 1} and finf == {6: 1, 18: 1}, "{1:2,3:1,5:1} / {6:1,18:1}", (f0, finf)),
        check("cyclotomic ratio identity", "cyclotomic-ratio", hg.bh_ratio_check(GAMMA),
              True, hg.bh_ratio_check(GAMMA)),
    ]


def criterion_4() -> list[Check]:
    G = hg.build_cancelled_factor(GAMMA)
    H = hg.build_irreducible_operator(GAMMA)
    Ht = hg.build_reducible_operator(GAMMA)
    ok = ore_multiply(G, H) == Ht
    return [check("G * H = H~", "operator-Htilde", ok, "equal", "equal" if ok else "different")]


def criterion_5() -> list[Check]:
    model = gkz.realize_monomials(GAMMA)
    eq = lat.affine_equivalent(model.monomials, gkz.reference_model().monomials)
    sys = gkz.build_gkz(gkz.reference_model().monomials)
    r = gkz.restrict_to_line(gkz.build_gkz(model.monomials), GAMMA, model.kexp)
    return [
        check("realized monomials affine-equivalent to the reference matrix", "torus-matrix",
              eq is not None, "equivalence", eq),
        check("Euler covectors row-equivalent to (Mprime)", "gkz-system",
              gkz.row_equivalent(sys.euler_ops, MPRIME), MPRIME, sys.euler_ops),
        check("box operator", "gkz-system", sys.box_strings() == ["d3^2d4^3d5^5d6^9 - d1^18d2"],
              "d3^2d4^3d5^5d6^9 - d1^18d2", sys.box_strings()),
        check("restriction equals H~ up to a unit", "restriction",
              r.intertwines and r.unit is not None and r.alpha_sign == 1, "unit with alpha sign +1",
              f"unit {r.unit}, shift D^{r.shift}, sign {r.alpha_sign}"),
    ]


def criterion_6() -> list[Check]:
    got = gkz.alt_to_reference(gkz.alt_model().f)
    want = gkz.reference_model().f
    return [check("alternate equation becomes the Z_alpha equation", "coordinate-change",
                  poly_identity_check(got, want), str(want), str(got))]


def criterion_7() -> list[Check]:
    a = conic.analyze(gkz.reference_model())
    diag = tuple(a.diag.form[i, i] for i in range(3))
    return [
        check("diagonal form", "conic-diagonal", diag == DIAGONAL and a.diag.certificate(a.chart),
              [str(x) for x in DIAGONAL], [str(x) for x in diag]),
        check("discriminant", "discriminant", a.delta.f == DELTA, str(DELTA), str(a.delta.f)),
        check("double cover", "double-cover", a.cover.f == DELTA_TILDE, str(DELTA_TILDE),
              str(a.cover.f)),
        check("f_Delta~(u1,u2) = f_Delta(alpha u1^2, u2)", "double-cover",
              conic.covering_identity(a.delta, a.cover), True, conic.covering_identity(a.delta, a.cover)),
        check("closure N", "closures", a.N.F == N_QUARTIC and a.N.degree == 4,
              str(N_QUARTIC), str(a.N.F)),
        check("closure N~ of weighted degree 9", "closures",
              a.Ntilde.F == N_TILDE and a.Ntilde.degree == 9 and a.Ntilde.is_homogeneous(), str(N_TILDE),
              f"{a.Ntilde.F} (degree {a.Ntilde.degree})"),
    ]


def criterion_8() -> list[Check]:
    a = conic.analyze(gkz.reference_model())
    g, gt, fx = a.genus, a.genus_cover, a.fixed["total"]
    return [
        check("interior points of P", "newton-polygons", g == 3, 3, g),
        check("interior points of P~", "newton-polygons", gt == 7, 7, gt),
        check("fixed points", "fixed-points", fx == 4, 4, fx),
        check("2g~ - 2g = 8", "prym-rank", 2 * gt - 2 * g == 8, 8, 2 * gt - 2 * g),
        check("Riemann-Hurwitz 12 = 8 + 4", "fixed-points", 2 * gt - 2 == 2 * (2 * g - 2) + fx,
              "12 = 8 + 4", f"{2 * gt - 2} = {2 * (2 * g - 2)} + {fx}"),
    ]


def criterion_9(seed: int = 0) -> list[Check]:
    a = conic.analyze(gkz.reference_model())
    t = conic.rank_table(a.chart, a.delta, seed=seed)
    cert = conic.smoothness_certificate(a.delta, Fraction(1))
    return [
        check("rank 2 at 10 points on Delta", "minors", t["on_ranks"] == [2] and len(t["on"]) == 10,
              [2], t["on_ranks"], detail=f"seed {seed}"),
        check("rank 3 at 10 points off Delta", "minors", t["off_ranks"] == [3] and len(t["off"]) == 10,
              [3], t["off_ranks"], detail=f"seed {seed}"),
        check("Delta smooth at alpha = 1", "smooth-delta", cert.torus_smooth, True,
              cert.torus_smooth, detail=f"gcd of resultants {cert.common}"),
    ]


def criterion_10() -> list[Check]:
    d = hodge.dimension_identities(GAMMA)
    t = hodge.reference_table()
    gg = hodge.geometric_genus_check(GAMMA)
    return [
        check("vol = 19", "volume", d["vol"] == 19, 19, d["vol"]),
        *d["checks"],
        check("interior count = h(3,0) = 0", "hodge-table", gg["ok"] and gg["interior"] == 0, 0, gg["interior"]),
        check("table symmetric", "hodge-table", t.is_symmetric(), True, t.is_symmetric()),
    ]


def criterion_11(bits: int = 192, tol: Fraction = Fraction(1, 10**8)) -> list[Check]:
    cfg = mono.ContinuationConfig(precision=bits, tolerance=tol)
    rep = mono.run(GAMMA, cfg)
    return mono.certify(rep)


def criterion_12(primes=(7, 11, 13, 31)) -> list[Check]:
    out = []
    a = conic.analyze(gkz.reference_model())
    for p in primes:
        ok, rows = gkz.model_counts_agree(p)
        out.append(check(f"torus counts agree mod {p}", "coordinate-change", ok,
                         "equal", "equal" if ok else [r for r in rows if r[1] != r[2]][:3]))
        bad = []
        for al in range(1, p):
            n_cov, fib = conic.finite_field_cover_check(a.delta, a.cover, p, al)
            if n_cov != fib:
                bad.append((al, n_cov, fib))
        out.append(check(f"Delta~ count = character sum mod {p}", "double-cover", not bad, "equal",
                         "equal" if not bad else bad[:3]))
    return out


def criterion_13() -> list[Check]:
    w = conic.critical_alpha_certificate(gkz.reference_model())
    return [
        check("critical alpha = alpha_0", "critical-fiber", w.alpha == ALPHA0,
              ALPHA0, w.alpha),
        check("Newton residual < 1e-10", "critical-fiber", w.residual < 1e-10,
              "< 1e-10", f"{w.residual:.3e}"),
        check("monomial values proportional to gamma", "critical-fiber", w.proportionality < 1e-8, "< 1e-8",
              f"{w.proportionality:.3e}"),
    ]


CRITERIA: dict[int, tuple[str, Callable[[], list[Check]]]] = {
    1: ("Series/operator", criterion_1),
    2: ("Singular value", criterion_2),
    3: ("Exponent reduction", criterion_3),
    4: ("Ore factorization", criterion_4),
    5: ("GKZ", criterion_5),
    6: ("Coordinate change", criterion_6),
    7: ("Conic pipeline", criterion_7),
    8: ("Genera and Prym rank", criterion_8),
    9: ("Rank stratification", criterion_9),
    10: ("Dimensions", criterion_10),
    11: ("Monodromy", criterion_11),
    12: ("Finite fields", criterion_12),
    13: ("Critical fiber", criterion_13),
}
