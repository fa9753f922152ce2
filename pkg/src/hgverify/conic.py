"""Conic bundle pipeline: chart, diagonal form, discriminant curve, its double
cover, projective closures, genera, fixed points and smoothness certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import lattice as lat
from .exact import LaurentPoly, UniPoly, distinct_root_count, poly_gcd, rat_to_str
from .gkz import ToricModel, _mod_p, count_torus_points

CHART_VARS = ("alpha", "u1", "u2")


def _lp(terms: dict, vars_=CHART_VARS) -> LaurentPoly:
    return LaurentPoly(vars_, terms)


def _zero() -> LaurentPoly:
    return LaurentPoly.zero(CHART_VARS)


def _one() -> LaurentPoly:
    return LaurentPoly.const(1, CHART_VARS)


@dataclass(frozen=True)
class QuadForm3:
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        E = self.entries
        if len(E) != 3 or any(len(r) != 3 for r in E):
            raise ValueError("QuadForm3 needs a 3x3 matrix")
        for i in range(3):
            for j in range(3):
                if E[i][j] != E[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")

    def __getitem__(self, ij) -> LaurentPoly:
        return self.entries[ij[0]][ij[1]]

    @property
    def vars(self) -> tuple[str, ...]:
        return self.entries[0][0].vars

    def det(self) -> LaurentPoly:
        a = self.entries
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(3) for j in range(3) if i != j)

    def evaluate(self, point: dict) -> list[list[Fraction]]:
        return [[Fraction(e.evaluate(point)) for e in row] for row in self.entries]

    def quadric(self, xvars=("x0", "x1", "x2")) -> LaurentPoly:
        """``sum a_ij x_i x_j`` in the variables ``vars + xvars``."""
        allv = self.vars + tuple(xvars)
        out = LaurentPoly.zero(allv)
        for i in range(3):
            for j in range(3):
                e = [0] * 3
                e[i] += 1
                e[j] += 1
                lifted = LaurentPoly(allv, {k + tuple(e): v for k, v in self.entries[i][j].terms.items()})
                out = out + lifted
        return out

    def to_json(self) -> list[list[list[dict]]]:
        return [[e.to_json() for e in row] for row in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]


def _matmul3(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(3)), _zero()) for j in range(3)] for i in range(3)]


def _transpose3(A):
    return [[A[j][i] for j in range(3)] for i in range(3)]


def congruence(Q: QuadForm3, S) -> QuadForm3:
    """``S^T Q S``."""
    Qm = [list(r) for r in Q.entries]
    R = _matmul3(_transpose3(S), _matmul3(Qm, S))
    return QuadForm3(tuple(tuple(r) for r in R))


def conic_chart(model: ToricModel, fiber: Sequence[str] = ("u3", "u4")) -> QuadForm3:
    """Read ``f`` as a conic in ``(x0:x1:x2)`` with ``u3 = x1/x0, u4 = x2/x0``."""
    f = model.f
    base = [v for v in f.vars if v not in fiber]
    if tuple(base) != CHART_VARS or len(fiber) != 2:
        raise ValueError(f"expected variables {CHART_VARS} plus two fiber variables, got {f.vars}")
    fi = [f.vars.index(v) for v in fiber]
    bi = [f.vars.index(v) for v in base]
    acc = [[{} for _ in range(3)] for _ in range(3)]
    for e, c in f.terms.items():
        a, b = e[fi[0]], e[fi[1]]
        if a < 0 or b < 0 or a + b > 2:
            raise ValueError("model is not fiberwise quadratic in " + ", ".join(fiber))
        x = [2 - a - b, a, b]
        idx = [k for k in range(3) for _ in range(x[k])]
        i, j = idx
        key = tuple(e[k] for k in bi)
        w = c if i == j else c / 2
        acc[i][j][key] = acc[i][j].get(key, 0) + w
        if i != j:
            acc[j][i][key] = acc[j][i].get(key, 0) + w
    return QuadForm3(tuple(tuple(_lp(acc[i][j]) for j in range(3)) for i in range(3)))


@dataclass(frozen=True)
class Diagonalization:
    form: QuadForm3
    substitutions: tuple[str, ...]
    S: tuple[tuple[LaurentPoly, ...], ...]

    def certificate(self, original: QuadForm3) -> bool:
        return congruence(original, [list(r) for r in self.S]) == self.form


def diagonalize(Q: QuadForm3, pivots: Sequence[int] = (2, 1)) -> Diagonalization:
    """Complete squares on the given pivots in order.

    Each step substitutes ``x_p -> x_p - (a_pi / a_pp) x_i``, which needs
    ``a_pp`` to be a unit of the Laurent ring.
    """
    S = [[_one() if i == j else _zero() for j in range(3)] for i in range(3)]
    cur = Q
    subs = []
    done: list[int] = []
    for p in pivots:
        app = cur[p, p]
        others = [i for i in range(3) if i != p and i not in done and not cur[p, i].is_zero()]
        if not others:
            done.append(p)
            continue
        if not app.is_monomial():
            raise ValueError(f"pivot a_{p}{p} = {app} is not a unit")
        step = [[_one() if i == j else _zero() for j in range(3)] for i in range(3)]
        for i in others:
            coef = -(cur[p, i] / app)
            step[p][i] = coef
            subs.append(f"x{p} -> x{p} + ({coef})*x{i}")
        cur = congruence(cur, step)
        S = _matmul3(S, step)
        done.append(p)
    if not cur.is_diagonal():
        raise ValueError("form is not diagonal after the requested pivots")
    return Diagonalization(cur, tuple(subs), tuple(tuple(r) for r in S))


@dataclass(frozen=True)
class PlaneCurveModel:
    f: LaurentPoly
    lattice_scale: tuple[int, int] = (1, 1)
    empty: bool = False

    def uvars(self) -> tuple[str, str]:
        return tuple(v for v in self.f.vars if v != "alpha")

    def to_json(self) -> dict:
        return {"f": self.f.to_json(), "f_str": str(self.f), "lattice_scale": list(self.lattice_scale),
                "empty": self.empty}


def primitive_normalize(f: LaurentPoly, sign_exp: Sequence[int] | None = None) -> LaurentPoly:
    """Clear monomial content and denominators, divide by the content and fix
    the sign (positive coefficient at ``sign_exp`` if present, else at the
    lex-largest term)."""
    from math import gcd, lcm

    f = f.clear_monomial_content()
    den = 1
    for c in f.terms.values():
        den = lcm(den, c.denominator)
    f = f * den
    g = 0
    for c in f.terms.values():
        g = gcd(g, int(c))
    f = f * Fraction(1, g)
    key = tuple(sign_exp) if sign_exp is not None and tuple(sign_exp) in f.terms else max(f.terms)
    if f.terms[key] < 0:
        f = -f
    return f


def discriminant(Qd: QuadForm3) -> PlaneCurveModel:
    if not Qd.is_diagonal():
        raise ValueError("discriminant expects a diagonal form")
    d = Qd.det()
    if d.is_zero():
        raise ValueError("determinant vanishes identically")
    if d.is_monomial():
        return PlaneCurveModel(LaurentPoly.const(1, d.vars), empty=True)
    return PlaneCurveModel(primitive_normalize(d, (0, 0, 3)))


def double_cover(Qd: QuadForm3, delta: PlaneCurveModel, minor: tuple[int, int] = (1, 2)) -> PlaneCurveModel:
    """Double cover of the discriminant given by ``-delta_1`` (minor on the two
    given diagonal entries): ``-delta_1 = w^2`` turns ``u1`` into ``alpha w^2``.
    """
    i, j = minor
    m = Qd[i, i] * Qd[j, j]
    if m.is_zero():
        raise ValueError("chosen minor vanishes identically")
    # -m = u1/alpha for the reference form; solve -m = w^2 for u1.
    neg = -m
    if not neg.is_monomial():
        raise ValueError("minor must be a monomial to define the cover by a square root")
    (e, c), = neg.terms.items()
    if e[1] != 1 or e[2] != 0 or c != 1:
        raise ValueError(f"minor {m} is not of the form -(alpha^k) u1")
    # u1 * alpha^e0 = w^2  =>  u1 = alpha^(-e0) w^2
    vars_ = delta.f.vars
    alpha, w, u2 = LaurentPoly.gens(vars_)
    image_u1 = LaurentPoly.monomial(vars_, (-e[0], 2, 0))
    g = delta.f.substitute({"alpha": alpha, "u1": image_u1, "u2": u2})
    return PlaneCurveModel(g, lattice_scale=(2, 1))


def covering_identity(delta: PlaneCurveModel, cover: PlaneCurveModel) -> bool:
    vars_ = delta.f.vars
    alpha, u1, u2 = LaurentPoly.gens(vars_)
    return delta.f.substitute({"alpha": alpha, "u1": alpha * u1 * u1, "u2": u2}) == cover.f


@dataclass(frozen=True)
class WeightedCurve:
    F: LaurentPoly
    weights: tuple[int, ...]
    degree: int

    @property
    def hvars(self) -> tuple[str, ...]:
        return self.F.vars[1:]

    def is_homogeneous(self) -> bool:
        return all(sum(w * x for w, x in zip(self.weights, e[1:])) == self.degree for e in self.F.terms)

    def to_json(self) -> dict:
        return {"F": self.F.to_json(), "F_str": str(self.F), "vars": list(self.hvars),
                "weights": list(self.weights), "degree": self.degree}


def projective_closure(c: PlaneCurveModel, weights: Sequence[int], names: Sequence[str] = ("u0", "u1", "u2")) -> WeightedCurve:
    """Weighted homogenization with a new first coordinate of weight ``weights[0]``."""
    w0, w1, w2 = weights
    f = c.f.clear_monomial_content()
    if not f.is_polynomial():
        raise ValueError("model must be polynomial after clearing monomial content")
    degs = [w1 * e[1] + w2 * e[2] for e in f.terms]
    d = max(degs)
    while any((d - x) % w0 for x in degs):
        d += 1
        if d > max(degs) + w0:
            raise ValueError("no common weighted degree")
    hv = ("alpha",) + tuple(names)
    terms = {(e[0], (d - x) // w0, e[1], e[2]): v for (e, v), x in zip(f.terms.items(), degs)}
    return WeightedCurve(LaurentPoly(hv, terms), tuple(weights), d)


def genus_from_polytope(c: PlaneCurveModel) -> int:
    pts = sorted({(e[1], e[2]) for e in c.f.terms})
    if len(pts) < 3 or lat.affine_rank(pts) < 2:
        raise ValueError("Newton polygon is degenerate")
    P = lat.hull_and_facets(pts)
    return len(lat.lattice_points(P, 1, interior_only=True))


def newton_polygon(c: PlaneCurveModel) -> lat.Polytope:
    return lat.hull_and_facets(sorted({(e[1], e[2]) for e in c.f.terms}))


# ---------------------------------------------------------------------------
# Fixed points and branch points
# ---------------------------------------------------------------------------


def _restrict(F: LaurentPoly, values: dict) -> LaurentPoly:
    out = F.evaluate(values)
    return out if isinstance(out, LaurentPoly) else LaurentPoly.const(out, ())


def involution_fixed_points(W: WeightedCurve, alpha=Fraction(1), var: int = 1) -> dict:
    """Fixed points of ``x_var -> -x_var`` on a curve in ``P(w0, w1, w2)``.

    Fixed points are ``{x_var = 0}`` and the points where ``lambda = -1``
    acts as the involution: every other odd-weight coordinate vanishes.
    Points are counted set-theoretically.
    """
    names = W.hvars
    w = W.weights
    F = W.F.evaluate({"alpha": Fraction(alpha)})
    others = [i for i in range(3) if i != var]
    loci = []
    # {x_var = 0}: the weighted line P(w_a, w_b)
    a, b = others
    if w[a] != 1:
        raise ValueError("expected a weight-one coordinate next to the involution variable")
    g = F.evaluate({names[var]: 0, names[a]: 1})
    gu = g.to_unipoly(names[b]) if isinstance(g, LaurentPoly) else UniPoly.const(g)
    n_affine = 0 if gu.is_zero() else distinct_root_count(gu)
    at_pole = F.evaluate({names[var]: 0, names[a]: 0, names[b]: 1}) == 0
    loci.append({
        "locus": f"{names[var]} = 0, {names[a]} = 1",
        "equation": str(gu).replace("t", names[b]),
        "count": n_affine,
    })
    if at_pole:
        loci.append({"locus": f"({names[b]} point)", "equation": f"{names[a]} = {names[var]} = 0", "count": 1})
    # lambda = -1 component
    zero = [i for i in others if w[i] % 2 == 1]
    if w[var] % 2 == 1 and len(zero) == 2:
        pt = {names[i]: 0 for i in zero}
        pt[names[var]] = 1
        on = F.evaluate(pt) == 0
        coords = ":".join("1" if i == var else "0" for i in range(3))
        loci.append({"locus": f"({coords})", "equation": " = ".join(names[i] for i in zero) + " = 0",
                     "count": int(on)})
    total = sum(l["count"] for l in loci)
    return {"total": total, "loci": loci, "alpha": rat_to_str(Fraction(alpha))}


def branch_points(N: WeightedCurve, Ntilde: WeightedCurve) -> dict:
    """Images of the fixed points under ``(x0:x1:y) -> (x0^3 : alpha x1^2 x0 : y)``.

    The fixed points on ``x1 = 0`` map to ``u1 = 0``; there ``N`` restricts
    to ``u0 * R(u0, u2)`` and the branch points are ``R = 0``.  The point
    ``(0:1:0)`` is handled by a local branch ``x0 = t``, ``y = y(t)``.
    """
    u0, u1, u2 = N.hvars
    on_line = N.F.evaluate({u1: 0})
    content = on_line.monomial_content()
    R = on_line.clear_monomial_content()
    # local branch of Ntilde at (0:1:0) in the chart x1 = 1
    x0, x1, y = Ntilde.hvars
    chart = Ntilde.F.evaluate({x1: 1})
    ai, ti, yi = 0, 1, 2
    lin = {e: c for e, c in chart.terms.items() if e[yi] == 1 and e[ti] == 0}
    free = [e for e in chart.terms if e[yi] == 0]
    if not lin or not free:
        raise ValueError("unexpected shape of the curve near (0:1:0)")
    y_order = min(e[ti] for e in free)  # y(t) = O(t^y_order)
    # image (t^3 : alpha t : y(t)) ~ (t^2 : alpha : y(t)/t) -> (0:1:0) when y_order >= 2
    p0 = "(0:1:0)" if y_order >= 2 else "undetermined"
    p0_on_N = N.F.evaluate({u0: 0, u1: 1, u2: 0}) == 0
    return {
        "p0": p0,
        "p0_on_N": bool(p0_on_N),
        "y_order_at_p0": y_order,
        "p1_p3": f"{u1} = 0, {R} = 0",
        "p1_p3_equation": R.to_json(),
        "line_content": list(content),
        "count": 1 + 3,
    }


# ---------------------------------------------------------------------------
# Rank stratification
# ---------------------------------------------------------------------------


def delta_alpha(u1: Fraction, u2: Fraction) -> Fraction:
    """The alpha for which ``(u1, u2)`` lies on the discriminant curve."""
    return u1 * u2 * u2 - 4 * u1 ** 3 * u2 - 4 * u2 ** 3


def _rand_rat(rng: random.Random) -> Fraction:
    while True:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if q:
            return q


def rank_table(Q: QuadForm3, delta: PlaneCurveModel, seed: int = 0, n: int = 10) -> dict:
    """Exact ranks of the chart at sampled points on and off the discriminant."""
    rng = random.Random(seed)
    on, off = [], []
    while len(on) < n:
        u1, u2 = _rand_rat(rng), _rand_rat(rng)
        a = delta_alpha(u1, u2)
        if a == 0:
            continue
        pt = {"alpha": a, "u1": u1, "u2": u2}
        assert delta.f.evaluate(pt) == 0
        on.append((pt, lat.rank_q(Q.evaluate(pt))))
    while len(off) < n:
        pt = {"alpha": _rand_rat(rng), "u1": _rand_rat(rng), "u2": _rand_rat(rng)}
        if delta.f.evaluate(pt) == 0:
            continue
        off.append((pt, lat.rank_q(Q.evaluate(pt))))

    def fmt(rows):
        return [{"alpha": rat_to_str(p["alpha"]), "u1": rat_to_str(p["u1"]), "u2": rat_to_str(p["u2"]), "rank": r}
                for p, r in rows]

    return {"seed": seed, "on": fmt(on), "off": fmt(off),
            "on_ranks": sorted({r for _, r in on}), "off_ranks": sorted({r for _, r in off})}


# ---------------------------------------------------------------------------
# Smoothness certificates
# ---------------------------------------------------------------------------


def _bivariate(f: LaurentPoly, x: str, y: str) -> dict[int, UniPoly]:
    """``f`` as ``{deg_y: coefficient in Q[x]}``."""
    xi, yi = f.vars.index(x), f.vars.index(y)
    out: dict[int, dict[int, Fraction]] = {}
    for e, c in f.terms.items():
        out.setdefault(e[yi], {})[e[xi]] = c
    return {k: UniPoly([d.get(i, 0) for i in range(max(d) + 1)]) for k, d in out.items()}


def _sylvester_det(p: list[Fraction], q: list[Fraction]) -> Fraction:
    """Resultant of dense coefficient lists (low to high) with formal degrees."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(p)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(q)) + [0] * (size - n - 1 - i))
    return lat.det(rows)


def resultant(f: LaurentPoly, g: LaurentPoly, x: str, y: str) -> UniPoly:
    """``Res_y(f, g)`` in ``Q[x]`` by evaluation at integer points and
    interpolation up to the Bezout-type degree bound."""
    F, G = _bivariate(f, x, y), _bivariate(g, x, y)
    m, n = max(F), max(G)
    dF = max(p.degree for p in F.values())
    dG = max(p.degree for p in G.values())
    bound = n * dF + m * dG
    xs = list(range(bound + 1))
    vals = []
    for a in xs:
        p = [F[k](Fraction(a)) if k in F else Fraction(0) for k in range(m + 1)]
        q = [G[k](Fraction(a)) if k in G else Fraction(0) for k in range(n + 1)]
        vals.append(_sylvester_det(p, q))
    return _interpolate(xs, vals)


def _interpolate(xs: list[int], ys: list[Fraction]) -> UniPoly:
    out = UniPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        basis = UniPoly.const(1)
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * UniPoly([-xj, 1])
                denom *= xi - xj
        out = out + basis * (yi / denom)
    return out


def _strip_t(p: UniPoly) -> UniPoly:
    cs = list(p.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
    return UniPoly(cs)


@dataclass
class SmoothnessCertificate:
    torus_smooth: bool
    affine_smooth: bool
    resultants: list[UniPoly]
    common: UniPoly
    singular_points: list[tuple[complex, complex]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "torus_smooth": self.torus_smooth,
            "affine_smooth": self.affine_smooth,
            "resultants": [[rat_to_str(c) for c in r.coeffs] for r in self.resultants],
            "gcd": [rat_to_str(c) for c in self.common.coeffs],
            "singular_points": [[_cstr(a), _cstr(b)] for a, b in self.singular_points],
        }


def _cstr(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}j"


def smoothness_certificate(c: PlaneCurveModel, alpha=Fraction(1), swap: bool = False) -> SmoothnessCertificate:
    """Certify that ``{f = f_x = f_y = 0}`` has no solution in the torus.

    ``u2`` is eliminated by resultants; the gcd of the two resultants holds
    every candidate ``u1``.  Candidates are back-substituted numerically.
    """
    alpha = Fraction(alpha)
    if alpha == 0:
        raise ValueError("alpha sample must be nonzero")
    f = c.f.evaluate({"alpha": alpha}) if "alpha" in c.f.vars else c.f
    if not isinstance(f, LaurentPoly) or f.arity != 2:
        raise ValueError("smoothness certificate needs a two-variable model")
    f = f.clear_monomial_content()
    x, y = f.vars if not swap else tuple(reversed(f.vars))
    fx, fy = f.derivative(x), f.derivative(y)
    r1 = resultant(f, fx, x, y)
    r2 = resultant(f, fy, x, y)
    if r1.is_zero() or r2.is_zero():
        if not swap:
            return smoothness_certificate(c, alpha, swap=True)
        raise ValueError("resultant vanishes identically for both elimination orders")
    g = poly_gcd(r1, r2)
    candidates = []
    if not g.is_zero() and g.degree > 0:
        mpmath.mp.dps = 50
        roots = mpmath.polyroots([mpmath.mpf(a.numerator) / a.denominator for a in reversed(g.coeffs)],
                                 maxsteps=200, extraprec=200)
        for a in roots:
            fa = _at(f, x, a)
            for b in fa:
                vals = [_eval_c(p, {x: a, y: b}) for p in (f, fx, fy)]
                if max(abs(v) for v in vals) < 1e-20:
                    candidates.append((complex(a), complex(b)))
    sing = sorted(set((_round(a), _round(b)) for a, b in candidates), key=lambda z: (z[0].real, z[0].imag))
    torus_sing = [(a, b) for a, b in sing if abs(a) > 1e-12 and abs(b) > 1e-12]
    if swap:
        sing = [(b, a) for a, b in sing]
        torus_sing = [(b, a) for a, b in torus_sing]
    return SmoothnessCertificate(not torus_sing, not sing, [r1, r2], g, sing)


def _round(z) -> complex:
    z = complex(z)
    return complex(round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0)


def _eval_c(p: LaurentPoly, point: dict):
    total = mpmath.mpc(0)
    for e, c in p.terms.items():
        t = mpmath.mpf(c.numerator) / c.denominator
        for v, k in zip(p.vars, e):
            t *= point[v] ** k
        total += t
    return total


def _at(f: LaurentPoly, x: str, a) -> list:
    """Roots in the other variable of ``f(a, .)``."""
    y = [v for v in f.vars if v != x][0]
    yi = f.vars.index(y)
    xi = f.vars.index(x)
    coeffs: dict[int, object] = {}
    for e, c in f.terms.items():
        coeffs[e[yi]] = coeffs.get(e[yi], 0) + mpmath.mpf(c.numerator) / c.denominator * a ** e[xi]
    deg = max(coeffs)
    dense = [coeffs.get(k, 0) for k in range(deg, -1, -1)]
    while dense and abs(dense[0]) < mpmath.mpf(10) ** -40:
        dense.pop(0)
    if len(dense) <= 1:
        return []
    return list(mpmath.polyroots(dense, maxsteps=200, extraprec=200))


# ---------------------------------------------------------------------------
# Critical fiber
# ---------------------------------------------------------------------------


@dataclass
class CriticalWitness:
    alpha: Fraction
    residual: float
    proportionality: float
    iterations: int
    converged: bool
    point: list[complex]

    def to_json(self) -> dict:
        return {"alpha": rat_to_str(self.alpha), "residual": f"{self.residual:.3e}",
                "proportionality": f"{self.proportionality:.3e}", "iterations": self.iterations,
                "converged": self.converged, "point": [_cstr(z) for z in self.point]}


def critical_alpha(model: ToricModel) -> Fraction:
    """``alpha`` with ``(f, u grad f)`` solvable on the torus: ``-prod g^g``."""
    v = Fraction(1)
    for g in model.gamma.entries:
        v *= Fraction(g) ** g
    return -v


def critical_alpha_certificate(model: ToricModel, perturb: float = 1e-3, seed: int = 0,
                               max_iter: int = 200, dps: int = 50) -> CriticalWitness:
    """Damped Gauss-Newton on ``(f, u_j d f/d u_j)`` in log coordinates."""
    with mpmath.workdps(dps):
        return _critical_witness(model, perturb, seed, max_iter, dps)


def _critical_witness(model: ToricModel, perturb: float, seed: int, max_iter: int, dps: int) -> CriticalWitness:
    a = critical_alpha(model)
    gam = model.gamma.entries
    M = [list(m) for m in model.monomials.points]
    n = len(M[0])
    alpha = mpmath.mpf(a.numerator) / a.denominator
    coeff = [(-alpha) ** k for k in model.kexp]
    # exact-start: log t_i = log(lambda gamma_i) = log c_i + m_i . x
    rhs = [mpmath.log(mpmath.mpc(g)) - mpmath.log(mpmath.mpc(c)) for g, c in zip(gam, coeff)]
    wind = sum(g * r for g, r in zip(gam, rhs)) / (2j * mpmath.pi)
    k = int(mpmath.nint(wind.real))
    if k:
        _, kv = lat.extended_gcd_vector(gam)
        rhs = [r - 2j * mpmath.pi * k * kk for r, kk in zip(rhs, kv)]
    A = mpmath.matrix([[-1] + [mm for mm in m] for m in M])  # unknowns (log lambda, x)
    b = mpmath.matrix(rhs)
    sol, _ = mpmath.qr_solve(A, b)
    rng = random.Random(seed)
    x = [sol[1 + j] + perturb * complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for j in range(n)]

    def system(x):
        t = [c * mpmath.exp(mpmath.fsum(mm * xx for mm, xx in zip(m, x))) for c, m in zip(coeff, M)]
        F = [mpmath.fsum(t)] + [mpmath.fsum(ti * m[j] for ti, m in zip(t, M)) for j in range(n)]
        return t, F

    def norm(F):
        return mpmath.sqrt(mpmath.fsum(abs(v) ** 2 for v in F))

    t, F = system(x)
    res = norm(F)
    it = 0
    scale = max(abs(ti) for ti in t)
    tol = mpmath.mpf(10) ** -(dps // 2)
    while it < max_iter and res > tol * scale:
        it += 1
        J = mpmath.matrix(n + 1, n)
        for j in range(n):
            J[0, j] = mpmath.fsum(ti * m[j] for ti, m in zip(t, M))
            for r in range(n):
                J[1 + r, j] = mpmath.fsum(ti * m[r] * m[j] for ti, m in zip(t, M))
        dx, _ = mpmath.qr_solve(J, mpmath.matrix([-v for v in F]))
        step = mpmath.mpf(1)
        while True:
            xn = [xx + step * dx[j] for j, xx in enumerate(x)]
            tn, Fn = system(xn)
            rn = norm(Fn)
            if rn < res or step < mpmath.mpf(2) ** -30:
                break
            step /= 2
        x, t, F, res = xn, tn, Fn, rn
    ratios = [ti / g for ti, g in zip(t, gam)]
    ref = ratios[0]
    prop = max(abs(r - ref) / abs(ref) for r in ratios)
    point = [complex(mpmath.exp(xx)) for xx in x]
    return CriticalWitness(a, float(res), float(prop), it, bool(res < 1e-10), point)


# ---------------------------------------------------------------------------
# Reference-chart helpers
# ---------------------------------------------------------------------------


def divisor_checks(Q: QuadForm3) -> dict:
    """Restrictions of the conic to ``x0 = 0`` and to ``x1 = x2 = 0``."""
    q = Q.quadric()
    at_x0 = q.evaluate({"x0": 0})
    at_x12 = q.evaluate({"x1": 0, "x2": 0})
    return {"x0=0": at_x0, "x1=x2=0": at_x12}


def finite_field_cover_check(delta: PlaneCurveModel, cover: PlaneCurveModel, p: int, alpha: int) -> tuple[int, int]:
    """``(#cover points, sum over delta points of 1 + chi(u1/alpha))`` over F_p."""
    n_cover = count_torus_points(cover.f, p, alpha)
    a = alpha % p
    grid = np.arange(1, p, dtype=np.int64)
    U1, U2 = np.meshgrid(grid, grid, indexing="ij")
    total = np.zeros(U1.shape, dtype=np.int64)
    for e, c in delta.f.terms.items():
        term = _mod_p(c, p) * pow(a, e[0] % (p - 1), p) % p
        term = term * _powmod(U1, e[1], p) % p * _powmod(U2, e[2], p) % p
        total = (total + term) % p
    mask = total == 0
    ainv = pow(a, -1, p)
    x = U1[mask] * ainv % p
    chi = _powmod(x, (p - 1) // 2, p)
    chi = np.where(chi == 1, 1, -1)
    return n_cover, int(np.sum(1 + chi))


def _powmod(X: np.ndarray, e: int, p: int) -> np.ndarray:
    e %= p - 1
    out = np.ones_like(X)
    base = X % p
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


@dataclass
class ConicAnalysis:
    chart: QuadForm3
    diag: Diagonalization
    delta: PlaneCurveModel
    cover: PlaneCurveModel
    N: WeightedCurve
    Ntilde: WeightedCurve
    genus: int
    genus_cover: int
    fixed: dict
    branch: dict


def analyze(model: ToricModel, alpha=Fraction(1)) -> ConicAnalysis:
    chart = conic_chart(model)
    d = diagonalize(chart)
    delta = discriminant(d.form)
    cover = double_cover(d.form, delta)
    N = projective_closure(delta, (1, 1, 1), ("u0", "u1", "u2"))
    Nt = projective_closure(cover, (1, 1, 3), ("x0", "x1", "y"))
    return ConicAnalysis(chart, d, delta, cover, N, Nt, genus_from_polytope(delta), genus_from_polytope(cover),
                         involution_fixed_points(Nt, alpha), branch_points(N, Nt))
