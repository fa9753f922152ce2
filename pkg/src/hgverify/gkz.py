"""GKZ systems attached to gamma lists, their toric models and the restriction
to the alpha-line."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import lattice as lat
from .exact import LaurentPoly, UniPoly
from .hypergeom import GammaList, build_reducible_operator
from .lattice import PointConfig
from .ore import OreOp

REFERENCE_MONOMIALS = ((1, 1, 1, 0), (0, 0, 0, 2), (0, 0, 0, 1), (3, 1, 0, 0), (0, 3, 0, 0), (1, 0, 2, 0))
REFERENCE_KEXP = (0, -1, 0, 0, 0, 0)
ALT_MONOMIALS = ((0, 0, 0, 0), (2, 3, 5, 9), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
# k = (0,1,0,...) would give sum k_i gamma_i = -1; the sign must be negative.
ALT_KEXP = (0, -1, 0, 0, 0, 0)
# u1 -> u4/(u1 u2 u3), u2 -> u1^2/u3, u3 -> u2^2/(u1 u3), u4 -> u3/u2
ALT_TO_REFERENCE = ((-1, -1, -1, 1), (2, 0, -1, 0), (-1, 2, -1, 0), (0, -1, 1, 0))


def torus_vars(n: int) -> tuple[str, ...]:
    return ("alpha",) + tuple(f"u{i + 1}" for i in range(n))


@dataclass(frozen=True)
class ToricModel:
    gamma: GammaList
    monomials: PointConfig
    kexp: tuple[int, ...]
    f: LaurentPoly

    def to_json(self) -> dict:
        return {
            "gamma": list(self.gamma.entries),
            "monomials": [list(p) for p in self.monomials.points],
            "kexp": list(self.kexp),
            "vars": list(self.f.vars),
            "f": self.f.to_json(),
            "f_str": str(self.f),
        }


def toric_polynomial(monomials: Sequence[Sequence[int]], kexp: Sequence[int]) -> LaurentPoly:
    """``sum (-alpha)^{k_i} u^{m_i}``."""
    n = len(monomials[0])
    terms = {}
    for m, k in zip(monomials, kexp):
        e = (int(k),) + tuple(int(x) for x in m)
        terms[e] = terms.get(e, 0) + (-1) ** (int(k) % 2)
    return LaurentPoly(torus_vars(n), terms)


def make_model(gamma: GammaList, monomials, kexp) -> ToricModel:
    if len(monomials) != len(gamma) or len(kexp) != len(gamma):
        raise ValueError("monomials and kexp must match the gamma list length")
    if sum(k * g for k, g in zip(kexp, gamma.entries)) != 1:
        raise ValueError("kexp must satisfy sum k_i gamma_i = 1")
    dim = len(monomials[0])
    for c in range(dim):
        if sum(g * m[c] for g, m in zip(gamma.entries, monomials)) != 0:
            raise ValueError("sum gamma_i m_i must vanish")
    cfg = PointConfig(dim, tuple(tuple(m) for m in monomials), gamma.entries)
    return ToricModel(gamma, cfg, tuple(kexp), toric_polynomial(monomials, kexp))


def reference_model() -> ToricModel:
    return make_model(GammaList((-18, -1, 2, 3, 5, 9)), REFERENCE_MONOMIALS, REFERENCE_KEXP)


def alt_model() -> ToricModel:
    return make_model(GammaList((-18, -1, 2, 3, 5, 9)), ALT_MONOMIALS, ALT_KEXP)


def alt_to_reference(f: LaurentPoly) -> LaurentPoly:
    """Apply the coordinate change to the alternate (diagonal-weight) equation and multiply by u1 u2 u3."""
    from .exact import laurent_substitute

    vars_ = f.vars
    alpha = LaurentPoly.monomial(vars_, (1, 0, 0, 0, 0))
    images = [alpha] + [LaurentPoly.monomial(vars_, (0,) + e) for e in ALT_TO_REFERENCE]
    return laurent_substitute(f, images) * LaurentPoly.monomial(vars_, (0, 1, 1, 1, 0))


def affine_span_primitive(monomials: Sequence[Sequence[int]]) -> bool:
    """SNF certificate: the lifted points ``(1, m_i)`` generate the full lattice."""
    M = [[1] * len(monomials)] + lat.transpose(monomials)
    f = lat.invariant_factors(M)
    return len(f) == len(M) and all(x == 1 for x in f)


def realize_monomials(gamma: GammaList) -> ToricModel:
    """Monomials from a basis of the saturated lattice gamma-perp that contains
    the all-ones vector; the rest of the basis (in Hermite form) gives the rows
    of the monomial matrix."""
    if not gamma.is_primitive():
        raise ValueError(f"gamma list {gamma} is not primitive")
    N = len(gamma)
    K = lat.integer_kernel([list(gamma.entries)], ncols=N)  # N x (N-1)
    ones = [1] * N
    # coordinates of the all-ones vector in the kernel basis
    r = lat.rank_q(K)
    rows = [[K[i][j] for j in range(r)] for i in range(N)]
    sub_idx = []
    for i in range(N):
        if lat.rank_q([rows[s] for s in sub_idx] + [rows[i]]) > len(sub_idx):
            sub_idx.append(i)
    c = lat.solve_q([rows[i] for i in sub_idx], [ones[i] for i in sub_idx])
    c = [int(x) for x in c]
    U = lat.complete_to_unimodular(c)
    B = lat.matmul(K, U)  # first column is the all-ones vector
    assert [row[0] for row in B] == ones
    others = [[B[i][j] for i in range(N)] for j in range(1, N - 1)]
    others = lat.hermite_normal_form(others)
    monomials = lat.transpose(others)
    g, kexp = lat.extended_gcd_vector(gamma.entries)
    assert g == 1
    return make_model(gamma, monomials, kexp)


@dataclass(frozen=True)
class GKZSystem:
    A: PointConfig
    Abar: PointConfig
    beta: tuple[Fraction, ...]
    euler_ops: tuple[tuple[int, ...], ...]
    box_ops: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    generates_lattice: bool = True

    @property
    def relations(self) -> list[tuple[int, ...]]:
        return [tuple(a - b for a, b in zip(p, m)) for p, m in self.box_ops]

    def to_json(self) -> dict:
        return {
            "points": [list(p) for p in self.A.points],
            "beta": [str(b) for b in self.beta],
            "euler": [list(r) for r in self.euler_ops],
            "box": [{"plus": list(p), "minus": list(m)} for p, m in self.box_ops],
            "generates_lattice": self.generates_lattice,
        }

    def box_strings(self) -> list[str]:
        out = []
        for p, m in self.box_ops:
            def mono(e):
                s = "".join(f"d{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
                return s or "1"
            out.append(f"{mono(p)} - {mono(m)}")
        return out


def build_gkz(A: PointConfig, beta: Sequence = ()) -> GKZSystem:
    beta = tuple(Fraction(b) for b in beta) or (Fraction(0),) * (A.dim + 1)
    if any(beta):
        raise ValueError("only beta = 0 is supported")
    Abar = A.lifted()
    rows = Abar.columns()
    if lat.rank_q(rows) != A.dim + 1:
        raise ValueError("lifted points do not span a rank-(n+1) lattice")
    f = lat.invariant_factors(rows)
    generates = all(x == 1 for x in f)
    K = lat.integer_kernel(rows, ncols=len(A.points))
    box = []
    for j in range(len(K[0]) if K and K[0] else 0):
        l = [K[i][j] for i in range(len(K))]
        box.append((tuple(max(x, 0) for x in l), tuple(max(-x, 0) for x in l)))
    return GKZSystem(A, Abar, beta, tuple(tuple(r) for r in rows), tuple(box), generates)


def euler_annihilates_box(sys: GKZSystem) -> bool:
    return all(sum(r * x for r, x in zip(row, l)) == 0 for row in sys.euler_ops for l in sys.relations)


def row_equivalent(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> bool:
    return lat.hermite_normal_form(A) == lat.hermite_normal_form(B)


def falling_theta(g: int, n: int) -> UniPoly:
    """``prod_{s<n} (g*theta - s)``: ``v^n d^n`` when ``v d = g*theta``."""
    p = UniPoly.const(1)
    for s in range(n):
        p = p * UniPoly([-s, g])
    return p


@dataclass(frozen=True)
class Restriction:
    """Restriction of the box equation to the alpha-line.

    ``operator`` is ``P(D) - alpha * Q(D)`` after ``w = -alpha``; with
    ``Q = D^k S(D)``, ``D^k o operator = normalized o D^k`` where
    ``normalized = P(D) - alpha (D+1)^k S(D)``.  ``unit`` is the rational c with
    ``normalized = c * target`` (``target`` = the reducible operator, with
    alpha replaced by -alpha when ``alpha_sign`` is -1).
    """

    w_operator: OreOp
    operator: OreOp
    normalized: OreOp
    shift: int
    intertwines: bool
    euler_vanish: tuple[int, ...]
    unit: Fraction | None
    alpha_sign: int

    def to_json(self) -> dict:
        return {
            "w_operator": self.w_operator.to_json(),
            "operator": self.operator.to_json(),
            "operator_str": str(self.operator),
            "normalized": self.normalized.to_json(),
            "shift": self.shift,
            "intertwines": self.intertwines,
            "euler_vanish": list(self.euler_vanish),
            "unit": None if self.unit is None else str(self.unit),
            "alpha_sign": self.alpha_sign,
        }


def negate_alpha(op: OreOp) -> OreOp:
    return OreOp({k: LaurentPoly(c.vars, {e: v * (-1) ** (e[0] % 2) for e, v in c.terms.items()})
                  for k, c in op.terms.items()})


def restrict_to_line(sys: GKZSystem, gamma: GammaList, kexp: Sequence[int] | None = None) -> Restriction:
    if len(sys.box_ops) != 1:
        raise ValueError(f"relation lattice has rank {len(sys.box_ops)}, expected 1")
    l = sys.relations[0]
    if tuple(l) not in (gamma.entries, tuple(-x for x in gamma.entries)):
        raise ValueError("relation lattice is not generated by gamma")
    if kexp is not None and sum(k * g for k, g in zip(kexp, gamma.entries)) != 1:
        raise ValueError("kexp must satisfy sum k_i gamma_i = 1")
    # Ansatz Phi = G(w), w = prod v_i^gamma_i: v_i d_i acts as gamma_i theta.
    euler = tuple(sum(r * g for r, g in zip(row, gamma.entries)) for row in sys.euler_ops)
    P = UniPoly.const(1)
    Qs = UniPoly.const(1)
    for g in gamma.entries:
        if g > 0:
            P = P * falling_theta(g, g)
        else:
            Qs = Qs * falling_theta(g, -g)
    # v^{l+} box = P(theta) - w Qs(theta)
    w_op = OreOp.from_theta_poly(P) - OreOp.from_theta_poly(Qs, 1)
    # w = -alpha, and theta_w = D
    L = OreOp.from_theta_poly(P) + OreOp.from_theta_poly(Qs, 1)
    Q = -Qs  # L = P - alpha Q
    k = 0
    while Q.coeffs[k] == 0:
        k += 1
    S = UniPoly(Q.coeffs[k:])
    shifted = UniPoly([1, 1]) ** k * S
    Lnorm = OreOp.from_theta_poly(P) - OreOp.from_theta_poly(shifted, 1)
    Dk = OreOp.D() ** k
    intertwines = Dk * L == Lnorm * Dk
    target = build_reducible_operator(gamma)
    sign = 1
    unit = Lnorm.proportional_to(target)
    if unit is None:
        unit = Lnorm.proportional_to(negate_alpha(target))
        sign = -1 if unit is not None else 1
    return Restriction(w_op, L, Lnorm, k, intertwines, euler, unit, sign)


def _mod_p(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise ValueError(f"coefficient {c} has a denominator divisible by {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def count_torus_points(f: LaurentPoly, p: int, alphaval: int, alpha_var: str = "alpha",
                       budget: int = lat.DEFAULT_BUDGET) -> int:
    """Points of ``f = 0`` in ``(F_p^x)^n`` with alpha specialized (brute force)."""
    return count_torus_points_many(f, p, [alphaval], alpha_var, budget)[0]


def count_torus_points_many(f: LaurentPoly, p: int, alphavals: Sequence[int], alpha_var: str = "alpha",
                            budget: int = lat.DEFAULT_BUDGET) -> list[int]:
    """Torus point counts for several alpha values; the monomial values on the
    grid are computed once and shared."""
    alphavals = [a % p for a in alphavals]
    if any(a == 0 for a in alphavals):
        raise ValueError("alpha must be a unit mod p")
    vars_ = list(f.vars)
    ai = vars_.index(alpha_var) if alpha_var in vars_ else None
    uidx = [i for i in range(len(vars_)) if i != ai]
    n = len(uidx)
    if (p - 1) ** n > budget:
        raise lat.BudgetExceeded(f"(p-1)^{n} = {(p - 1) ** n} exceeds the budget of {budget}")
    units = np.arange(1, p, dtype=np.int64)
    # pw[e, x-1] = x^e mod p for e mod (p-1)
    pw = np.ones((p - 1, p - 1), dtype=np.int64)
    for e in range(1, p - 1):
        pw[e] = pw[e - 1] * units % p
    idx = [g.ravel() for g in np.meshgrid(*([np.arange(p - 1)] * n), indexing="ij")] if n else []
    shape = idx[0].shape if idx else (1,)
    # group terms by alpha exponent: f = sum_k alpha^k g_k(u)
    groups: dict[int, np.ndarray] = {}
    for e, c in f.terms.items():
        term = np.full(shape, _mod_p(c, p), dtype=np.int64)
        for j, i in enumerate(uidx):
            if e[i]:
                term = term * pw[e[i] % (p - 1)][idx[j]] % p
        k = e[ai] if ai is not None else 0
        groups[k] = (groups[k] + term) % p if k in groups else term
    out = []
    for a in alphavals:
        total = np.zeros(shape, dtype=np.int64)
        for k, g in groups.items():
            total = (total + pow(a, k % (p - 1), p) * g) % p
        out.append(int(np.count_nonzero(total == 0)))
    return out


def model_counts_agree(p: int, alphas: Sequence[int] | None = None) -> tuple[bool, list[tuple[int, int, int]]]:
    """Compare torus counts of the alternate and reference models."""
    fb = alt_model().f
    fp = reference_model().f
    alphas = list(alphas or range(1, p))
    cb = count_torus_points_many(fb, p, alphas)
    cp = count_torus_points_many(fp, p, alphas)
    rows = list(zip(alphas, cb, cp))
    return all(x == y for _, x, y in rows), rows
