"""Gamma lists: series coefficients, local exponents and hypergeometric operators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Sequence

from .exact import UniPoly, cyclotomic, poly_identity_check, rat_to_str, totient
from .ore import OreOp


@dataclass(frozen=True)
class GammaList:
    entries: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", e)
        if any(x == 0 for x in e):
            raise ValueError("gamma entries must be nonzero")
        if sum(e) != 0:
            raise ValueError(f"gamma list {list(e)} is not balanced (sum {sum(e)})")
        if not any(x > 0 for x in e) or not any(x < 0 for x in e):
            raise ValueError("gamma list needs positive and negative entries")

    @classmethod
    def parse(cls, s: str | Sequence[int]) -> "GammaList":
        if isinstance(s, str):
            try:
                s = [int(x) for x in s.replace(" ", "").split(",") if x]
            except ValueError as exc:
                raise ValueError(f"cannot parse gamma list {s!r}") from exc
        return cls(tuple(s))

    @property
    def positive(self) -> list[int]:
        return [x for x in self.entries if x > 0]

    @property
    def negative(self) -> list[int]:
        return [-x for x in self.entries if x < 0]

    def is_primitive(self) -> bool:
        g = 0
        for x in self.entries:
            g = gcd(g, x)
        return g == 1

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))


GAMMA_STAR = GammaList((-18, -1, 2, 3, 5, 9))


@dataclass(frozen=True)
class ExponentData:
    """Reduced local exponents: ``exps0`` in [0,1), ``expsInf`` in (0,1]."""

    exps0: tuple[Fraction, ...]
    expsInf: tuple[Fraction, ...]
    order: int
    alpha0: Fraction
    cancelled: tuple[Fraction, ...] = ()

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "alpha0": rat_to_str(self.alpha0),
            "exps0": [rat_to_str(x) for x in self.exps0],
            "expsInf": [rat_to_str(x) for x in self.expsInf],
            "cancelled": [rat_to_str(x) for x in self.cancelled],
        }


def coefficient(gamma: GammaList, j: int) -> Fraction:
    """``prod_{g<0} (|g| j)! / prod_{g>0} (g j)!``."""
    num = 1
    for g in gamma.negative:
        num *= factorial(g * j)
    den = 1
    for g in gamma.positive:
        den *= factorial(g * j)
    return Fraction(num, den)


def series(gamma: GammaList, K: int) -> list[Fraction]:
    """``A_0, ..., A_{K-1}``."""
    return [coefficient(gamma, j) for j in range(K)]


def integrality_scan(gamma: GammaList, upto: int = 200) -> bool:
    return all(coefficient(gamma, j).denominator == 1 for j in range(upto + 1))


def singular_value(gamma: GammaList) -> Fraction:
    """``prod |g|^g``; the point where the ratio ``A_{j+1}/A_j`` tends to ``1/alpha``."""
    v = Fraction(1)
    for g in gamma.entries:
        v *= Fraction(abs(g)) ** g
    return v


def _exponents0(gamma: GammaList) -> list[Fraction]:
    return sorted(Fraction(k, g) for g in gamma.positive for k in range(g))


def _exponents_inf(gamma: GammaList) -> list[Fraction]:
    return sorted(Fraction(k, g) for g in gamma.negative for k in range(1, g + 1))


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def reduced_exponents(gamma: GammaList) -> ExponentData:
    """Cancel the common classes (mod 1) of the two exponent multisets."""
    s0 = Counter(_mod1(b) for b in _exponents0(gamma))
    sinf = Counter(_mod1(a) for a in _exponents_inf(gamma))
    common = s0 & sinf
    r0 = s0 - common
    rinf = sinf - common
    exps0 = tuple(sorted(r0.elements()))
    exps_inf = tuple(sorted(a if a else Fraction(1) for a in rinf.elements()))
    return ExponentData(exps0, exps_inf, len(exps0), singular_value(gamma), tuple(sorted(common.elements())))


def theta_product(roots: Iterable[Fraction], shift: int = 1) -> UniPoly:
    """``prod (t - shift * r)`` as a polynomial in t."""
    p = UniPoly.const(1)
    for r in roots:
        p = p * UniPoly([-shift * r, 1])
    return p


def build_irreducible_operator(gamma: GammaList) -> OreOp:
    ed = reduced_exponents(gamma)
    return (OreOp.from_theta_poly(theta_product(ed.exps0), 0, ed.alpha0)
            - OreOp.from_theta_poly(theta_product(ed.expsInf, -1), 1))


def build_reducible_operator(gamma: GammaList) -> OreOp:
    a0 = singular_value(gamma)
    return (OreOp.from_theta_poly(theta_product(_exponents0(gamma)), 0, a0)
            - OreOp.from_theta_poly(theta_product(_exponents_inf(gamma), -1), 1))


def build_cancelled_factor(gamma: GammaList) -> OreOp:
    """``G = prod_{b in C} (D - b)`` over the cancelled classes C."""
    return OreOp.from_theta_poly(theta_product(reduced_exponents(gamma).cancelled))


def cyclotomic_factors(exps: Iterable[Fraction]) -> dict[int, int]:
    """Group exponents into cyclotomic factors ``{n: multiplicity}``.

    The exponents ``k/n`` (``gcd(k, n) = 1``) of a factor phi_n must all be
    present with equal multiplicity.
    """
    by_den: dict[int, Counter] = {}
    for x in exps:
        x = _mod1(Fraction(x))
        by_den.setdefault(x.denominator, Counter())[x] += 1
    out = {}
    for n, cnt in sorted(by_den.items()):
        mults = {cnt.get(Fraction(k, n), 0) for k in range(n) if gcd(k, n) == 1}
        if len(mults) != 1 or sum(cnt.values()) != totient(n) * next(iter(mults)):
            raise ValueError(f"exponents with denominator {n} do not form full primitive-root orbits")
        out[n] = mults.pop()
    return out


def cyclotomic_product(factors: dict[int, int]) -> UniPoly:
    p = UniPoly.const(1)
    for n, m in sorted(factors.items()):
        p = p * cyclotomic(n) ** m
    return p


def local_charpolys(gamma: GammaList) -> tuple[dict[int, int], dict[int, int]]:
    ed = reduced_exponents(gamma)
    return cyclotomic_factors(ed.exps0), cyclotomic_factors(ed.expsInf)


def bh_ratio_check(gamma: GammaList) -> bool:
    """Exact check of ``q_inf * prod_{g>0}(t^g - 1) == q_0 * prod_{g<0}(t^|g| - 1)``."""
    f0, finf = local_charpolys(gamma)
    q0, qinf = cyclotomic_product(f0), cyclotomic_product(finf)
    lhs, rhs = qinf, q0
    for g in gamma.positive:
        lhs = lhs * (UniPoly.t() ** g - 1)
    for g in gamma.negative:
        rhs = rhs * (UniPoly.t() ** g - 1)
    return poly_identity_check(lhs, rhs)


def recursion_ratio(gamma: GammaList, j: int) -> Fraction:
    """``A_{j+1}/A_j`` read off the exponent products of the reducible operator."""
    a0 = singular_value(gamma)
    num = Fraction(1)
    for a in _exponents_inf(gamma):
        num *= j + a
    den = a0
    for b in _exponents0(gamma):
        den *= j + 1 - b
    return num / den
