"""Operators in D = alpha d/dalpha with Laurent-in-alpha coefficients.

Composition is left-acting: in ``A * B`` the operator B is applied first.
The only rewriting rule needed is ``D alpha^k = alpha^k (D + k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

from .exact import LaurentPoly, UniPoly

VAR = "alpha"
_VARS = (VAR,)


def alpha_poly(coeffs: Mapping[int, object] | Sequence) -> LaurentPoly:
    """Laurent polynomial in alpha from ``{power: coeff}`` or a dense list."""
    items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
    return LaurentPoly(_VARS, {(int(k),): c for k, c in items})


class OreOp:
    """Sum of ``c_k(alpha) D^k``; immutable, canonical by construction."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, LaurentPoly] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            if k < 0:
                raise ValueError("D-powers must be nonnegative")
            if not isinstance(c, LaurentPoly):
                c = LaurentPoly.const(c, _VARS)
            if c.vars != _VARS:
                raise ValueError(f"coefficients must be Laurent polynomials in {VAR}")
            if not c.is_zero():
                clean[int(k)] = c
        self._terms = dict(sorted(clean.items(), reverse=True))

    @classmethod
    def D(cls) -> "OreOp":
        return cls({1: LaurentPoly.const(1, _VARS)})

    @classmethod
    def const(cls, c) -> "OreOp":
        return cls({0: LaurentPoly.const(c, _VARS)})

    @classmethod
    def alpha(cls, k: int = 1, c=1) -> "OreOp":
        return cls({0: LaurentPoly.monomial(_VARS, (k,), c)})

    @classmethod
    def from_theta_poly(cls, p: UniPoly, alpha_power: int = 0, scale=1) -> "OreOp":
        """``scale * alpha^alpha_power * p(D)``."""
        return cls({k: LaurentPoly.monomial(_VARS, (alpha_power,), Fraction(scale) * c)
                    for k, c in enumerate(p.coeffs) if c})

    @property
    def terms(self) -> dict[int, LaurentPoly]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def order(self) -> int:
        if not self._terms:
            raise ValueError("zero operator has no order")
        return next(iter(self._terms))

    def coeff(self, k: int) -> LaurentPoly:
        return self._terms.get(k, LaurentPoly.zero(_VARS))

    def alpha_range(self) -> tuple[int, int]:
        exps = [e[0] for c in self._terms.values() for e in c.terms]
        return min(exps), max(exps)

    def theta_polys(self) -> dict[int, UniPoly]:
        """Regroup as ``sum_m alpha^m P_m(D)``."""
        out: dict[int, dict[int, Fraction]] = {}
        for k, c in self._terms.items():
            for (m,), v in c.terms.items():
                out.setdefault(m, {})[k] = v
        return {m: UniPoly([d.get(i, 0) for i in range(max(d) + 1)]) for m, d in sorted(out.items())}

    def __eq__(self, other) -> bool:
        return isinstance(other, OreOp) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "OreOp") -> "OreOp":
        other = _as_op(other)
        keys = set(self._terms) | set(other._terms)
        zero = LaurentPoly.zero(_VARS)
        return OreOp({k: self._terms.get(k, zero) + other._terms.get(k, zero) for k in keys})

    __radd__ = __add__

    def __neg__(self) -> "OreOp":
        return OreOp({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "OreOp":
        return self + (-_as_op(other))

    def __rsub__(self, other) -> "OreOp":
        return _as_op(other) - self

    def __mul__(self, other) -> "OreOp":
        return ore_multiply(self, _as_op(other))

    def __rmul__(self, other) -> "OreOp":
        return ore_multiply(_as_op(other), self)

    def __pow__(self, n: int) -> "OreOp":
        out = OreOp.const(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "OreOp":
        c = Fraction(c)
        return OreOp({k: v * c for k, v in self._terms.items()})

    def proportional_to(self, other: "OreOp") -> Fraction | None:
        """The rational ``c`` with ``self == c * other``, if any."""
        if self.is_zero() or other.is_zero() or set(self._terms) != set(other._terms):
            return None
        k = self.order
        (e, a), = list(self._terms[k].terms.items())[:1]
        b = other._terms[k].coeff(e)
        if not b:
            return None
        c = a / b
        return c if self == other.scale(c) else None

    def to_json(self) -> list[dict]:
        return [{"D": k, "coeff": c.to_json()} for k, c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> "OreOp":
        return cls({int(t["D"]): LaurentPoly.from_json(t["coeff"], _VARS) for t in data})

    def __repr__(self) -> str:
        return f"OreOp({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms.items():
            d = "" if k == 0 else ("D" if k == 1 else f"D^{k}")
            parts.append(f"({c})" + ("*" + d if d else ""))
        return " + ".join(parts)


def _as_op(x) -> OreOp:
    return x if isinstance(x, OreOp) else OreOp.const(x)


def ore_multiply(A: OreOp, B: OreOp) -> OreOp:
    """``A o B`` using ``D^i alpha^m = alpha^m (D + m)^i``."""
    acc: dict[tuple[int, int], Fraction] = {}  # (D-power, alpha-power) -> coeff
    for i, ca in A._terms.items():
        for (ma,), va in ca.terms.items():
            for j, cb in B._terms.items():
                for (mb,), vb in cb.terms.items():
                    # alpha^ma D^i alpha^mb D^j = alpha^(ma+mb) (D+mb)^i D^j
                    for r in range(i + 1):
                        w = va * vb * comb(i, r) * Fraction(mb) ** (i - r)
                        if w:
                            key = (r + j, ma + mb)
                            acc[key] = acc.get(key, 0) + w
    out: dict[int, dict] = {}
    for (k, m), v in acc.items():
        if v:
            out.setdefault(k, {})[(m,)] = v
    return OreOp({k: LaurentPoly(_VARS, d) for k, d in out.items()})


def apply_to_series(A: OreOp, coeffs: Sequence, K: int) -> list[Fraction]:
    """Coefficients of alpha^0..alpha^(K-1) in ``A(sum coeffs[j] alpha^j)``.

    Needs ``coeffs[j]`` for every ``j < K - min alpha-power``.
    """
    if A.is_zero():
        return [Fraction(0)] * K
    lo, _ = A.alpha_range()
    need = K - min(lo, 0)
    if need > len(coeffs):
        raise ValueError(f"truncation K={K} needs {need} series coefficients, got {len(coeffs)}")
    polys = A.theta_polys()
    out = []
    for n in range(K):
        s = Fraction(0)
        for m, P in polys.items():
            j = n - m
            if j >= 0:
                y = coeffs[j]
                if y:
                    s += P(Fraction(j)) * y
        out.append(s)
    return out


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@dataclass(frozen=True)
class DerivativeForm:
    """``A = sum_j p_j(alpha) (d/dalpha)^j``; companion data
    ``y^(n) = -sum_{j<n} (p_j / p_n) y^(j)``."""

    coeffs: tuple[LaurentPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> LaurentPoly:
        return self.coeffs[-1]

    def companion(self) -> list[tuple[LaurentPoly, LaurentPoly]]:
        """``(numerator, denominator)`` of ``-p_j / p_n`` for ``j < n``."""
        return [(-p, self.leading) for p in self.coeffs[:-1]]

    def to_json(self) -> list[dict]:
        return [{"d": j, "coeff": p.to_json()} for j, p in enumerate(self.coeffs)]


def to_derivative_form(A: OreOp) -> DerivativeForm:
    """Expand ``D^k = sum_j S(k, j) alpha^j (d/dalpha)^j``."""
    n = A.order
    ps = []
    for j in range(n + 1):
        p = LaurentPoly.zero(_VARS)
        for k in range(j, n + 1):
            s = stirling2(k, j)
            if s:
                p = p + A.coeff(k) * s
        ps.append(p * LaurentPoly.monomial(_VARS, (j,)))
    return DerivativeForm(tuple(ps))
