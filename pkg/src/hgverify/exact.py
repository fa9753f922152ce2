"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  This module adds dense univariate
polynomials (:class:`UniPoly`), cyclotomic polynomials, and sparse
multivariate Laurent polynomials (:class:`LaurentPoly`) whose variables may
include the family parameter ``alpha``.  All values are immutable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or 'p/q' string")
    return Fraction(x)


def rat_to_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over Q, ``coeffs[k]`` multiplies ``t**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def t(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "UniPoly":
        other = _as_uni(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-_as_uni(other))

    def __rsub__(self, other) -> "UniPoly":
        return _as_uni(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = _as_uni(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = UniPoly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quo), UniPoly(rem)

    def __floordiv__(self, other) -> "UniPoly":
        return self.divmod(_as_uni(other))[0]

    def __mod__(self, other) -> "UniPoly":
        return self.divmod(_as_uni(other))[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly(c / self.lead for c in self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"UniPoly({[rat_to_str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = rat_to_str(abs(c)) + ("*" + mono if mono else "")
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _as_uni(x) -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    return UniPoly([x])


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.is_zero() or p.degree == 0:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


def distinct_root_count(p: UniPoly) -> int:
    """Number of distinct complex roots of a nonzero polynomial."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    return squarefree_part(p).degree


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> UniPoly:
    num = UniPoly([-1] + [0] * (n - 1) + [1])
    for d in _divisors(n)[:-1]:
        q, r = num.divmod(_cyclotomic(d))
        assert r.is_zero()
        num = q
    return num


def cyclotomic(n: int) -> UniPoly:
    """The ``n``-th cyclotomic polynomial (monic, integer coefficients)."""
    if n < 1:
        raise ValueError(f"cyclotomic index must be positive, got {n}")
    return _cyclotomic(n)


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# Sparse Laurent polynomials
# ---------------------------------------------------------------------------

Exp = tuple[int, ...]


class LaurentPoly:
    """Sparse Laurent polynomial over Q in named variables.

    ``terms`` maps exponent tuples to nonzero Fractions.  Terms are kept
    sorted lexicographically by exponent; zero coefficients are never stored.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exp, object] | Iterable = ()):
        self.vars: tuple[str, ...] = tuple(vars)
        n = len(self.vars)
        acc: dict[Exp, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {n}")
            acc[e] = acc.get(e, Fraction(0)) + rat(c)
        self.terms: dict[Exp, Fraction] = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> "LaurentPoly":
        return cls(vars)

    @classmethod
    def const(cls, c, vars: Sequence[str]) -> "LaurentPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, vars: Sequence[str], exp: Sequence[int], c=1) -> "LaurentPoly":
        return cls(vars, {tuple(exp): c})

    @classmethod
    def gens(cls, vars: Sequence[str]) -> tuple["LaurentPoly", ...]:
        n = len(vars)
        return tuple(cls(vars, {tuple(int(i == j) for j in range(n)): 1}) for i in range(n))

    # -- basic queries ----------------------------------------------------
    @property
    def arity(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def degree_in(self, var: str) -> tuple[int, int]:
        """(min, max) exponent of ``var`` over the terms."""
        i = self.vars.index(var)
        es = [e[i] for e in self.terms]
        if not es:
            raise ValueError("degree of the zero polynomial is undefined")
        return min(es), max(es)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, self.vars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, tuple(self.terms.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return LaurentPoly.const(other, self.vars)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        return LaurentPoly(self.vars, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        acc: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(self.vars, acc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LaurentPoly":
        """Division by a rational or by a single term (a unit of the ring)."""
        other = self._coerce(other)
        return self * other.unit_inverse()

    def __rtruediv__(self, other) -> "LaurentPoly":
        return self._coerce(other) * self.unit_inverse()

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit of the Laurent ring")
        (e, c), = self.terms.items()
        return LaurentPoly(self.vars, {tuple(-x for x in e): 1 / c})

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            return self.unit_inverse() ** (-n)
        out = LaurentPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure --------------------------------------------------------
    def monomial_content(self) -> Exp:
        """Componentwise minimum exponent over the terms."""
        if not self.terms:
            raise ValueError("content of the zero polynomial is undefined")
        return tuple(min(col) for col in zip(*self.terms))

    def clear_monomial_content(self) -> "LaurentPoly":
        m = self.monomial_content()
        return LaurentPoly(self.vars, {tuple(a - b for a, b in zip(e, m)): c for e, c in self.terms.items()})

    def is_polynomial(self) -> bool:
        return all(x >= 0 for e in self.terms for x in e)

    def derivative(self, var: str) -> "LaurentPoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return LaurentPoly(self.vars, out)

    def newton_points(self, vars: Sequence[str] | None = None) -> list[Exp]:
        """Exponent vectors restricted to ``vars`` (default: all), deduplicated."""
        idx = range(self.arity) if vars is None else [self.vars.index(v) for v in vars]
        return sorted({tuple(e[i] for i in idx) for e in self.terms})

    # -- change of variables ---------------------------------------------
    def rename(self, new_vars: Sequence[str]) -> "LaurentPoly":
        if len(new_vars) != self.arity:
            raise ValueError("rename must keep the arity")
        return LaurentPoly(new_vars, self.terms)

    def reorder(self, new_vars: Sequence[str]) -> "LaurentPoly":
        """Embed into a variable list that contains all variables in use."""
        pos = []
        for j, v in enumerate(self.vars):
            if v in new_vars:
                pos.append(new_vars.index(v))
            else:
                if any(e[j] for e in self.terms):
                    raise ValueError(f"variable {v} is used but missing from {new_vars}")
                pos.append(None)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(new_vars)
            for j, p in enumerate(pos):
                if p is not None:
                    e2[p] += e[j]
            out[tuple(e2)] = c
        return LaurentPoly(new_vars, out)

    def substitute(self, images: Mapping[str, "LaurentPoly"] | Sequence["LaurentPoly"]) -> "LaurentPoly":
        """Substitute polynomials for variables.

        Variables without an image are kept if the target ring has them.
        Negative powers require the image to be a unit.
        """
        if not isinstance(images, Mapping):
            images = dict(zip(self.vars, images))
        if not images:
            return self
        target_vars = next(iter(images.values())).vars
        gens = dict(zip(target_vars, LaurentPoly.gens(target_vars)))
        full = {}
        for v in self.vars:
            if v in images:
                full[v] = images[v]
            elif v in gens:
                full[v] = gens[v]
            else:
                raise ValueError(f"no image for variable {v} and it is absent from {target_vars}")
        out = LaurentPoly.zero(target_vars)
        cache: dict[tuple[str, int], LaurentPoly] = {}
        for e, c in self.terms.items():
            term = LaurentPoly.const(c, target_vars)
            for v, k in zip(self.vars, e):
                if k:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = full[v] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate the given variables; returns a LaurentPoly in the rest, or
        a number if every variable is assigned."""
        rest = [v for v in self.vars if v not in values]
        idx_rest = [self.vars.index(v) for v in rest]
        acc: dict[Exp, object] = {}
        for e, c in self.terms.items():
            val = c
            for v, k in zip(self.vars, e):
                if v in values and k:
                    val = val * (values[v] ** k) if k > 0 else val / (values[v] ** (-k))
            key = tuple(e[i] for i in idx_rest)
            acc[key] = acc.get(key, 0) + val
        if not rest:
            return acc.get((), 0)
        return LaurentPoly(rest, acc)

    def to_unipoly(self, var: str | None = None) -> UniPoly:
        if var is None:
            if self.arity != 1:
                raise ValueError("specify the variable of a multivariate polynomial")
            var = self.vars[0]
        i = self.vars.index(var)
        if any(x for e in self.terms for j, x in enumerate(e) if j != i):
            raise ValueError(f"polynomial depends on variables other than {var}")
        if any(e[i] < 0 for e in self.terms):
            raise ValueError("negative exponent; clear the monomial content first")
        if not self.terms:
            return UniPoly()
        deg = max(e[i] for e in self.terms)
        cs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i]] = c
        return UniPoly(cs)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list[dict]:
        return [{"c": rat_to_str(c), "e": list(e)} for e, c in self.terms.items()]

    @classmethod
    def from_json(cls, data, vars: Sequence[str]) -> "LaurentPoly":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(vars, {tuple(t["e"]): rat_from_str(t["c"]) for t in data})

    def __repr__(self) -> str:
        return f"LaurentPoly({self.vars}, {str(self)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        # Descending lex order reads more naturally.
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            if mono and abs(c) == 1:
                body = mono
            else:
                body = rat_to_str(abs(c)) + ("*" + mono if mono else "")
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def laurent_substitute(f: LaurentPoly, images: Sequence[LaurentPoly]) -> LaurentPoly:
    """Replace each variable of ``f`` by a monomial unit.

    Every image must be a single term whose coefficient is +-1 times a power of
    ``alpha`` (i.e. invertible on the torus).  Works with any exponent signs.
    """
    if len(images) != f.arity:
        raise ValueError(f"expected {f.arity} images, got {len(images)}")
    target = images[0].vars
    for img in images:
        if img.vars != target:
            raise ValueError("images must share one variable list")
        if not img.is_monomial():
            raise ValueError(f"image {img} is not a monomial; general substitution is unsupported")
        (_, c), = img.terms.items()
        if abs(c) != 1:
            raise ValueError(f"image {img} does not have coefficient +-1")
    acc: dict[Exp, Fraction] = {}
    imgs = [next(iter(img.terms.items())) for img in images]
    n = len(target)
    for e, c in f.terms.items():
        exp = [0] * n
        coef = c
        for k, (ie, ic) in zip(e, imgs):
            if k:
                for j in range(n):
                    exp[j] += k * ie[j]
                coef *= ic ** k
        key = tuple(exp)
        acc[key] = acc.get(key, Fraction(0)) + coef
    return LaurentPoly(target, acc)


def poly_identity_check(lhs, rhs) -> bool:
    """Exact term-by-term equality of two polynomials of the same kind."""
    if isinstance(lhs, UniPoly) and isinstance(rhs, UniPoly):
        return lhs.coeffs == rhs.coeffs
    if isinstance(lhs, LaurentPoly) and isinstance(rhs, LaurentPoly):
        if lhs.arity != rhs.arity:
            raise ValueError(f"arity mismatch: {lhs.arity} vs {rhs.arity}")
        if lhs.vars != rhs.vars:
            raise ValueError(f"variable mismatch: {lhs.vars} vs {rhs.vars}")
        return lhs.terms == rhs.terms
    raise TypeError("both sides must be UniPoly or both LaurentPoly")
