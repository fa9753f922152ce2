from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hgverify.exact import (
    LaurentPoly,
    UniPoly,
    cyclotomic,
    distinct_root_count,
    laurent_substitute,
    poly_gcd,
    poly_identity_check,
    rat_from_str,
    rat_to_str,
    totient,
)

VARS = ("alpha", "u1", "u2", "u3", "u4")

rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def _lp_strategy(vars_=VARS, max_terms=5):
    exps = st.tuples(*[st.integers(-3, 3) for _ in vars_])
    coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: LaurentPoly(vars_, d))


def _unit_images(vars_=VARS):
    exps = st.tuples(*[st.integers(-2, 2) for _ in vars_])
    return st.lists(st.tuples(exps, st.sampled_from([1, -1])), min_size=len(vars_), max_size=len(vars_)).map(
        lambda xs: [LaurentPoly.monomial(vars_, e, c) for e, c in xs])


# -- rationals ---------------------------------------------------------------


@given(rats, rats, rats)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(rats)
def test_rat_string_roundtrip(q):
    s = rat_to_str(q)
    assert rat_from_str(s) == q
    assert rat_to_str(rat_from_str(s)) == s
    assert ("/" in s) == (q.denominator != 1)


def test_rat_normalization():
    q = rat_from_str("-6/4")
    assert (q.numerator, q.denominator) == (-3, 2)
    assert rat_to_str(rat_from_str("10/5")) == "2"


# -- univariate and cyclotomic ----------------------------------------------


def test_cyclotomic_examples():
    assert cyclotomic(1) == UniPoly([-1, 1])
    assert cyclotomic(6) == UniPoly([1, -1, 1])
    assert cyclotomic(18) == UniPoly([1, 0, 0, -1, 0, 0, 1])


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_product_is_t_n_minus_1(n):
    prod = UniPoly([1])
    for d in range(1, n + 1):
        if n % d == 0:
            prod = prod * cyclotomic(d)
    assert prod == UniPoly([-1] + [0] * (n - 1) + [1])
    assert cyclotomic(n).degree == totient(n)


def test_unipoly_division_and_gcd():
    t = UniPoly.t()
    a = (t - 1) * (t + 2) ** 2
    b = (t - 1) * (t - 3)
    q, r = a.divmod(b)
    assert q * b + r == a
    assert poly_gcd(a, b) == t - 1
    assert distinct_root_count(a) == 2


def test_poly_identity_check_examples():
    t = UniPoly.t()
    assert poly_identity_check((t - 1) * (t + 1), t**2 - 1)
    phi = cyclotomic
    lhs = phi(1) ** 2 * phi(3) * phi(5) * (t**18 - 1) * (t - 1)
    rhs = phi(6) * phi(18) * (t**2 - 1) * (t**3 - 1) * (t**5 - 1) * (t**9 - 1)
    assert poly_identity_check(lhs, rhs)
    _, u1, u2 = LaurentPoly.gens(("alpha", "u1", "u2"))
    assert not poly_identity_check(u1, u2)
    with pytest.raises(ValueError):
        poly_identity_check(u1, LaurentPoly.gens(("u1",))[0])


# -- Laurent polynomials -----------------------------------------------------


def test_no_zero_terms_stored():
    f = LaurentPoly(("x",), {(1,): 1, (2,): 0})
    g = f - f
    assert f.terms == {(1,): 1}
    assert g.is_zero() and g.terms == {}


def test_substitute_examples():
    vars_ = ("alpha", "u1", "u2")
    a, u1, u2 = LaurentPoly.gens(vars_)
    assert laurent_substitute(u1 + u2, [a, u2, u1]) == u2 + u1
    v = ("alpha", "u1", "u2", "u3", "u4")
    _, x1, x2, x3, x4 = LaurentPoly.gens(v)
    img = x4 * (x1 * x2 * x3).unit_inverse()
    got = laurent_substitute(x1, [LaurentPoly.gens(v)[0], img, x2, x3, x4])
    assert got == LaurentPoly.monomial(v, (0, -1, -1, -1, 1))


def test_substitute_rejects_non_monomials():
    a, u1, u2 = LaurentPoly.gens(("alpha", "u1", "u2"))
    with pytest.raises(ValueError):
        laurent_substitute(u1, [a, u1 + u2, u2])
    with pytest.raises(ValueError):
        laurent_substitute(u1, [a, 2 * u1, u2])


@settings(max_examples=60, deadline=None)
@given(_lp_strategy(), _lp_strategy(), _unit_images())
def test_substitution_commutes_with_products(f, g, images):
    lhs = laurent_substitute(f * g, images)
    rhs = laurent_substitute(f, images) * laurent_substitute(g, images)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(_lp_strategy(), _lp_strategy(), _lp_strategy())
def test_laurent_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f


@given(_lp_strategy())
def test_json_roundtrip(f):
    assert LaurentPoly.from_json(f.to_json(), f.vars) == f


def test_evaluate_and_derivative():
    a, u1, u2 = LaurentPoly.gens(("alpha", "u1", "u2"))
    f = 4 * u1**3 * u2 + 4 * u2**3 + a - u1 * u2**2
    assert f.evaluate({"alpha": 1, "u1": Fraction(1, 2), "u2": 2}) == 1 + 32 + 1 - 2
    assert f.derivative("u1") == 12 * u1**2 * u2 - u2**2
