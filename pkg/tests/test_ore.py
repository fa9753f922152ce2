from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hgverify import hypergeom as hg
from hgverify.exact import LaurentPoly, UniPoly
from hgverify.ore import OreOp, alpha_poly, apply_to_series, ore_multiply, to_derivative_form

FIXTURES = [hg.GAMMA_STAR, hg.GammaList((-9, 1, 3, 5)), hg.GammaList((-2, 1, 1))]


def _ops(min_pow=-2, max_pow=2):
    coeff = st.dictionaries(st.integers(min_pow, max_pow), st.fractions(min_value=-5, max_value=5, max_denominator=4),
                            max_size=3).map(alpha_poly)
    return st.dictionaries(st.integers(0, 2), coeff, max_size=3).map(OreOp)


def test_commutation_rule():
    D, a = OreOp.D(), OreOp.alpha()
    assert ore_multiply(D, a) == ore_multiply(a, D) + a
    # D alpha^k = alpha^k (D + k)
    a3 = OreOp.alpha(3)
    assert ore_multiply(D, a3) == ore_multiply(a3, D + OreOp.const(3))


def test_identity():
    H = hg.build_irreducible_operator(hg.GAMMA_STAR)
    assert ore_multiply(H, OreOp.const(1)) == H
    assert ore_multiply(OreOp.const(1), H) == H


@settings(max_examples=50, deadline=None)
@given(_ops(), _ops(), _ops())
def test_associativity(A, B, C):
    assert ore_multiply(ore_multiply(A, B), C) == ore_multiply(A, ore_multiply(B, C))


@settings(max_examples=50, deadline=None)
@given(_ops(0, 2), _ops(0, 2), st.lists(st.fractions(max_denominator=7), min_size=12, max_size=12))
def test_composition_on_series(A, B, s):
    K = 12
    lhs = apply_to_series(ore_multiply(A, B), s, K)
    rhs = apply_to_series(A, apply_to_series(B, s, K), K)
    assert lhs == rhs


def test_apply_to_series_examples():
    assert apply_to_series(OreOp.D(), [1, 1], 2) == [0, 1]
    with pytest.raises(ValueError):
        apply_to_series(OreOp.alpha(-1), [1, 1], 2)


@pytest.mark.parametrize("gamma", FIXTURES, ids=str)
def test_factorization_certificate(gamma):
    G = hg.build_cancelled_factor(gamma)
    H = hg.build_irreducible_operator(gamma)
    assert ore_multiply(G, H) == hg.build_reducible_operator(gamma)


@pytest.mark.parametrize("which", ["irreducible", "reducible"])
def test_gamma_star_operators_annihilate_series(which):
    build = hg.build_irreducible_operator if which == "irreducible" else hg.build_reducible_operator
    out = apply_to_series(build(hg.GAMMA_STAR), hg.series(hg.GAMMA_STAR, 61), 60)
    assert all(c == 0 for c in out)


def test_derivative_form_examples():
    x = alpha_poly({1: 1})
    assert to_derivative_form(OreOp.D()).coeffs == (alpha_poly({}), x)
    D2 = ore_multiply(OreOp.D(), OreOp.D())
    assert to_derivative_form(D2).coeffs == (alpha_poly({}), x, x * x)


def test_derivative_form_of_H_is_singular_at_0_and_alpha0():
    df = to_derivative_form(hg.build_irreducible_operator(hg.GAMMA_STAR))
    assert df.order == 8
    a0 = hg.singular_value(hg.GAMMA_STAR)
    lead = df.leading
    assert lead == alpha_poly({9: -1, 8: a0})
    assert lead.evaluate({"alpha": a0}) == 0
    roots = {Fraction(0), a0}
    for r in (Fraction(1), Fraction(-1), a0 / 2):
        assert r not in roots and lead.evaluate({"alpha": r}) != 0


def test_json_roundtrip():
    H = hg.build_reducible_operator(hg.GAMMA_STAR)
    assert OreOp.from_json(H.to_json()) == H


def test_proportional_to():
    H = hg.build_irreducible_operator(hg.GAMMA_STAR)
    assert H.scale(Fraction(-3, 7)).proportional_to(H) == Fraction(-3, 7)
    assert (H + OreOp.D()).proportional_to(H) is None


def test_theta_poly_roundtrip():
    p = UniPoly([Fraction(1, 2), 0, 3])
    op = OreOp.from_theta_poly(p, alpha_power=2, scale=5)
    assert op.theta_polys() == {2: p * 5}
    assert op.coeff(2) == LaurentPoly.monomial(("alpha",), (2,), 15)
