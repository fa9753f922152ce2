from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hgverify import gkz, hypergeom as hg, lattice as lat
from hgverify.exact import LaurentPoly
from hgverify.ore import apply_to_series

G_BINOM = hg.GammaList((-2, 1, 1))


def test_reference_model_polynomial():
    f = gkz.reference_model().f
    a, u1, u2, u3, u4 = LaurentPoly.gens(f.vars)
    want = u1 * u2 * u3 + u4 + u1**3 * u2 + u2**3 + u1 * u3**2 - a.unit_inverse() * u4**2
    assert f == want


def test_alternate_model_becomes_reference():
    assert gkz.alt_to_reference(gkz.alt_model().f) == gkz.reference_model().f


@pytest.mark.parametrize("gamma", [hg.GAMMA_STAR, hg.GammaList((-9, 1, 3, 5)), G_BINOM,
                                   hg.GammaList((-6, -1, 2, 2, 3))], ids=str)
def test_realize_monomials_invariants(gamma):
    m = gkz.realize_monomials(gamma)
    pts = m.monomials.points
    for c in range(m.monomials.dim):
        assert sum(g * p[c] for g, p in zip(gamma.entries, pts)) == 0
    assert sum(k * g for k, g in zip(m.kexp, gamma.entries)) == 1
    assert gkz.affine_span_primitive(pts)
    K = lat.integer_kernel([[1] * len(pts)] + lat.transpose(pts))
    assert [r[0] for r in K] in (list(gamma.entries), [-x for x in gamma.entries])


def test_realized_gamma_star_matches_reference_matrix():
    m = gkz.realize_monomials(hg.GAMMA_STAR)
    assert lat.affine_equivalent(m.monomials, gkz.reference_model().monomials) is not None


def test_realized_binomial_is_three_points_on_a_line():
    m = gkz.realize_monomials(G_BINOM)
    assert m.monomials.dim == 1
    target = lat.PointConfig(1, [(1,), (0,), (2,)], G_BINOM.entries)
    assert lat.affine_equivalent(m.monomials, target) is not None


def test_realize_rejects_non_primitive():
    with pytest.raises(ValueError, match="primitive"):
        gkz.realize_monomials(hg.GammaList((-4, 2, 2)))


def test_gkz_gamma_star():
    sys_ = gkz.build_gkz(gkz.reference_model().monomials)
    mprime = [[1, 1, 1, 1, 1, 1], [1, 0, 0, 3, 0, 1], [1, 0, 0, 1, 3, 0], [1, 0, 0, 0, 0, 2], [0, 2, 1, 0, 0, 0]]
    assert gkz.row_equivalent(sys_.euler_ops, mprime)
    assert sys_.box_strings() == ["d3^2d4^3d5^5d6^9 - d1^18d2"]
    assert gkz.euler_annihilates_box(sys_)
    assert sys_.generates_lattice


def test_gkz_small_examples():
    line = gkz.build_gkz(lat.PointConfig(1, [(0,), (1,), (2,)]))
    assert line.box_strings() == ["d1d3 - d2^2"]
    simplex = gkz.build_gkz(lat.PointConfig(2, [(0, 0), (1, 0), (0, 1)]))
    assert simplex.box_ops == ()
    with pytest.raises(ValueError):
        gkz.build_gkz(lat.PointConfig(2, [(0, 0), (1, 1), (2, 2)]))
    with pytest.raises(ValueError, match="beta"):
        gkz.build_gkz(lat.PointConfig(1, [(0,), (1,), (2,)]), beta=(1, 0))


def test_restriction_gamma_star():
    m = gkz.reference_model()
    r = gkz.restrict_to_line(gkz.build_gkz(m.monomials), hg.GAMMA_STAR, m.kexp)
    assert r.intertwines
    assert r.euler_vanish == (0, 0, 0, 0, 0)
    assert r.alpha_sign == 1
    assert r.unit == Fraction(18**18) == 39346408075296537575424
    assert r.normalized == hg.build_reducible_operator(hg.GAMMA_STAR).scale(r.unit)


def test_restriction_binomial_solves_series():
    m = gkz.realize_monomials(G_BINOM)
    r = gkz.restrict_to_line(gkz.build_gkz(m.monomials), G_BINOM, m.kexp)
    assert r.normalized.order == 2 and r.alpha_sign == -1 and r.unit == 4
    s = hg.series(G_BINOM, 31)
    assert all(c == 0 for c in apply_to_series(gkz.negate_alpha(r.normalized), s, 30))


def test_restriction_requires_rank_one():
    sys_ = gkz.build_gkz(lat.PointConfig(1, [(0,), (1,), (2,), (3,)]))
    with pytest.raises(ValueError, match="rank"):
        gkz.restrict_to_line(sys_, hg.GammaList((-2, 1, 1)))


# -- point counts ------------------------------------------------------------


def test_count_examples():
    (u1,) = LaurentPoly.gens(("u1",))
    assert gkz.count_torus_points(u1 - 1, 5, 1) == 1
    x, y = LaurentPoly.gens(("u1", "u2"))
    assert gkz.count_torus_points(x + y, 3, 1) == 2


def test_count_errors():
    (u1,) = LaurentPoly.gens(("u1",))
    with pytest.raises(ValueError):
        gkz.count_torus_points(u1 / 7 - 1, 7, 1)
    with pytest.raises(ValueError):
        gkz.count_torus_points(gkz.reference_model().f, 7, 0)
    with pytest.raises(lat.BudgetExceeded):
        gkz.count_torus_points(gkz.reference_model().f, 31, 1, budget=1000)


def test_models_agree_at_11():
    ok, rows = gkz.model_counts_agree(11)
    assert ok and [r[0] for r in rows] == list(range(1, 11))


def _apply_monomial_map(f: LaurentPoly, M, shift) -> LaurentPoly:
    terms = {}
    for e, c in f.terms.items():
        u = e[1:]
        img = tuple(sum(M[r][k] * u[k] for k in range(4)) + shift[r] for r in range(4))
        terms[(e[0],) + img] = c
    return LaurentPoly(f.vars, terms)


def _unimodular(ops):
    M = lat.identity(4)
    for i, j, c in ops:
        if i != j:
            M = [row[:] for row in M]
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


@settings(max_examples=8, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2)), min_size=1, max_size=6),
       st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_counts_invariant_under_unimodular_maps(ops, shift):
    M = _unimodular(ops)
    assert abs(lat.det(M)) == 1
    f = gkz.reference_model().f
    g = _apply_monomial_map(f, M, shift)
    alphas = list(range(1, 7))
    assert gkz.count_torus_points_many(f, 7, alphas) == gkz.count_torus_points_many(g, 7, alphas)
