from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from hgverify import lattice as lat
from hgverify.gkz import ALT_MONOMIALS, REFERENCE_MONOMIALS

GAMMA = (-18, -1, 2, 3, 5, 9)

small_mats = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


def _is_diag_divisible(D):
    d = [D[i][i] for i in range(min(len(D), len(D[0])))]
    off = all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nz = [x for x in d if x]
    chain = all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    trailing = all(x == 0 for x in d[len(nz):])
    return off and chain and trailing and all(x > 0 for x in nz)


# -- normal forms ------------------------------------------------------------


def test_snf_examples():
    assert lat.smith_normal_form(lat.identity(3))[1] == lat.identity(3)
    assert lat.smith_normal_form([[2, 4, 6]])[1] == [[2, 0, 0]]
    assert lat.smith_normal_form([list(GAMMA)])[1] == [[1, 0, 0, 0, 0, 0]]


@settings(max_examples=80, deadline=None)
@given(small_mats)
def test_snf_property(M):
    U, D, V = lat.smith_normal_form(M)
    assert lat.matmul(lat.matmul(U, M), V) == D
    assert abs(lat.det(U)) == 1 and abs(lat.det(V)) == 1
    assert _is_diag_divisible(D)


@settings(max_examples=80, deadline=None)
@given(small_mats)
def test_kernel_property(M):
    K = lat.integer_kernel(M)
    ncols = len(M[0])
    k = len(K[0]) if K and K[0] else 0
    assert k == ncols - lat.rank_q(M)
    if k:
        assert all(x == 0 for row in lat.matmul(M, K) for x in row)
        assert all(f == 1 for f in lat.invariant_factors(K))


def test_kernel_examples():
    rows = [[1] * 6] + lat.transpose(REFERENCE_MONOMIALS)
    K = lat.integer_kernel(rows)
    assert [r[0] for r in K] == list(GAMMA)
    assert lat.integer_kernel(lat.identity(3)) == [[], [], []]
    assert lat.integer_kernel([[1, 1], [0, 0]]) == [[-1], [1]]


def test_hnf_is_row_echelon():
    H = lat.hermite_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    pivots = [next(j for j, x in enumerate(r) if x) for r in H]
    assert pivots == sorted(pivots) and all(H[i][p] > 0 for i, p in enumerate(pivots))


# -- polytopes ---------------------------------------------------------------


def test_triangle_hull_and_interior():
    P = lat.hull_and_facets([(0, 0), (3, 1), (0, 3), (1, 2)])
    assert sorted(P.vertices) == [(0, 0), (0, 3), (3, 1)]
    assert sorted(lat.lattice_points(P, interior_only=True)) == [(1, 1), (1, 2), (2, 1)]
    assert lat.normalized_volume(P) == 9


def test_cover_triangle_interior():
    P = lat.hull_and_facets([(0, 0), (6, 1), (0, 3)])
    assert len(lat.lattice_points(P, interior_only=True)) == 7


def test_square_and_segment():
    sq = lat.hull_and_facets([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(sq.vertices) == 4 and len(sq.facets) == 4
    seg = lat.hull_and_facets([(0,), (1,)])
    assert lat.lattice_points(seg, interior_only=True) == []


def test_empty_hull_rejected():
    with pytest.raises(ValueError):
        lat.hull_and_facets([])


def test_unit_simplices_have_volume_one():
    for d in range(1, 5):
        pts = [tuple(0 for _ in range(d))] + [tuple(int(i == j) for j in range(d)) for i in range(d)]
        assert lat.normalized_volume(lat.hull_and_facets(pts)) == 1


def test_delta_vectors():
    assert lat.delta_vector(lat.hull_and_facets([(0, 0), (1, 0), (0, 1)])) == [1, 0, 0]
    assert lat.delta_vector(lat.hull_and_facets([(0, 0), (4, 0), (0, 4)])) == [1, 12, 3]


def test_newton_4_polytope():
    P = lat.hull_and_facets(REFERENCE_MONOMIALS)
    assert P.dim == 4 and len(P.vertices) == 6
    assert lat.normalized_volume(P) == 19
    delta = lat.delta_vector(P)
    assert sum(delta) == 19
    assert lat.lattice_points(P, interior_only=True) == []


def test_hull_contains_inputs():
    pts = REFERENCE_MONOMIALS
    P = lat.hull_and_facets(pts)
    assert all(P.contains(p) for p in pts)
    for n, c in P.facets:
        tight = [v for v in P.vertices if sum(a * b for a, b in zip(n, v)) == c]
        assert len(tight) >= P.dim


def test_budget_enforced():
    P = lat.hull_and_facets([(0, 0), (50, 0), (0, 50)])
    with pytest.raises(lat.BudgetExceeded, match="budget"):
        lat.lattice_points(P, dilate=3, budget=100)


FIXTURES = [
    [(0, 0), (3, 1), (0, 3)],
    [(0, 0), (6, 1), (0, 3)],
    [(0, 0), (4, 0), (0, 4)],
    [(-2, -3), (1, 0), (3, 5)],
    [(0, 0, 0), (2, 0, 0), (0, 3, 0), (0, 0, 1), (1, 1, 1)],
]


@pytest.mark.parametrize("pts", FIXTURES)
def test_ehrhart_reciprocity(pts):
    P = lat.hull_and_facets(pts)
    d = P.dim
    closed = lat.ehrhart_counts(P, d)
    for m in (1, 2):
        interior = len(lat.lattice_points(P, m, interior_only=True))
        assert interior == (-1) ** d * lat.ehrhart_polynomial_value(closed, -m)


# -- affine equivalence ------------------------------------------------------


def test_affine_equivalent_identity():
    A = lat.PointConfig(4, REFERENCE_MONOMIALS, GAMMA)
    T, t, sigma = lat.affine_equivalent(A, A)
    assert T == lat.identity(4) and t == [0, 0, 0, 0] and sigma == list(range(6))


def test_affine_equivalent_alternate_model():
    A = lat.PointConfig(4, REFERENCE_MONOMIALS, GAMMA)
    B = lat.PointConfig(4, ALT_MONOMIALS, GAMMA)
    T, t, sigma = lat.affine_equivalent(A, B)
    assert abs(lat.det(T)) == 1
    for i, a in enumerate(A.points):
        img = [sum(T[r][k] * a[k] for k in range(4)) + t[r] for r in range(4)]
        assert img == list(B.points[sigma[i]])


def test_affine_equivalent_absorbs_translation():
    A = lat.PointConfig(4, REFERENCE_MONOMIALS, GAMMA)
    shifted = lat.PointConfig(4, [(p[0] + 1,) + p[1:] for p in REFERENCE_MONOMIALS], GAMMA)
    T, t, _ = lat.affine_equivalent(shifted, A)
    assert T == lat.identity(4) and t == [-1, 0, 0, 0]


def test_affine_equivalent_respects_labels():
    A = lat.PointConfig(4, REFERENCE_MONOMIALS, GAMMA)
    B = lat.PointConfig(4, REFERENCE_MONOMIALS, (-1, -18, 2, 3, 5, 9))
    assert lat.affine_equivalent(A, B) is None


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_unimodular_image_is_equivalent(entries, shift):
    # shear-type unimodular matrices
    T = [[1, entries[0]], [0, 1]] if entries[1] % 2 else [[1, 0], [entries[2], 1]]
    pts = [(0, 0), (3, 1), (0, 3), (1, 2)]
    A = lat.PointConfig(2, pts, ("a", "b", "c", "d"))
    img = [tuple(sum(T[r][k] * p[k] for k in range(2)) + shift[r] for r in range(2)) for p in pts]
    B = lat.PointConfig(2, img, ("a", "b", "c", "d"))
    res = lat.affine_equivalent(A, B)
    assert res is not None and res[0] == T
