"""Integer linear algebra and small lattice polytopes.

Matrices are plain lists of integer rows.  Polytopes are handled in
dimension <= 4 with a brute-force facet search, which is all the inputs here
(at most a handful of points) need.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Sequence

import numpy as np

IntMatrix = list[list[int]]

DEFAULT_BUDGET = 10**7


class BudgetExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# Dense helpers
# ---------------------------------------------------------------------------


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(B)
    if inner == 0:
        return [[] for _ in A]
    cols = len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*A)] if A else []


def det(A: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return d


def rank_q(A: Sequence[Sequence]) -> int:
    """Rank over Q."""
    M = [[Fraction(x) for x in row] for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                for k in range(c, cols):
                    M[i][k] -= f * M[r][k]
        r += 1
        if r == rows:
            break
    return r


def solve_q(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve a square nonsingular system ``A x = b`` over Q (None if singular)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                for k in range(c, n + 1):
                    M[r][k] -= f * M[c][k]
    return [M[i][n] / M[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U M V = D`` diagonal, ``d1 | d2 | ...``.

    U and V are unimodular; diagonal entries are nonnegative.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: the pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def hermite_normal_form(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style Hermite normal form (pivots positive, entries above reduced),
    zero rows dropped."""
    A = [[int(x) for x in row] for row in M]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        while True:
            rows = [i for i in range(r, m) if A[i][c]]
            if not rows:
                break
            p = min(rows, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            others = [i for i in range(r + 1, m) if A[i][c]]
            if not others:
                break
            for i in others:
                q = A[i][c] // A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        if r < m and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
            if r == m:
                break
    return [row for row in A if any(row)]


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Basis (as columns) of the saturated lattice ``{v : M v = 0}``.

    The basis is put in Hermite form (taken on the transposed basis) so the
    output is canonical; a rank-one kernel is returned with its last nonzero
    entry positive.
    """
    if ncols is None:
        ncols = len(M[0])
    if not M:
        return identity(ncols)
    _, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    basis_rows = [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]
    if not basis_rows:
        return [[] for _ in range(ncols)]
    basis_rows = hermite_normal_form(basis_rows)
    if len(basis_rows) == 1:
        v = basis_rows[0]
        last = next(x for x in reversed(v) if x)
        if last < 0:
            basis_rows = [[-x for x in v]]
    return transpose(basis_rows)


def extended_gcd_vector(v: Sequence[int]) -> tuple[int, list[int]]:
    """Return ``(g, k)`` with ``sum k_i v_i = g = gcd(v)``, g >= 0."""
    g, coeffs = 0, [0] * len(v)
    for i, x in enumerate(v):
        # Maintain g = sum coeffs * v over indices < i.
        a, b = g, int(x)
        # extended Euclid on (a, b)
        s0, s1, t0, t1 = 1, 0, 0, 1
        r0, r1 = a, b
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        coeffs = [c * s0 for c in coeffs]
        coeffs[i] = t0
        g = r0
    return g, coeffs


def complete_to_unimodular(v: Sequence[int]) -> IntMatrix:
    """A unimodular matrix whose first column is the primitive vector ``v``."""
    n = len(v)
    _, D, V = smith_normal_form([list(v)])
    if D[0][0] != 1:
        raise ValueError(f"{list(v)} is not primitive")
    # [v] V = e1^T, so V^{-1} has first row v^T... we need the inverse of V.
    Vinv = integer_inverse(V)
    # v^T = e1^T V^{-1}: first row of V^{-1} is v.  Transpose gives first column v.
    T = transpose(Vinv)
    assert [T[i][0] for i in range(n)] == list(v)
    return T


def integer_inverse(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    n = len(A)
    cols = []
    for j in range(n):
        x = solve_q(A, [int(i == j) for i in range(n)])
        if x is None or any(c.denominator != 1 for c in x):
            raise ValueError("matrix is not unimodular")
        cols.append([int(c) for c in x])
    return transpose(cols)


# ---------------------------------------------------------------------------
# Point configurations and polytopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointConfig:
    dim: int
    points: tuple[tuple[int, ...], ...]
    labels: tuple | None = None

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if any(len(p) != self.dim for p in pts):
            raise ValueError(f"all points must have length {self.dim}")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(pts):
                raise ValueError("labels must match points")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_columns(cls, M: Sequence[Sequence[int]], labels=None) -> "PointConfig":
        return cls(len(M), tuple(zip(*M)), labels)

    def columns(self) -> IntMatrix:
        return transpose(self.points)

    def lifted(self) -> "PointConfig":
        """The configuration of ``(1, a_i)``."""
        return PointConfig(self.dim + 1, tuple((1,) + p for p in self.points), self.labels)


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[tuple[int, ...], int], ...] = field(default=())

    @property
    def ambient(self) -> int:
        return len(self.vertices[0])

    def contains(self, x: Sequence[int], dilate: int = 1, strict: bool = False) -> bool:
        for n, c in self.facets:
            v = sum(a * b for a, b in zip(n, x))
            if v < dilate * c or (strict and v == dilate * c):
                return False
        return True

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "facets": [{"n": list(n), "c": c} for n, c in self.facets]}


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank_q([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(v)


def hull_and_facets(pts: PointConfig | Sequence[Sequence[int]]) -> Polytope:
    """Convex hull of a full-dimensional point set in dimension <= 4."""
    points = list(pts.points if isinstance(pts, PointConfig) else (tuple(p) for p in pts))
    if not points:
        raise ValueError("empty point set")
    points = sorted(set(tuple(int(x) for x in p) for p in points))
    d = len(points[0])
    if d > 4:
        raise ValueError("hull is limited to dimension <= 4")
    if affine_rank(points) != d:
        raise ValueError(f"points span an affine subspace of dimension {affine_rank(points)} < {d}")
    facets = set()
    for subset in itertools.combinations(points, d):
        p0 = subset[0]
        diffs = [[a - b for a, b in zip(p, p0)] for p in subset[1:]]
        if diffs and rank_q(diffs) != d - 1:
            continue
        K = integer_kernel(diffs, ncols=d) if diffs else identity(d)
        if len(K[0]) != 1:
            continue
        normal = _primitive([row[0] for row in K])
        vals = [sum(a * b for a, b in zip(normal, p)) for p in points]
        c = sum(a * b for a, b in zip(normal, p0))
        if all(v >= c for v in vals):
            facets.add((normal, c))
        if all(v <= c for v in vals):
            facets.add((tuple(-x for x in normal), -c))
    facets = sorted(facets)
    vertices = []
    for p in points:
        tight = [n for n, c in facets if sum(a * b for a, b in zip(n, p)) == c]
        if tight and rank_q(tight) == d:
            vertices.append(p)
    return Polytope(d, tuple(vertices), tuple(facets))


def lattice_points(P: Polytope, dilate: int = 1, interior_only: bool = False,
                   budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Integer points of ``dilate * P`` (strictly inside if ``interior_only``),
    sorted lexicographically."""
    if dilate < 0:
        raise ValueError("dilate must be nonnegative")
    d = P.ambient
    if dilate == 0:
        return [] if interior_only else [(0,) * d]
    lo = [dilate * min(v[i] for v in P.vertices) for i in range(d)]
    hi = [dilate * max(v[i] for v in P.vertices) for i in range(d)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    if size > budget:
        raise BudgetExceeded(f"enumeration of {size} candidates exceeds the budget of {budget}")
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    mask = np.ones(len(grid), dtype=bool)
    for n, c in P.facets:
        vals = grid @ np.array(n, dtype=np.int64)
        mask &= (vals > dilate * c) if interior_only else (vals >= dilate * c)
    return sorted(tuple(int(x) for x in row) for row in grid[mask])


def _triangulate(face: frozenset, dim: int, facet_sets: list[frozenset], seen: dict) -> list[tuple]:
    """Pulling triangulation of a face given by its vertex set."""
    key = (face, dim)
    if key in seen:
        return seen[key]
    verts = sorted(face)
    if dim == 0:
        out = [(verts[0],)]
    else:
        w = verts[0]
        subfaces = set()
        for F in facet_sets:
            S = face & F
            if w not in S and len(S) >= dim and affine_rank(sorted(S)) == dim - 1:
                subfaces.add(frozenset(S))
        out = []
        for S in sorted(subfaces, key=sorted):
            for simplex in _triangulate(S, dim - 1, facet_sets, seen):
                out.append((w,) + simplex)
    seen[key] = out
    return out


def triangulation(P: Polytope) -> list[tuple[tuple[int, ...], ...]]:
    vset = set(P.vertices)
    facet_sets = [frozenset(v for v in P.vertices if sum(a * b for a, b in zip(n, v)) == c) for n, c in P.facets]
    facet_sets = [F & vset for F in facet_sets]
    return _triangulate(frozenset(P.vertices), P.dim, facet_sets, {})


def normalized_volume(P: Polytope) -> int:
    """``dim! * volume`` via a pulling triangulation from a vertex."""
    if P.dim != P.ambient:
        raise ValueError("normalized volume needs a full-dimensional polytope")
    total = 0
    for simplex in triangulation(P):
        p0 = simplex[0]
        total += abs(det([[a - b for a, b in zip(p, p0)] for p in simplex[1:]]))
    assert total.denominator == 1
    return int(total)


def ehrhart_counts(P: Polytope, upto: int, interior_only: bool = False,
                   budget: int = DEFAULT_BUDGET) -> list[int]:
    return [len(lattice_points(P, m, interior_only, budget)) for m in range(upto + 1)]


def delta_vector(P: Polytope, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Ehrhart delta-vector from the counts of the dilates ``0..dim``."""
    d = P.dim
    L = ehrhart_counts(P, d, budget=budget)
    delta = []
    for i in range(d + 1):
        s = 0
        for j in range(i + 1):
            s += (-1) ** j * _binom(d + 1, j) * L[i - j]
        delta.append(s)
    return delta


def _binom(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k)) if 0 <= k <= n else 0


def ehrhart_polynomial_value(counts: Sequence[int], x: int) -> Fraction:
    """Evaluate the interpolating polynomial through ``(m, counts[m])``."""
    n = len(counts)
    total = Fraction(0)
    for i in range(n):
        term = Fraction(counts[i])
        for j in range(n):
            if j != i:
                term *= Fraction(x - j, i - j)
        total += term
    return total


def affine_equivalent(A: PointConfig, B: PointConfig):
    """Find ``(T, t, sigma)`` with T unimodular and ``T a_i + t = b_sigma(i)``.

    Only label-preserving permutations are searched.  Returns None when no
    such equivalence exists.
    """
    if len(A.points) != len(B.points) or A.dim != B.dim:
        return None
    if len(A.points) > 8:
        raise ValueError("affine_equivalent is limited to 8 points")
    la = A.labels if A.labels is not None else (None,) * len(A.points)
    lb = B.labels if B.labels is not None else (None,) * len(B.points)
    if sorted(map(repr, la)) != sorted(map(repr, lb)):
        return None
    d = A.dim
    a0 = A.points[0]
    diffs = [[x - y for x, y in zip(p, a0)] for p in A.points]
    # choose d independent difference vectors
    basis_idx = []
    for i, v in enumerate(diffs):
        if rank_q([diffs[j] for j in basis_idx] + [v]) > len(basis_idx):
            basis_idx.append(i)
    if len(basis_idx) != d:
        raise ValueError("configuration A is not full-dimensional")
    Ad = transpose([diffs[i] for i in basis_idx])  # d x d, columns are differences

    candidates = [[j for j in range(len(B.points)) if repr(lb[j]) == repr(la[i])] for i in range(len(A.points))]
    for sigma in itertools.product(*candidates):
        if len(set(sigma)) != len(sigma):
            continue
        b0 = B.points[sigma[0]]
        Bd = transpose([[x - y for x, y in zip(B.points[sigma[i]], b0)] for i in basis_idx])
        # T Ad = Bd  =>  Ad^T T^T = Bd^T, solve column by column
        AdT = transpose(Ad)
        rows = []
        ok = True
        for r in range(d):
            sol = solve_q(AdT, [Bd[r][k] for k in range(d)])
            if sol is None or any(x.denominator != 1 for x in sol):
                ok = False
                break
            rows.append([int(x) for x in sol])
        if not ok or abs(det(rows)) != 1:
            continue
        t = [b - sum(rows[i][k] * a0[k] for k in range(d)) for i, b in enumerate(b0)]
        if all(
            [sum(rows[i][k] * p[k] for k in range(d)) + t[i] for i in range(d)] == list(B.points[sigma[j]])
            for j, p in enumerate(A.points)
        ):
            return rows, t, list(sigma)
    return None
