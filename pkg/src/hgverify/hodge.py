"""Dimension bookkeeping around the Hodge-Deligne table and the rank-8 chain."""

from __future__ import annotations

from dataclasses import dataclass

from . import lattice as lat
from .checks import Check, check
from .gkz import realize_monomials
from .hypergeom import GammaList, build_irreducible_operator, build_reducible_operator

ORIENTATION = "h^{p,q} in position (p,q), (0,0) in the bottom-left corner"


@dataclass(frozen=True)
class HodgeTable:
    entries: tuple[tuple[tuple[int, int], int], ...]

    def __getitem__(self, pq: tuple[int, int]) -> int:
        return dict(self.entries).get(pq, 0)

    @property
    def total(self) -> int:
        return sum(v for _, v in self.entries)

    def weight_total(self, k: int) -> int:
        return sum(v for (p, q), v in self.entries if p + q == k)

    def weight_totals(self) -> list[int]:
        return [self.weight_total(k) for k in range(7)]

    def is_symmetric(self) -> bool:
        d = dict(self.entries)
        return all(d.get((q, p), 0) == v for (p, q), v in d.items())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for _, v in self.entries)

    def grid(self) -> list[list[int]]:
        """Rows from q = 3 (top) to q = 0 (bottom), columns p = 0..3."""
        return [[self[(p, q)] for p in range(4)] for q in range(3, -1, -1)]

    def to_json(self) -> dict:
        return {"entries": {f"{p},{q}": v for (p, q), v in self.entries}, "grid": self.grid(),
                "orientation": ORIENTATION, "total": self.total}


def reference_table() -> HodgeTable:
    return HodgeTable((((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 7), ((2, 1), 4), ((1, 2), 4)))


# Curve N of genus 3 (rank 6 of H^1); used by the two-variable analogue.
CURVE_TABLE = HodgeTable((((0, 0), 1), ((1, 0), 3), ((0, 1), 3), ((1, 1), 1)))


def newton_polytope(gamma: GammaList) -> lat.Polytope:
    return lat.hull_and_facets(realize_monomials(gamma).monomials)


def dimension_identities(gamma: GammaList, table: HodgeTable | None = None) -> dict:
    P = newton_polytope(gamma)
    n = P.dim
    vol = lat.normalized_volume(P)
    table = table or reference_table()
    ord_red = build_reducible_operator(gamma).order
    ord_irr = build_irreducible_operator(gamma).order
    checks = [
        check("vol = order(H~)", "operator-Htilde", vol == ord_red, ord_red, vol),
        check("vol - 1 = table total", "volume", vol - 1 == table.total,
              table.total, vol - 1),
        check("order(H) = weight-3 slice", "hodge-table",
              ord_irr == table.weight_total(3), table.weight_total(3), ord_irr),
    ]
    return {"n": n, "vol": vol, "triple": (vol + n, vol - 1, vol), "order_H": ord_irr, "order_Htilde": ord_red,
            "checks": checks}


def geometric_genus_check(gamma: GammaList) -> dict:
    """Interior points of the Newton polytope against the top Hodge number."""
    P = newton_polytope(gamma)
    interior = len(lat.lattice_points(P, 1, interior_only=True))
    if P.dim == 4:
        expected, key = reference_table()[(3, 0)], "h(3,0)"
    elif P.dim == 2:
        expected, key = CURVE_TABLE[(1, 0)], "h(1,0) of the genus-3 curve"
    else:
        raise ValueError(f"no reference table for dimension {P.dim}")
    return {"dim": P.dim, "interior": interior, "expected": expected, "entry": key, "ok": interior == expected}


def anti_invariant_rank(genus_cover: int, fixed_points: int) -> int:
    """Rank of the (-1)-part of H^1 from the Lefschetz trace ``2 - #fixed``."""
    trace = 2 - fixed_points
    return (2 * genus_cover - trace) // 2


def theorem_chain_report(genus: int, genus_cover: int, fixed_points: int,
                         gamma: GammaList | None = None) -> dict:
    gamma = gamma or GammaList((-18, -1, 2, 3, 5, 9))
    ranks = {
        "hypergeom: order(H)": build_irreducible_operator(gamma).order,
        "hodge: weight-3 slice": reference_table().weight_total(3),
        "conic: 2g~ - 2g": 2 * genus_cover - 2 * genus,
        "conic: anti-invariant rank (Lefschetz)": anti_invariant_rank(genus_cover, fixed_points),
    }
    vals = set(ranks.values())
    checks: list[Check] = [
        check("rank chain", "prym-rank", len(vals) == 1, 8, ranks),
        check("Riemann-Hurwitz", "fixed-points",
              2 * genus_cover - 2 == 2 * (2 * genus - 2) + fixed_points,
              2 * (2 * genus - 2) + fixed_points, 2 * genus_cover - 2),
    ]
    curve_gamma = GammaList((-9, 1, 3, 5))
    curve_order = build_irreducible_operator(curve_gamma).order
    checks.append(check("curve-side order = 2 g(N)", "curve-rank",
                        curve_order == 2 * genus, 2 * genus, curve_order))
    return {"ranks": ranks, "twist_offsets": {"gr3 H^3_c(Z)": 0, "gr1 H^1_c(Delta, W)": -1},
            "cokernel": "Z/2 (trace map over the integers; metadata, not a rank)", "checks": checks}
