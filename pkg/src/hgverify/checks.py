"""Pass/fail records shared by the reports."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Check:
    name: str
    paper_anchor: str
    status: str  # pass | fail | skipped
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return asdict(self)


def check(name: str, anchor: str, ok: bool, expected=None, observed=None, detail: str = "") -> Check:
    """Build a check; failures always carry both values."""
    parts = [detail] if detail else []
    if expected is not None or observed is not None:
        if ok:
            parts.append(f"value {observed}")
        else:
            parts.append(f"expected {expected}, observed {observed}")
    if anchor not in ANCHORS:
        raise ValueError(f"unknown anchor {anchor!r}")
    return Check(name, anchor, "pass" if ok else "fail", "; ".join(parts))


# Anchor registry: every check names one of these keys.
ANCHORS: dict[str, str] = {
    "series": "hypergeometric series coefficients A_j",
    "operator-H": "irreducible operator H and its local exponents",
    "operator-Htilde": "reducible operator H~ = G.H",
    "singular-value": "singular fiber at alpha_0",
    "cyclotomic-ratio": "cyclotomic ratio q_inf/q_0",
    "product-relation": "loop relation gamma_inf gamma_alpha0 gamma_0 = 1",
    "exponent-sums": "monodromy determinants from local exponent sums",
    "torus-matrix": "monomial matrix of the torus model",
    "gkz-system": "Euler and box operators of the GKZ system",
    "restriction": "restriction of the box operator to the alpha-line",
    "coordinate-change": "monomial change of coordinates between the two torus models",
    "conic-diagonal": "diagonal form of the conic bundle",
    "discriminant": "discriminant curve Delta",
    "double-cover": "double cover Delta~ -> Delta",
    "closures": "projective closures N and N~",
    "newton-polygons": "Newton polygons of Delta and Delta~",
    "fixed-points": "fixed points of the covering involution",
    "prym-rank": "rank 8 of the anti-invariant part",
    "minors": "rank stratification by 2x2 minors",
    "smooth-delta": "smoothness of Delta",
    "critical-fiber": "critical point of the fiber at alpha_0",
    "hodge-table": "Hodge-Deligne table",
    "volume": "normalized volume and operator orders",
    "curve-rank": "rank 6 on the curve side",
}
