"""Numerical monodromy of ``sum c_k(alpha) D^k`` by Taylor continuation.

Everything is planned in ``z = log alpha``: there ``D = d/dz``, the point
``alpha = 0`` moves to ``Re z = -inf`` and the loop around it becomes the
segment ``z -> z + 2 pi i``.  The accessory singular point alpha_0 is tiny in
absolute terms but sits at distance ``log 2`` from the default base point in
this coordinate.  Fundamental matrices are carried in the jet basis
``(y, Dy, ..., D^{n-1} y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .checks import Check, check
from .exact import UniPoly, rat_to_str
from .hypergeom import (GammaList, build_irreducible_operator, cyclotomic_product, local_charpolys,
                        reduced_exponents)
from .ore import OreOp


class ContinuationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ContinuationConfig:
    precision: int = 192
    step_safety: Fraction = Fraction(1, 4)
    base_point: complex | None = None  # alpha; default alpha_0 / 2
    loop_radius_factor: Fraction = Fraction(1)
    tolerance: Fraction = Fraction(1, 10**8)
    segments: int = 16
    max_terms: int = 4000

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if not 0 < self.step_safety < 1:
            raise ValueError("step_safety must lie in (0, 1)")
        if self.segments < 16:
            raise ValueError("loops need at least 16 segments")
        if not 0 < self.loop_radius_factor <= 1:
            raise ValueError("loop_radius_factor must lie in (0, 1]")

    @property
    def series_eps(self) -> float:
        return max(float(self.tolerance) * 1e-12, 2.0 ** (8 - self.precision))

    def to_json(self) -> dict:
        return {"precision": self.precision, "step_safety": rat_to_str(self.step_safety),
                "base_point": None if self.base_point is None else str(self.base_point),
                "loop_radius_factor": rat_to_str(self.loop_radius_factor),
                "tolerance": rat_to_str(self.tolerance), "segments": self.segments}


class OpData:
    """Coefficients ``c_{k,m}`` of ``sum_k sum_m c_{k,m} alpha^m D^k`` at a
    fixed working precision, plus the singular points in the z-plane."""

    def __init__(self, op: OreOp, precision: int):
        self.order = op.order
        lo, hi = op.alpha_range()
        if lo < 0:
            raise ValueError("operator coefficients must be polynomials in alpha")
        self.precision = precision
        self.powers = sorted({e[0] for c in op.terms.values() for e in c.terms})
        with _working(precision):
            self.c = {m: [_mpq(op.coeff(k).coeff((m,))) for k in range(self.order + 1)] for m in self.powers}
        lead = op.coeff(self.order)
        self.lead_poly = UniPoly([lead.coeff((m,)) for m in range(hi + 1)])
        self.alpha_roots = _roots(self.lead_poly, precision)
        if any(abs(r) == 0 for r in self.alpha_roots):
            raise ValueError("leading coefficient vanishes at alpha = 0")
        with _working(precision):
            self.z_sing = [gmpy2.log(mpc(r)) for r in self.alpha_roots]

    def distance(self, z) -> mpfr:
        """Distance from z to the nearest singular point ``log r + 2 pi i k``."""
        best = None
        twopi = 2 * gmpy2.const_pi()
        for s in self.z_sing:
            k = gmpy2.rint((z.imag - s.imag) / twopi)
            for kk in (k - 1, k, k + 1):
                d = abs(z - (s + mpc(0, twopi * kk)))
                best = d if best is None or d < best else best
        return best if best is not None else mpfr("inf")


def _working(precision: int):
    return gmpy2.context(gmpy2.get_context(), precision=precision)


def _prec_of(A) -> int:
    """Working precision for a matrix: the widest entry precision."""
    return max(max(x.precision) if isinstance(x, mpc) else 53 for row in A for x in row)


def _mpq(q: Fraction):
    return gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator))


def _roots(p: UniPoly, precision: int) -> list:
    """Nonzero roots of p (as gmpy2 mpc) via numpy followed by Newton polishing."""
    cs = list(p.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
    q = UniPoly(cs)
    if q.is_zero() or q.degree == 0:
        return []
    approx = np.roots([float(c) for c in reversed(q.coeffs)])
    dq = q.derivative()
    out = []
    with _working(precision):
        qc = [_mpq(c) for c in q.coeffs]
        dc = [_mpq(c) for c in dq.coeffs]

        def ev(cs, x):
            acc = mpc(0)
            for c in reversed(cs):
                acc = acc * x + c
            return acc

        for r in approx:
            x = mpc(complex(r))
            for _ in range(200):
                dx = ev(qc, x) / ev(dc, x)
                x -= dx
                if abs(dx) <= abs(x) * mpfr(2) ** (-precision + 4):
                    break
            out.append(x)
    return out


def taylor_step(opdata: OpData, center, h, initial: list[list], cfg: ContinuationConfig) -> list[list]:
    """Transport jets from ``center`` to ``center + h`` (z-plane).

    ``initial[k][c]`` is ``D^k y_c`` at the center for column c.
    """
    n = opdata.order
    with _working(cfg.precision):
        center = mpc(center)
        h = mpc(h)
        dist = opdata.distance(center)
        if abs(h) > dist * _mpq(cfg.step_safety) * (1 + mpfr(2) ** -20):
            raise ContinuationError(f"step {float(abs(h)):.3g} violates clearance {float(dist):.3g}")
        alpha_c = gmpy2.exp(center)
        ms = opdata.powers
        am = {m: alpha_c ** m for m in ms}
        # constant terms of C_k(h) = sum_m c_{k,m} alpha_c^m e^{m h}
        C0 = [sum((opdata.c[m][k] * am[m] for m in ms), mpc(0)) for k in range(n + 1)]
        lead = C0[n]
        ncols = len(initial[0])
        eps = mpfr(cfg.series_eps)
        habs = abs(h)
        results = []
        for col in range(ncols):
            # a_j: Taylor coefficients of y; b[k][j]: of D^k y
            a = [mpc(initial[k][col]) / math.factorial(k) for k in range(n)]
            b = [[] for _ in range(n + 1)]

            def ff(j, k):
                r = 1
                for i in range(1, k + 1):
                    r *= j + i
                return r

            for k in range(n):
                for j in range(n - k):
                    b[k].append(a[j + k] * ff(j, k))
            s = {m: [] for m in ms}  # s[m][N] = sum_k c_{k,m} b[k][N]
            sums = [mpc(0) for _ in range(n + 1)]
            hp = mpc(1)
            small = 0
            N = 0
            scale = max((abs(x) for x in a), default=mpfr(0)) + 1
            while True:
                if N > cfg.max_terms:
                    raise ContinuationError("Taylor series did not converge within max_terms")
                rest = mpc(0)
                partial = {}
                for m in ms:
                    sp = mpc(0)
                    cm = opdata.c[m]
                    for k in range(n):
                        if cm[k]:
                            sp += cm[k] * b[k][N]
                    partial[m] = sp
                    conv = mpc(0)
                    if m:
                        w = mpfr(1)
                        for i in range(1, N + 1):
                            w = w * m / i
                            conv += w * s[m][N - i]
                    rest += am[m] * (sp + conv)
                bn = -rest / lead
                b[n].append(bn)
                for m in ms:
                    s[m].append(partial[m] + opdata.c[m][n] * bn)
                anew = bn / ff(N, n)
                a.append(anew)
                j_new = N + n
                for k in range(n):
                    b[k].append(anew * ff(j_new - k, k))
                # accumulate jets with index N
                mag = mpfr(0)
                for k in range(n):
                    t = b[k][N] * hp
                    sums[k] += t
                    mag = max(mag, abs(t))
                scale = max(scale, max(abs(x) for x in sums[:n]))
                if mag <= eps * scale:
                    small += 1
                    if small >= n + 2:
                        break
                else:
                    small = 0
                hp *= h
                N += 1
            results.append(sums[:n])
        return [[results[c][k] for c in range(ncols)] for k in range(n)]


def _identity(n):
    return [[mpc(1) if i == j else mpc(0) for j in range(n)] for i in range(n)]


def continue_path(opdata: OpData, path: Sequence, cfg: ContinuationConfig, Y=None) -> list[list]:
    """Continue a fundamental matrix along a polyline in the z-plane."""
    n = opdata.order
    with _working(cfg.precision):
        Y = Y or _identity(n)
        safety = _mpq(cfg.step_safety)
        for idx in range(len(path) - 1):
            z, z1 = mpc(path[idx]), mpc(path[idx + 1])
            guard = 0
            while True:
                rem = z1 - z
                if abs(rem) == 0:
                    break
                d = opdata.distance(z)
                if d == 0:
                    raise ContinuationError(f"segment {idx} hits a singular point")
                step_len = min(abs(rem), d * safety)
                h = rem if step_len == abs(rem) else rem * (step_len / abs(rem))
                Y = taylor_step(opdata, z, h, Y, cfg)
                z = z1 if step_len == abs(rem) else z + h
                guard += 1
                if guard > 100000:
                    raise ContinuationError(f"segment {idx} needs too many steps")
        return Y


def _zc(x) -> mpc:
    return mpc(x)


@dataclass
class Loops:
    base: object
    around0: list
    around_a0: list
    big: list


def plan_loops(opdata: OpData, cfg: ContinuationConfig, alpha0) -> Loops:
    """Loop geometry in the z-plane.

    * around 0: ``z_b -> z_b + 2 pi i``;
    * around alpha_0: polygon around ``z_0 = log alpha_0`` through ``z_b``
      (counterclockwise, ``cfg.segments`` vertices);
    * big loop: a rectangle passing right of ``z_0``, homotopic to the loop
      around alpha_0 followed by the loop around 0.
    """
    with _working(cfg.precision):
        pi = gmpy2.const_pi()
        z0 = gmpy2.log(mpc(alpha0))
        if cfg.base_point is None:
            zb = z0 - gmpy2.log(mpfr(2))
        else:
            zb = gmpy2.log(mpc(cfg.base_point))
        two_pi_i = mpc(0, 2 * pi)
        around0 = [zb, zb + two_pi_i]
        R = abs(zb - z0)
        rho = R * _mpq(cfg.loop_radius_factor)
        u = (zb - z0) / R  # unit direction from z0 to zb
        start = z0 + u * rho
        ang0 = gmpy2.atan2(u.imag, u.real)
        circle = []
        for j in range(cfg.segments + 1):
            t = ang0 + 2 * pi * j / cfg.segments
            circle.append(z0 + mpc(gmpy2.cos(t), gmpy2.sin(t)) * rho)
        circle[-1] = start
        around_a0 = ([zb] if rho != R else []) + circle + ([zb] if rho != R else [])
        # big loop: dip below, pass right of z0 at distance R, climb, come back
        right = z0.real + R
        low = zb.imag - 1
        high = zb.imag + 2 * pi - 1
        big = [zb, mpc(zb.real, low), mpc(right, low), mpc(right, high), mpc(zb.real, high), zb + two_pi_i]
        return Loops(zb, around0, around_a0, big)


# ---------------------------------------------------------------------------
# Small dense linear algebra at working precision
# ---------------------------------------------------------------------------


def mat_mul(A, B):
    with _working(max(_prec_of(A), _prec_of(B))):
        return _mat_mul(A, B)


def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), mpc(0)) for j in range(p)] for i in range(n)]


def mat_inv(A):
    with _working(_prec_of(A)):
        return _mat_inv(A)


def _mat_inv(A):
    n = len(A)
    M = [list(r) + [mpc(1) if i == j else mpc(0) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        p = max(range(c, n), key=lambda r: abs(M[r][c]))
        if abs(M[p][c]) == 0:
            raise ContinuationError("singular monodromy matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def charpoly(A) -> list:
    """Coefficients (low to high, monic) of ``det(t I - A)`` by Faddeev-LeVerrier."""
    with _working(_prec_of(A)):
        return _charpoly(A)


def _charpoly(A) -> list:
    n = len(A)
    coeffs = [mpc(0)] * (n + 1)
    coeffs[n] = mpc(1)
    Mk = [[mpc(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = _mat_mul(A, Mk)
        Mk = [[AM[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        AMk = _mat_mul(A, Mk)
        tr = sum((AMk[i][i] for i in range(n)), mpc(0))
        coeffs[n - k] = -tr / k
    return coeffs


def mat_det(A):
    c = charpoly(A)
    n = len(A)
    return c[0] * (-1) ** n


def max_abs(A) -> float:
    return max(float(abs(x)) for row in A for x in row)


def to_numpy(A) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in A], dtype=complex)


def numerical_rank(A, threshold: float = 1e-6) -> tuple[int, list[float]]:
    """Rank by singular values above ``threshold * max(1, sigma_1)``."""
    s = np.linalg.svd(to_numpy(A), compute_uv=False)
    cut = threshold * max(1.0, float(s[0]) if len(s) else 1.0)
    return int(np.sum(s > cut)), [float(x) for x in s]


def residual_vs(coeffs, exact: UniPoly) -> float:
    ex = list(exact.coeffs) + [Fraction(0)] * (len(coeffs) - len(exact.coeffs))
    return max(float(abs(c - _mpq(e))) for c, e in zip(coeffs, ex))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _mat_json(A, digits: int = 30) -> list:
    fmt = f"{{:.{digits}e}}"
    return [[[fmt.format(x.real), fmt.format(x.imag)] for x in row] for row in A]


@dataclass
class MonodromyReport:
    gamma: tuple[int, ...]
    order: int
    M0: list
    Ma0: list
    Mbig: list
    Minf: list
    charpoly_residuals: dict
    reflection_rank: int
    singular_values: list[float]
    product_residual: float
    det_residuals: dict
    config: ContinuationConfig
    predicted: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "order": self.order,
            "config": self.config.to_json(),
            "conventions": {
                "coordinate": "z = log(alpha), D = d/dz",
                "base": "alpha_0/2 unless configured",
                "loops": "counterclockwise; M(l1 then l2) = M(l2) M(l1); big loop = loop(alpha_0) then loop(0); "
                         "M_inf = M_big^{-1}",
                "basis": "jets (y, Dy, ..., D^{n-1} y) at the base point",
            },
            "M0": _mat_json(self.M0),
            "Malpha0": _mat_json(self.Ma0),
            "Minf": _mat_json(self.Minf),
            "charpoly_residuals": {k: f"{v:.3e}" for k, v in self.charpoly_residuals.items()},
            "reflection_rank": self.reflection_rank,
            "singular_values_Malpha0_minus_I": [f"{s:.6e}" for s in self.singular_values],
            "product_residual": f"{self.product_residual:.3e}",
            "det_residuals": {k: f"{v:.3e}" for k, v in self.det_residuals.items()},
            "predicted": self.predicted,
        }


def predicted_dets(gamma: GammaList) -> dict:
    """Exponent-sum predictions: ``det M_0 = e^{2 pi i sum b}``; the special
    exponent at alpha_0 is ``rho = (n - 1) - sum b - sum a`` (Fuchs relation)."""
    ed = reduced_exponents(gamma)
    s0 = sum(ed.exps0, Fraction(0))
    sinf = sum(ed.expsInf, Fraction(0))
    rho = (ed.order - 1) - s0 - sinf
    return {"sum_exps0": s0, "rho": rho}


def _expi(q: Fraction):
    t = 2 * gmpy2.const_pi() * _mpq(q)
    return mpc(gmpy2.cos(t), gmpy2.sin(t))


def monodromy_around(point: str, gamma: GammaList | None = None, cfg: ContinuationConfig | None = None,
                     op: OreOp | None = None, alpha0=None):
    """Monodromy matrix around ``'0'``, ``'alpha0'`` or the big loop ``'big'``."""
    cfg = cfg or ContinuationConfig()
    gamma = gamma or GammaList((-18, -1, 2, 3, 5, 9))
    op = op or build_irreducible_operator(gamma)
    data = OpData(op, cfg.precision)
    a0 = alpha0 if alpha0 is not None else reduced_exponents(gamma).alpha0
    with _working(cfg.precision):
        loops = plan_loops(data, cfg, _mpq(Fraction(a0)))
        path = {"0": loops.around0, "alpha0": loops.around_a0, "big": loops.big}[point]
        return continue_path(data, path, cfg)


def run(gamma: GammaList | None = None, cfg: ContinuationConfig | None = None) -> MonodromyReport:
    cfg = cfg or ContinuationConfig()
    gamma = gamma or GammaList((-18, -1, 2, 3, 5, 9))
    op = build_irreducible_operator(gamma)
    data = OpData(op, cfg.precision)
    ed = reduced_exponents(gamma)
    f0, finf = local_charpolys(gamma)
    q0, qinf = cyclotomic_product(f0), cyclotomic_product(finf)
    pred = predicted_dets(gamma)
    with _working(cfg.precision):
        loops = plan_loops(data, cfg, _mpq(ed.alpha0))
        M0 = continue_path(data, loops.around0, cfg)
        Ma0 = continue_path(data, loops.around_a0, cfg)
        Mbig = continue_path(data, loops.big, cfg)
        n = len(M0)
        M0inv = mat_inv(M0)
        prod = mat_mul(M0, Ma0)  # loop(alpha0) then loop(0)
        Minf = mat_inv(Mbig)
        res = {
            "char(M0^-1) vs q0": residual_vs(charpoly(M0inv), q0),
            "char((Ma0 M0)^-1) vs qinf": residual_vs(charpoly(mat_inv(mat_mul(Ma0, M0))), qinf),
            "char(Minf) vs qinf": residual_vs(charpoly(Minf), qinf),
        }
        I = _identity(n)
        diff = mat_mul(Minf, prod)
        product_residual = max(float(abs(diff[i][j] - I[i][j])) for i in range(n) for j in range(n))
        rank, sv = numerical_rank([[Ma0[i][j] - I[i][j] for j in range(n)] for i in range(n)])
        dets = {
            "det M0": float(abs(mat_det(M0) - _expi(pred["sum_exps0"]))),
            "det Malpha0": float(abs(mat_det(Ma0) - _expi(pred["rho"]))),
        }
    predicted = {"q0": {str(k): v for k, v in f0.items()}, "qinf": {str(k): v for k, v in finf.items()},
                 "sum_exps0": rat_to_str(pred["sum_exps0"]), "rho": rat_to_str(pred["rho"])}
    return MonodromyReport(gamma.entries, n, M0, Ma0, Mbig, Minf, res, rank, sv, product_residual, dets, cfg,
                           predicted)


def certify(report: MonodromyReport, tolerance: float | None = None) -> list[Check]:
    tol = float(report.config.tolerance) if tolerance is None else tolerance
    anchor = "cyclotomic-ratio"
    checks = []
    for name, r in report.charpoly_residuals.items():
        checks.append(check(name, anchor, r < tol, f"< {tol:.1e}", f"{r:.3e}"))
    checks.append(check("rank(M_alpha0 - I) = 1", "singular-value", report.reflection_rank == 1,
                        1, report.reflection_rank))
    checks.append(check("product relation", "product-relation",
                        report.product_residual < tol, f"< {tol:.1e}", f"{report.product_residual:.3e}"))
    for name, r in report.det_residuals.items():
        checks.append(check(name, "exponent-sums", r < tol, f"< {tol:.1e}", f"{r:.3e}"))
    return checks
