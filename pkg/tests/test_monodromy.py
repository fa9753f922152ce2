from __future__ import annotations

import cmath
from fractions import Fraction

import pytest

from hgverify import monodromy as mo
from hgverify.hypergeom import GAMMA_STAR, GammaList, build_irreducible_operator
from hgverify.ore import OreOp, ore_multiply

CFG = mo.ContinuationConfig()


def _c(x) -> complex:
    return complex(x)


@pytest.fixture(scope="module")
def star():
    return mo.run()


def test_config_validation():
    with pytest.raises(ValueError):
        mo.ContinuationConfig(precision=32)
    with pytest.raises(ValueError):
        mo.ContinuationConfig(step_safety=Fraction(1))
    with pytest.raises(ValueError):
        mo.ContinuationConfig(segments=8)


def test_taylor_step_trivial_operator():
    data = mo.OpData(OreOp.D(), 128)
    out = mo.taylor_step(data, 0, 0.3 + 0.2j, [[2]], CFG)
    assert abs(_c(out[0][0]) - 2) < 1e-30


def test_taylor_step_exponential():
    c = Fraction(3, 7)
    data = mo.OpData(OreOp.D() - OreOp.const(c), 192)
    h = 0.4 - 0.1j
    out = mo.taylor_step(data, 0.1, h, [[1]], CFG)
    assert abs(_c(out[0][0]) - cmath.exp(float(c) * h)) < 1e-14


def test_taylor_step_variable_coefficient():
    # D y = alpha y with D = d/dz, alpha = e^z: y = exp(e^z)
    data = mo.OpData(OreOp.D() - OreOp.alpha(), 192)
    z0, h = 0.0, 0.5 + 0.5j
    out = mo.taylor_step(data, z0, h, [[cmath.e]], CFG)
    want = cmath.exp(cmath.exp(z0 + h))
    assert abs(_c(out[0][0]) - want) < 1e-13
    assert abs(_c(out[0][0]) - want) / abs(want) < 1e-14


def test_taylor_step_reversible():
    data = mo.OpData(build_irreducible_operator(GAMMA_STAR), 192)
    a0 = float(Fraction(3125, 940369969152))
    zb = cmath.log(a0 / 2)
    h = 0.05j
    Y = mo.taylor_step(data, zb, h, mo._identity(8), CFG)
    back = mo.taylor_step(data, zb + h, -h, Y, CFG)
    assert mo.max_abs([[back[i][j] - (1 if i == j else 0) for j in range(8)] for i in range(8)]) < 1e-20


def test_clearance_violation_raises():
    data = mo.OpData(build_irreducible_operator(GAMMA_STAR), 192)
    a0 = float(Fraction(3125, 940369969152))
    zb = cmath.log(a0 / 2)
    with pytest.raises(mo.ContinuationError, match="clearance"):
        mo.taylor_step(data, zb, 0.5, mo._identity(8), CFG)


def test_binomial_monodromy():
    r = mo.run(GammaList((-2, 1, 1)))
    assert abs(_c(r.M0[0][0]) - 1) < 1e-20
    assert abs(_c(r.Ma0[0][0]) + 1) < 1e-20
    assert all(c.status == "pass" for c in mo.certify(r))


def test_curve_side_monodromy():
    r = mo.run(GammaList((-9, 1, 3, 5)))
    assert r.order == 6
    assert all(c.status == "pass" for c in mo.certify(r))


def test_gamma_star_certified(star):
    assert star.order == 8
    checks = mo.certify(star)
    assert all(c.status == "pass" for c in checks), [c for c in checks if c.status != "pass"]
    assert star.reflection_rank == 1
    assert star.product_residual < 1e-8


def test_gamma_star_json(star):
    j = star.to_json()
    assert j["predicted"]["q0"] == {"1": 2, "3": 1, "5": 1}
    assert j["predicted"]["qinf"] == {"6": 1, "18": 1}
    assert len(j["M0"]) == 8


def test_perturbed_base_point_conjugate(star):
    a0 = Fraction(3125, 940369969152)
    cfg = mo.ContinuationConfig(base_point=complex(float(a0) * 0.45, float(a0) * 0.05))
    r = mo.run(cfg=cfg)
    for A, B in ((star.M0, r.M0), (star.Ma0, r.Ma0), (star.Minf, r.Minf)):
        pa, pb = mo.charpoly(A), mo.charpoly(B)
        assert max(abs(_c(x) - _c(y)) for x, y in zip(pa, pb)) < 1e-10


def test_negative_control_low_precision_fails():
    r = mo.run(cfg=mo.ContinuationConfig(precision=64, tolerance=Fraction(1, 10**30)))
    assert any(c.status == "fail" for c in mo.certify(r))


def test_predicted_dets():
    p = mo.predicted_dets(GammaList((-2, 1, 1)))
    assert p["sum_exps0"] == 0 and p["rho"] == Fraction(-1, 2)


def test_gamma_star_certified_at_128_bits():
    r = mo.run(cfg=mo.ContinuationConfig(precision=128))
    assert all(c.status == "pass" for c in mo.certify(r))
