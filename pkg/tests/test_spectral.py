import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sosmap import mapcore as mc
from sosmap import spectral as sp
from sosmap.errors import NotConstantField
from sosmap.field import Field


def _params(k, tau, h=1.0, frac=0.4):
    return mc.make_params(k, tau, h, frac * tau, frac * tau)


def test_fig1_interior_point():
    p = mc.make_params(2, 3.0, 1.0, 0.5, 1.48589)
    p0, p1 = sp.fixed_points(p)
    assert p0.location == (0.0, 0.0) and p0.label is sp.PointLabel.ORIGIN
    assert p1.location.x == pytest.approx(1 / 1.01411, rel=1e-14)
    assert p1.residual < 1e-12


def test_fig1_spectral_report():
    p = mc.make_params(2, 3.0, 1.0, 0.5, 1.48589)
    r0, r1 = sp.spectral_reports(p)
    assert r0.type_tag is sp.FixedPointType.SADDLE
    assert r1.type_tag is sp.FixedPointType.NON_HYPERBOLIC
    assert r1.regime is sp.Regime.COMPLEX_UNIT_MODULUS
    assert r1.trace == 1.0
    assert r1.eigenvalues[1] == pytest.approx(complex(0.5, math.sqrt(3) / 2), abs=1e-15)
    assert r1.rotation_angle == pytest.approx(math.pi / 3, abs=1e-15)
    assert r1.theta_tau_paper == pytest.approx(math.pi / 6, abs=1e-15)


def test_origin_eigenvalues_match_numpy():
    p = _params(3, 5.0)
    r0, _ = sp.spectral_reports(p)
    ref = sorted(np.linalg.eigvals(sp.jacobian(p, (0.0, 0.0))), key=abs)
    assert r0.eigenvalues[0] == pytest.approx(ref[0], rel=1e-12)
    assert r0.eigenvalues[1] == pytest.approx(ref[1], rel=1e-12)
    assert abs(r0.eigenvalues[0]) == pytest.approx(mc.theta_from_tau(5.0), rel=1e-12)


def test_closed_form_trace_matches_jacobian():
    for k in (2, 3, 4, 7):
        for tau in (2.3, 3.0, 4.5, 9.0):
            p = _params(k, tau, h=0.8)
            _, p1 = sp.fixed_points(p)
            num = float(np.trace(sp.jacobian(p, p1.location)))
            assert sp.classify(p, p1).trace == pytest.approx(num, abs=1e-10 * (1 + abs(num)))


def test_thresholds():
    assert sp.regime_thresholds(2) == (6.0, 4.0)
    assert sp.regime_thresholds(3) == (4.0, 3.0)


def test_fig11_double_minus_one():
    p = mc.make_params(3, 4.0, 1.0, 1.2, 0.8)
    r1 = sp.spectral_reports(p)[1]
    assert r1.regime is sp.Regime.DOUBLE_MINUS_ONE
    assert sp.Resonance.ONE_TWO in r1.resonances
    assert r1.eigenvalues == (-1, -1)


@pytest.mark.parametrize("k", [2, 3, 5, 10])
def test_regime_flips_at_threshold(k):
    upper, _ = sp.regime_thresholds(k)
    below = sp.spectral_reports(_params(k, upper - 1e-6))[1]
    above = sp.spectral_reports(_params(k, upper + 1e-6))[1]
    assert below.regime is sp.Regime.COMPLEX_UNIT_MODULUS
    assert above.regime is sp.Regime.REAL_SADDLE
    assert above.type_tag is sp.FixedPointType.SADDLE


def test_resonances():
    # k=2: trace 4 - tau. -1 at tau=5, 0 at tau=4
    assert sp.spectral_reports(_params(2, 5.0))[1].resonances == {sp.Resonance.ONE_THREE}
    assert sp.spectral_reports(_params(2, 4.0))[1].resonances == {sp.Resonance.ONE_FOUR}
    assert sp.spectral_reports(_params(2, 3.0))[1].resonances == frozenset()


@settings(max_examples=300, deadline=None)
@given(k=st.integers(2, 8), u=st.floats(0.001, 0.999), h=st.floats(0.1, 5.0))
def test_elliptic_interior_is_unit_modulus(k, u, h):
    upper, _ = sp.regime_thresholds(k)
    tau = 2 + u * (upper - 2)
    r1 = sp.spectral_reports(_params(k, tau, h))[1]
    assert r1.type_tag is sp.FixedPointType.NON_HYPERBOLIC
    for m in sp.eigen_moduli(r1):
        assert abs(m - 1) <= 1e-12
    assert 2 * math.cos(r1.rotation_angle) == pytest.approx(r1.trace, abs=1e-12)
    assert r1.rotation_angle + r1.theta_tau_paper == pytest.approx(math.pi / 2, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(k=st.integers(2, 8), tau=st.floats(2.01, 50.0), h=st.floats(0.1, 5.0))
def test_never_attracting_or_repelling(k, tau, h):
    for r in sp.spectral_reports(_params(k, tau, h)):
        assert r.type_tag not in (sp.FixedPointType.ATTRACTING, sp.FixedPointType.REPELLING)
        assert sp.eigen_product(r) == pytest.approx(1.0, abs=1e-10)


def test_eigenvalues_from_large_trace_are_stable():
    lo, hi = sp.eigenvalues_from_trace(-1e9)
    assert (lo * hi).real == pytest.approx(1.0, abs=1e-15)
    assert lo.real == pytest.approx(-1e-9, rel=1e-15)


def test_nonconstant_field_rejected():
    p = mc.make_params(2, 3.0, Field.geometric_normalized(0.5), 0.5, 0.5)
    with pytest.raises(NotConstantField):
        sp.fixed_points(p)


def test_unit_at_zero_does_not_change_fixed_points():
    # h(0) pinned to 1 while the bulk value 1.05 drives the fixed point
    p = mc.make_params(2, 3.0, 1.05, 1.2, 0.6)
    x = sp.interior_x(p)
    assert x == pytest.approx(1 / (1.05 * 1.2), rel=1e-14)
