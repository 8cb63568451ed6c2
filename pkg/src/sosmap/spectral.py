"""Fixed points of the constant-field map and their linear stability."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

import numpy as np

from .errors import NotConstantField
from .mapcore import ModelParams, State, _forward

RESONANCE_TOL = 1e-9
UNIT_CIRCLE_TOL = 1e-9


class PointLabel(str, Enum):
    ORIGIN = "Origin"
    INTERIOR = "Interior"


class FixedPointType(str, Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"
    SADDLE = "Saddle"
    NON_HYPERBOLIC = "NonHyperbolic"


class Regime(str, Enum):
    COMPLEX_UNIT_MODULUS = "ComplexUnitModulus"
    DOUBLE_MINUS_ONE = "DoubleMinusOne"
    REAL_SADDLE = "RealSaddle"


class Resonance(str, Enum):
    ONE_TWO = "OneTwo"
    ONE_THREE = "OneThree"
    ONE_FOUR = "OneFour"


@dataclass(frozen=True)
class FixedPoint:
    location: State
    label: PointLabel
    residual: float


@dataclass(frozen=True)
class SpectralReport:
    fixed_point: FixedPoint
    eigenvalues: Tuple[complex, complex]
    trace: float
    type_tag: FixedPointType
    regime: Optional[Regime] = None
    resonances: FrozenSet[Resonance] = field(default_factory=frozenset)
    rotation_angle: Optional[float] = None
    theta_tau_paper: Optional[float] = None


def _bulk_h(p: ModelParams) -> float:
    h = p.bulk_h()
    if h is None:
        raise NotConstantField("fixed-point analysis needs h(n) constant for n >= 1")
    return h


def regime_thresholds(k: int) -> Tuple[float, float]:
    """``(2(k+1)/(k-1), 2k/(k-1))``: the 1:2 and 1:4 loci in tau."""
    return 2 * (k + 1) / (k - 1), 2 * k / (k - 1)


def interior_x(p: ModelParams) -> float:
    h = _bulk_h(p)
    return ((p.tau - 2) / (h * (p.tau - p.y0 - p.x1))) ** (1.0 / (p.k - 1))


def fixed_points(p: ModelParams) -> Tuple[FixedPoint, FixedPoint]:
    h = _bulk_h(p)
    xs = interior_x(p)
    out = []
    for x, label in ((0.0, PointLabel.ORIGIN), (xs, PointLabel.INTERIOR)):
        img = _forward(p.coeff0, h, p.k, p.tau, x, x)
        out.append(FixedPoint(State(x, x), label, abs(img - x)))
    return out[0], out[1]


def jacobian(p: ModelParams, s) -> np.ndarray:
    h = _bulk_h(p)
    x = s[0]
    return np.array([[p.coeff0 * h * p.k * x ** (p.k - 1) + p.tau, -1.0], [1.0, 0.0]])


def eigenvalues_from_trace(trace: float) -> Tuple[complex, complex]:
    """Roots of lambda**2 - trace*lambda + 1, smaller modulus first."""
    disc = trace * trace - 4.0
    if disc == 0:
        return complex(trace / 2), complex(trace / 2)
    if disc < 0:
        w = math.sqrt(-disc) / 2
        return complex(trace / 2, -w), complex(trace / 2, w)
    r = math.sqrt(disc)
    # the larger root without cancellation, the smaller as its reciprocal
    big = (trace + math.copysign(r, trace)) / 2
    return complex(1.0 / big), complex(big)


def hyperbolic_type(eigs) -> FixedPointType:
    mods = [abs(e) for e in eigs]
    if any(abs(m - 1) <= UNIT_CIRCLE_TOL for m in mods):
        return FixedPointType.NON_HYPERBOLIC
    if all(m < 1 for m in mods):
        return FixedPointType.ATTRACTING
    if all(m > 1 for m in mods):
        return FixedPointType.REPELLING
    return FixedPointType.SADDLE


def _interior_regime(k: int, tau: float) -> Regime:
    ns_upper, _ = regime_thresholds(k)
    if abs(tau - ns_upper) <= RESONANCE_TOL:
        return Regime.DOUBLE_MINUS_ONE
    return Regime.COMPLEX_UNIT_MODULUS if tau < ns_upper else Regime.REAL_SADDLE


def theta_tau_printed(k: int, tau: float) -> float:
    """arctan((2k-(k-1)tau) / sqrt((k-1)(tau-2)(2(k+1)-(k-1)tau))) as written in the source.

    This is pi/2 minus the eigenvalue argument, not the argument itself.
    """
    return math.atan((2 * k - (k - 1) * tau)
                     / math.sqrt((k - 1) * (tau - 2) * (2 * (k + 1) - (k - 1) * tau)))


def classify(p: ModelParams, fp: FixedPoint) -> SpectralReport:
    if fp.label is PointLabel.INTERIOR:
        # closed form of the trace at x*; avoids the pow round trip
        trace = 2 * p.k - (p.k - 1) * p.tau
    else:
        trace = float(np.trace(jacobian(p, fp.location)))
    eigs = eigenvalues_from_trace(trace)
    tag = hyperbolic_type(eigs)

    resonances = set()
    if tag is FixedPointType.NON_HYPERBOLIC:
        if abs(trace + 2) <= RESONANCE_TOL:
            resonances.add(Resonance.ONE_TWO)
        if abs(trace + 1) <= RESONANCE_TOL:
            resonances.add(Resonance.ONE_THREE)
        if abs(trace) <= RESONANCE_TOL:
            resonances.add(Resonance.ONE_FOUR)

    regime = rotation = printed = None
    if fp.label is PointLabel.INTERIOR:
        regime = _interior_regime(p.k, p.tau)
        if regime is Regime.COMPLEX_UNIT_MODULUS:
            upper = eigs[0] if eigs[0].imag > 0 else eigs[1]
            rotation = math.atan2(upper.imag, upper.real)
            printed = theta_tau_printed(p.k, p.tau)
    return SpectralReport(fp, eigs, trace, tag, regime, frozenset(resonances), rotation, printed)


def spectral_reports(p: ModelParams) -> Tuple[SpectralReport, SpectralReport]:
    p0, p1 = fixed_points(p)
    return classify(p, p0), classify(p, p1)


def eigen_moduli(report: SpectralReport) -> Tuple[float, float]:
    return abs(report.eigenvalues[0]), abs(report.eigenvalues[1])


def eigen_product(report: SpectralReport) -> complex:
    return report.eigenvalues[0] * report.eigenvalues[1]

