"""Candidate invariant region of the constant-field map, and the
conjugacy of the map with its inverse under the coordinate swap.

The region is

    I = {(x, y): 0 <= x <= a, max(0, psi(x) - a) <= y <= psi(x)}

with psi(x) = coeff0*h*x**k + tau*x. Invariance is claimed for
2 < tau <= 1 + k**(k/(k-1))/(k-1); :func:`verify_invariance` tests that
claim on a grid and reports what it finds. It does not hold: the corner
(a, a) lies in I and maps to (0, a), which does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import ConditionNotSatisfied
from .mapcore import ModelParams, State, step_backward, step_forward
from .spectral import _bulk_h

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class InvariantSetSpec:
    k: int
    tau: float
    coeff: float  # coeff0 * h, negative
    a: float
    x_hat: float
    x_hat0: float
    x_star_max: float
    condition_ok: bool

    def psi(self, x):
        return self.coeff * np.asarray(x, dtype=float) ** self.k + self.tau * np.asarray(x, dtype=float)

    def lower(self, x):
        return np.maximum(0.0, self.psi(x) - self.a)


def invariance_tau_bound(k: int) -> float:
    return 1 + k ** (k / (k - 1)) / (k - 1)


def invariant_set(p: ModelParams) -> InvariantSetSpec:
    h = _bulk_h(p)
    k, tau = p.k, p.tau
    denom = h * (tau - p.y0 - p.x1)
    e = 1.0 / (k - 1)
    x_hat0 = (tau / denom) ** e
    return InvariantSetSpec(
        k=k,
        tau=tau,
        coeff=p.coeff0 * h,
        a=((tau - 1) / denom) ** e,
        x_hat=x_hat0 * (1.0 / k) ** e,
        x_hat0=x_hat0,
        x_star_max=((tau - 1) / (k * denom)) ** e,
        condition_ok=bool(2 < tau <= invariance_tau_bound(k)),
    )


def _require(spec: InvariantSetSpec):
    if not spec.condition_ok:
        raise ConditionNotSatisfied(
            f"tau={spec.tau} outside (2, {invariance_tau_bound(spec.k)}] for k={spec.k}")


def membership_margin(spec: InvariantSetSpec, x, y):
    """Signed distance-like margin; non-negative exactly on I."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    psi = spec.psi(x)
    return np.minimum.reduce([x, spec.a - x, y - np.maximum(0.0, psi - spec.a), psi - y])


def contains(spec: InvariantSetSpec, s) -> bool:
    _require(spec)
    return bool(membership_margin(spec, s[0], s[1]) >= -MEMBERSHIP_TOL)


def grid_points(spec: InvariantSetSpec, grid_n: int) -> Tuple[np.ndarray, np.ndarray]:
    """grid_n x grid_n samples of I, x uniform on [0, a], y uniform on each fibre."""
    xs = np.linspace(0.0, spec.a, grid_n)
    lo, hi = spec.lower(xs), spec.psi(xs)
    t = np.linspace(0.0, 1.0, grid_n)
    X = np.repeat(xs, grid_n)
    Y = (lo[:, None] + (hi - lo)[:, None] * t[None, :]).ravel()
    return X, Y


def verify_invariance(spec: InvariantSetSpec, p: ModelParams, grid_n: int):
    """Map a grid of I forward once; return (violations, worst_margin)."""
    _require(spec)
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    X, Y = grid_points(spec, grid_n)
    Xn = (spec.coeff * X ** spec.k + spec.tau * X) - Y
    margins = membership_margin(spec, Xn, X)
    return int(np.count_nonzero(margins < -MEMBERSHIP_TOL)), float(margins.min())


def swap(s) -> State:
    return State(s[1], s[0])


def conjugacy_residual(p: ModelParams, samples: Iterable) -> float:
    """max |F(s) - (swap . F^-1 . swap)(s)| over the samples."""
    _bulk_h(p)
    worst = 0.0
    for s in samples:
        lhs = step_forward(p, s)
        rhs = swap(step_backward(p, swap(s)))
        worst = max(worst, math.hypot(lhs[0] - rhs[0], lhs[1] - rhs[1]))
    return worst
