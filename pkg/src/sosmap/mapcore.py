"""The second-order recurrence and its planar map.

The recurrence

    u[n+1] = (u[-1] + u[1] - tau) * h(n) * u[n]**k + tau * u[n] - u[n-1]

with u[0] = 1 and u[-1] + u[1] < tau is written as the planar map
F_n(x, y) = (coeff0 * h(n) * x**k + tau * x - y, x) acting on
(x, y) = (u[n], u[n-1]). Trajectories start at (u[1], u[0]) = (x1, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Union

import numpy as np

from .errors import (EscapeError, InitialConditionViolated, InvalidOrder, InvalidTau,
                     NonpositiveInitial)
from .field import Field

ESCAPE_BOUND = 1e12


class State(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ModelParams:
    k: int
    tau: float
    theta: float
    field: Field
    y0: float
    x1: float
    coeff0: float

    def h(self, n: int) -> float:
        return self.field.at(n)

    def bulk_h(self) -> Optional[float]:
        return self.field.bulk_constant()


def theta_from_tau(tau: float) -> float:
    """Root of theta**2 - tau*theta + 1 = 0 lying in (0, 1)."""
    # 2/(tau + sqrt(tau^2 - 4)) avoids cancellation for large tau
    return 2.0 / (tau + math.sqrt(tau * tau - 4.0))


def tau_from_theta(theta: float) -> float:
    return theta + 1.0 / theta


def make_params(k: int, tau: float, field: Union[Field, float], y0: float, x1: float) -> ModelParams:
    """Validate inputs and build :class:`ModelParams`.

    ``field`` may be a bare number, read as a constant field. Whatever is
    passed is re-tagged ``unit_at_zero`` so that h(0) = 1.
    """
    if int(k) != k or k < 2:
        raise InvalidOrder(f"k must be an integer >= 2, got {k}")
    if not tau > 2:
        raise InvalidTau(f"tau must exceed 2, got {tau}")
    if not (y0 > 0 and x1 > 0):
        raise NonpositiveInitial(f"need y0 > 0 and x1 > 0, got y0={y0}, x1={x1}")
    if not y0 + x1 < tau:
        raise InitialConditionViolated(f"need y0 + x1 < tau, got {y0} + {x1} >= {tau}")
    if not isinstance(field, Field):
        field = Field.constant(field)
    field = field.normalized("unit_at_zero")
    return ModelParams(int(k), float(tau), theta_from_tau(tau), field, float(y0), float(x1),
                       float(y0 + x1 - tau))


def _forward(c: float, h: float, k: int, tau: float, x: float, y: float) -> float:
    # grouping shared with _backward so that the inverse is exact up to one rounding
    return (c * h * x ** k + tau * x) - y


def step_forward(p: ModelParams, s, n: int = 1) -> State:
    x, y = s
    xn = _forward(p.coeff0, p.h(n), p.k, p.tau, x, y)
    if not abs(xn) <= ESCAPE_BOUND:
        raise EscapeError(xn, ESCAPE_BOUND)
    return State(xn, x)


def step_backward(p: ModelParams, s, n: int = 1) -> State:
    """Inverse of :func:`step_forward` at the same step index."""
    x, y = s
    yn = _forward(p.coeff0, p.h(n), p.k, p.tau, y, x)
    if not abs(yn) <= ESCAPE_BOUND:
        raise EscapeError(yn, ESCAPE_BOUND)
    return State(y, yn)


@dataclass
class Trajectory:
    """Iterates of the map starting from (x1, 1).

    ``points[m]`` is the state after ``m`` applications of the map, so
    ``points[m, 0]`` is u[m+1]. ``first_nonpositive`` and ``escaped_at``
    are step indices; an escaping iterate is not stored, but a negative
    escaping value still sets ``first_nonpositive``.
    """

    points: np.ndarray
    first_nonpositive: Optional[int]
    escaped_at: Optional[int]
    max_abs: float

    def __len__(self):
        return len(self.points)

    @property
    def xs(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def ys(self) -> np.ndarray:
        return self.points[:, 1]

    def states(self) -> List[State]:
        return [State(float(a), float(b)) for a, b in self.points]


def iterate(p: ModelParams, n_steps: int, start=None) -> Trajectory:
    """Apply the map ``n_steps`` times from (x1, 1), or from ``start``.

    Iteration continues through sign changes and halts on escape.
    Step m -> m+1 uses h(m+1), since points[0] is the state at n = 1.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    x, y = (p.x1, 1.0) if start is None else (float(start[0]), float(start[1]))
    c, k, tau = p.coeff0, p.k, p.tau
    bulk = p.bulk_h()
    out = np.empty((n_steps + 1, 2))
    out[0] = x, y
    first_nonpos = 0 if x <= 0 else None
    escaped = None
    n_done = n_steps
    for m in range(n_steps):
        h = bulk if bulk is not None else p.h(m + 1)
        x, y = _forward(c, h, k, tau, x, y), x
        if not abs(x) <= ESCAPE_BOUND:
            escaped = m + 1
            n_done = m
            if first_nonpos is None and x <= 0:
                first_nonpos = m + 1
            break
        out[m + 1] = x, y
        if first_nonpos is None and x <= 0:
            first_nonpos = m + 1
    pts = out[: n_done + 1]
    return Trajectory(pts, first_nonpos, escaped, float(np.max(np.abs(pts[:, 0]))))


def boundedness_stats(t: Trajectory):
    """``(max_abs, is_positive, is_bounded)`` for a trajectory."""
    if len(t) == 0:
        raise ValueError("empty trajectory")
    return t.max_abs, t.first_nonpositive is None, t.escaped_at is None


def positivity_horizon(p: ModelParams, n_max: int) -> float:
    """First step index with x <= 0, or ``math.inf`` if none within ``n_max`` steps."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    t = iterate(p, n_max)
    return math.inf if t.first_nonpositive is None else t.first_nonpositive
