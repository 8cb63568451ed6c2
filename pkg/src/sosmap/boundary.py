"""Explicit boundary laws of the SOS model with an external field.

A translation-invariant boundary law is a positive vector (z_i, i in Z),
z_0 = 1, solving

    z_i = h(i)/h(0) * ((theta^|i| + sum_{j != 0} theta^|i-j| z_j)
                       / (1 + sum_{j != 0} theta^|j| z_j))**k.

Three closed-form families are provided (left-, right- and two-sided
infinite tails) together with the series conditions under which each one
solves the system, a truncated-ratio verifier, the transfer operator, and
cylinder weights of the resulting non-probability measure on finite
subtrees.

Everything is evaluated in log space. z_i grows like theta^(-k|i|) on at
least one side, so the plain values overflow long before the sums settle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DenominatorUnderflow, InvalidFieldSpec, SpinOutOfRange
from .field import Field

LOG_MAX = math.log(np.finfo(float).max)

# partial-sum certificates
CERT_RUN = 50
CONVERGE_RATIO = 1 - 1e-6
DIVERGE_RATIO = 1 - 1e-9
DIVERGE_SUM = 1e12
# |log ratio| below this counts as ratio exactly 1
UNIT_RATIO_LOG_TOL = 1e-12

KINDS = ("left_infinite", "right_infinite", "both_infinite", "custom")


def _lse(a) -> float:
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return -math.inf
    return float(np.logaddexp.reduce(a))


# ---------------------------------------------------------------------------
# boundary laws


@dataclass(frozen=True)
class BoundaryLaw:
    kind: str
    theta: float
    k: int
    field: Field
    rho: float = 1.0
    generator: Optional[Callable[[int], float]] = None
    log_generator: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidFieldSpec(f"unknown boundary-law kind {self.kind!r}")
        if not (self.theta > 0 and self.theta != 1):
            raise ValueError("theta must be positive and different from 1")
        if self.kind == "both_infinite" and not self.rho > 0:
            raise ValueError("rho must be positive")
        if self.kind == "custom" and (self.generator is None) == (self.log_generator is None):
            raise ValueError("custom boundary law needs exactly one of generator, log_generator")


def left_infinite(theta: float, k: int, field: Optional[Field] = None) -> BoundaryLaw:
    """z_i = h(i)/h(0) theta^(ik); with the geometric field this is theta^(ik+|i|)."""
    return BoundaryLaw("left_infinite", theta, k, field or _default_field(theta, k))


def right_infinite(theta: float, k: int, field: Optional[Field] = None) -> BoundaryLaw:
    """z_i = h(i)/h(0) theta^(-ik)."""
    return BoundaryLaw("right_infinite", theta, k, field or _default_field(theta, k))


def both_infinite(theta: float, k: int, rho: float = 1.0,
                  field: Optional[Field] = None) -> BoundaryLaw:
    """z_i = h(i)/h(0) ((theta^i + rho theta^-i)/(1 + rho))^k."""
    return BoundaryLaw("both_infinite", theta, k, field or _default_field(theta, k), rho=rho)


def custom_law(theta: float, k: int, generator: Optional[Callable[[int], float]] = None,
               field: Optional[Field] = None,
               log_generator: Optional[Callable[[int], float]] = None) -> BoundaryLaw:
    """User-supplied z_i, either directly or as log z_i (needed once z_i leaves float range)."""
    return BoundaryLaw("custom", theta, k, field or _default_field(theta, k),
                       generator=generator, log_generator=log_generator)


def _default_field(theta: float, k: int) -> Field:
    return Field.geometric_normalized(theta) if theta < 1 else Field.steep(theta, k)


def log_z(law: BoundaryLaw, i: int) -> float:
    i = int(i)
    if law.kind == "custom":
        if law.log_generator is not None:
            return float(law.log_generator(i))
        v = law.generator(i)
        if not v > 0:
            raise ValueError(f"custom generator returned non-positive z_{i} = {v}")
        return math.log(v)
    if i == 0:
        return 0.0
    lt = math.log(law.theta)
    lh = law.field.log_at(i) - law.field.log_at(0)
    if law.kind == "left_infinite":
        return lh + i * law.k * lt
    if law.kind == "right_infinite":
        return lh - i * law.k * lt
    mix = float(np.logaddexp(i * lt, math.log(law.rho) - i * lt))
    return lh + law.k * (mix - math.log1p(law.rho))


def log_z_array(law: BoundaryLaw, idx: Sequence[int]) -> np.ndarray:
    return np.array([log_z(law, i) for i in idx], dtype=float)


def z_value(law: BoundaryLaw, i: int) -> float:
    lz = log_z(law, i)
    if lz > LOG_MAX:
        raise OverflowError(f"z_{i} = exp({lz:.1f}) is not representable; use log_z")
    return math.exp(lz)


def verify_solution_ratio(law: BoundaryLaw, i: int, trunc_n: int) -> Tuple[float, float]:
    """Truncate both sums at |j| <= trunc_n and compare the right-hand side with z_i.

    Returns ``(residual, ratio)`` where ``ratio`` is the truncated quotient
    R_N(i) and ``residual = |h(i)/h(0) R_N(i)^k - z_i| / z_i``.
    """
    if trunc_n < 10:
        raise ValueError("trunc_n must be >= 10")
    i = int(i)
    js = np.concatenate([np.arange(-trunc_n, 0), np.arange(1, trunc_n + 1)])
    lz = log_z_array(law, js)
    lt = math.log(law.theta)
    num = _lse(np.concatenate([[abs(i) * lt], np.abs(i - js) * lt + lz]))
    den = _lse(np.concatenate([[0.0], np.abs(js) * lt + lz]))
    log_ratio = num - den
    lh = law.field.log_at(i) - law.field.log_at(0)
    rel = lh + law.k * log_ratio - log_z(law, i)
    return abs(math.expm1(rel)), math.exp(log_ratio)


# ---------------------------------------------------------------------------
# series verdicts


class Status(str, Enum):
    CONVERGES = "Converges"
    DIVERGES = "Diverges"
    INCONCLUSIVE = "Inconclusive"


class Method(str, Enum):
    GEOMETRIC_RATIO = "GeometricRatio"
    PARTIAL_SUM = "PartialSumHeuristic"


@dataclass(frozen=True)
class SeriesVerdict:
    status: Status
    value: Optional[float]
    terms_used: int
    method: Method

    @property
    def converges(self) -> bool:
        return self.status is Status.CONVERGES

    @property
    def diverges(self) -> bool:
        return self.status is Status.DIVERGES


def verdict_from_log_terms(log_terms) -> SeriesVerdict:
    """Certificate-based verdict for a positive series given as log terms.

    Converges only if the last CERT_RUN term ratios all stay below
    1 - 1e-6; diverges if they all stay at or above 1 - 1e-9 or the partial
    sum passes 1e12. Anything else is inconclusive.
    """
    lt = np.asarray(log_terms, dtype=float)
    n = lt.size
    partial = np.logaddexp.accumulate(lt)
    if partial[-1] > math.log(DIVERGE_SUM):
        return SeriesVerdict(Status.DIVERGES, None, n, Method.PARTIAL_SUM)
    if n <= CERT_RUN:
        return SeriesVerdict(Status.INCONCLUSIVE, None, n, Method.PARTIAL_SUM)
    d = np.diff(lt)[-CERT_RUN:]
    if np.all(d >= math.log(DIVERGE_RATIO)):
        return SeriesVerdict(Status.DIVERGES, None, n, Method.PARTIAL_SUM)
    if np.all(d < math.log(CONVERGE_RATIO)):
        q = math.exp(d[-1])
        tail = math.exp(lt[-1]) * q / (1 - q)
        return SeriesVerdict(Status.CONVERGES, math.exp(partial[-1]) + tail, n, Method.PARTIAL_SUM)
    return SeriesVerdict(Status.INCONCLUSIVE, None, n, Method.PARTIAL_SUM)


def _heuristic_terms(field: Field, theta: float, m: float, side: str, n_terms: int) -> np.ndarray:
    sign = -1 if side == "left" else 1
    lt = math.log(theta)
    j = np.arange(1, n_terms + 1)
    return m * j * lt + np.array([field.log_at(sign * int(jj)) for jj in j])


def tail_series_verdict(field: Field, theta: float, exponent_m: float, side: str,
                        method: str = "auto", n_terms: Optional[int] = None) -> SeriesVerdict:
    """Convergence of sum_{j>=1} theta^(m j) h(-+j); ``side`` is "left" (h(-j)) or "right".

    Geometric tails are decided exactly by the per-term ratio; ratio one
    diverges because the terms are then constant. Other fields fall back to
    :func:`verdict_from_log_terms`.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    tail = field.geometric_tail(side)
    if tail is not None and method in ("auto", "geometric"):
        c, r = tail
        log_q = exponent_m * math.log(theta) + math.log(r)
        if log_q < -UNIT_RATIO_LOG_TOL:
            q = math.exp(log_q)
            return SeriesVerdict(Status.CONVERGES, c * q / (1 - q), 0, Method.GEOMETRIC_RATIO)
        return SeriesVerdict(Status.DIVERGES, None, 0, Method.GEOMETRIC_RATIO)
    if method == "geometric":
        raise ValueError("field has no geometric tail on this side")
    if n_terms is None:
        reach = max((abs(j) for j, _ in field.table), default=0)
        n_terms = max(1000, reach + 200)
    return verdict_from_log_terms(_heuristic_terms(field, theta, exponent_m, side, n_terms))


@dataclass(frozen=True)
class SclScr:
    scl_holds: bool
    scl_witness: Optional[int]
    scr_holds: bool
    scr_witness: Optional[int]
    scl_all: Tuple[int, ...] = ()
    scr_all: Tuple[int, ...] = ()


def scl_scr_check(field: Field, theta: float, k: int) -> SclScr:
    """Binomial reductions of the two-sided divergence conditions.

    scl: sum theta^(-j(k-2s-1)) h(-j) diverges for some s in 0..k.
    scr: sum theta^(j(k-2t+1)) h(j) diverges for some t in 0..k.
    The witness is the smallest index that works.
    """
    left = tuple(s for s in range(k + 1)
                 if tail_series_verdict(field, theta, -(k - 2 * s - 1), "left").diverges)
    right = tuple(t for t in range(k + 1)
                  if tail_series_verdict(field, theta, k - 2 * t + 1, "right").diverges)
    return SclScr(bool(left), left[0] if left else None,
                  bool(right), right[0] if right else None, left, right)


def tau_log_sums(field: Field, theta: float, k: int, rho: float, trunc_n: int) -> Tuple[float, float]:
    """log A_N(rho), log B_N(rho) with

    A_N = sum_{j=1}^N theta^j (theta^j + theta^-j rho)^k h(j),
    B_N = sum_{j=1}^N theta^j (theta^-j + theta^j rho)^k h(-j).
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    if trunc_n < 1:
        raise ValueError("trunc_n must be >= 1")
    lt = math.log(theta)
    lr = math.log(rho)
    j = np.arange(1, trunc_n + 1, dtype=float)
    hr = np.array([field.log_at(int(x)) for x in j])
    hl = np.array([field.log_at(-int(x)) for x in j])
    a = j * lt + k * np.logaddexp(j * lt, lr - j * lt) + hr
    b = j * lt + k * np.logaddexp(-j * lt, lr + j * lt) + hl
    return _lse(a), _lse(b)


def rho_residual(field: Field, theta: float, k: int, rho: float, trunc_n: int) -> float:
    """A_N(rho)/B_N(rho) - rho, both sums truncated at the same N."""
    la, lb = tau_log_sums(field, theta, k, rho, trunc_n)
    if lb < math.log(1e-300):
        raise DenominatorUnderflow(f"B_N = exp({lb:.1f}) underflows")
    return math.exp(la - lb) - rho


# ---------------------------------------------------------------------------
# transfer operator and cylinder measures


def log_transfer_q(k: int, theta: float, field: Field, i: int, j: int) -> float:
    return abs(i - j) * math.log(theta) + (field.log_at(i) + field.log_at(j)) / (k + 1)


def transfer_q(k: int, theta: float, field: Field, i: int, j: int) -> float:
    """theta^|i-j| (h(i) h(j))^(1/(k+1))."""
    return theta ** abs(i - j) * (field.at(i) * field.at(j)) ** (1.0 / (k + 1))


@dataclass(frozen=True)
class CayleySubtree:
    """Ball of radius ``depth`` around a root in the tree where every vertex has k+1 neighbours.

    Vertices are numbered breadth-first from the root (0).
    """

    k: int
    depth: int
    parent: Tuple[int, ...]
    level: Tuple[int, ...]

    @classmethod
    def build(cls, k: int, depth: int) -> "CayleySubtree":
        if k < 1 or depth < 1:
            raise ValueError("need k >= 1 and depth >= 1")
        parent, level = [-1], [0]
        frontier = [0]
        for d in range(1, depth + 1):
            nxt = []
            for v in frontier:
                for _ in range(k + 1 if v == 0 else k):
                    parent.append(v)
                    level.append(d)
                    nxt.append(len(parent) - 1)
            frontier = nxt
        return cls(k, depth, tuple(parent), tuple(level))

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]

    @property
    def boundary(self) -> List[int]:
        return [v for v, d in enumerate(self.level) if d == self.depth]

    @property
    def interior(self) -> List[int]:
        return [v for v, d in enumerate(self.level) if d < self.depth]

    def expected_size(self) -> int:
        k, d = self.k, self.depth
        return 1 + (k + 1) * (k ** d - 1) // (k - 1) if k > 1 else 1 + 2 * d

    def children(self, v: int) -> List[int]:
        return [u for u, p in enumerate(self.parent) if p == v]


def log_boundary_weight(law: BoundaryLaw, i: int, unsimplified: bool = False) -> float:
    """log l(i): z_i by default, z_i / h(i) for the unsimplified coordinates."""
    lz = log_z(law, i)
    return lz - law.field.log_at(i) if unsimplified else lz


def cylinder_log_measure(tree: CayleySubtree, law: BoundaryLaw, config,
                         field: Optional[Field] = None, unsimplified: bool = False) -> float:
    """log of prod_{y on the sphere} l(w_y) * prod_{edges} Q(w_b).

    ``config`` maps every vertex index to an integer height (a sequence in
    vertex order or a dict). ``field`` sets the transfer operator and
    defaults to the law's own field.
    """
    q_field = field or law.field
    spins = [int(config[v]) for v in range(tree.n_vertices)]
    total = 0.0
    for y in tree.boundary:
        total += log_boundary_weight(law, spins[y], unsimplified)
    for p, v in tree.edges:
        total += log_transfer_q(law.k, law.theta, q_field, spins[p], spins[v])
    if not math.isfinite(total):
        raise SpinOutOfRange("log-measure is not finite for this configuration")
    return total


# ---------------------------------------------------------------------------
# normalisability


def _asymptotic_slopes(law: BoundaryLaw, q_field: Field, unsimplified: bool) -> Optional[Dict[str, float]]:
    """Per-unit-|i| growth rates of log l(i) on each side, or None if not closed form."""
    if law.kind == "custom":
        return None
    tails = {s: law.field.geometric_tail(s) for s in ("left", "right")}
    q_tails = {s: q_field.geometric_tail(s) for s in ("left", "right")}
    if None in tails.values() or None in q_tails.values():
        return None
    lt = math.log(law.theta)
    out = {}
    for side, sgn in (("left", -1), ("right", 1)):
        lr = math.log(tails[side][1])
        if law.kind == "left_infinite":
            s = lr + sgn * law.k * lt
        elif law.kind == "right_infinite":
            s = lr - sgn * law.k * lt
        else:
            s = lr + law.k * abs(lt)
        out[side] = s - lr if unsimplified else s
    return out


def normalisability_check(law: BoundaryLaw, trunc_n: int, field: Optional[Field] = None,
                          unsimplified: bool = False, method: str = "auto") -> SeriesVerdict:
    """Verdict on sum_i (sum_j Q(i,j) l(j))^(k+1).

    For the closed-form laws over geometric fields the growth rate of every
    summand is known exactly: with w(j) = h(j)^(1/(k+1)) l(j) growing like
    exp(omega |j|) and Q contributing theta^|i-j|, the inner sum is finite
    iff log(theta) + omega < 0 on both sides, and it then grows like
    exp(max(log theta, omega) |i|). The outer summand's rate follows.
    """
    if trunc_n < 10:
        raise ValueError("trunc_n must be >= 10")
    q_field = field or law.field
    slopes = _asymptotic_slopes(law, q_field, unsimplified) if method == "auto" else None
    if slopes is not None:
        lt = math.log(law.theta)
        k1 = law.k + 1
        outer = []
        for side in ("left", "right"):
            lr = math.log(q_field.geometric_tail(side)[1])
            omega = slopes[side] + lr / k1
            if lt + omega >= -UNIT_RATIO_LOG_TOL:
                return SeriesVerdict(Status.DIVERGES, None, 0, Method.GEOMETRIC_RATIO)
            outer.append(lr + k1 * max(lt, omega))
        if max(outer) >= -UNIT_RATIO_LOG_TOL:
            return SeriesVerdict(Status.DIVERGES, None, 0, Method.GEOMETRIC_RATIO)
        numeric = _normalisability_numeric(law, q_field, trunc_n, unsimplified)
        return SeriesVerdict(Status.CONVERGES, numeric.value, 0, Method.GEOMETRIC_RATIO)
    return _normalisability_numeric(law, q_field, trunc_n, unsimplified)


def _normalisability_numeric(law: BoundaryLaw, q_field: Field, trunc_n: int,
                             unsimplified: bool) -> SeriesVerdict:
    n = trunc_n
    m = 2 * n
    lt = math.log(law.theta)
    k1 = law.k + 1
    js = np.arange(-m, m + 1)
    log_h = np.array([q_field.log_at(int(j)) for j in js])
    log_l = np.array([log_boundary_weight(law, int(j), unsimplified) for j in js])
    log_w = log_h / k1 + log_l

    # inner sum at i = 0 must itself converge on both sides
    inner0 = np.abs(js) * lt + log_w
    for tail in (inner0[m + 1:], inner0[:m][::-1]):
        v = verdict_from_log_terms(tail)
        if v.status is not Status.CONVERGES:
            return SeriesVerdict(v.status, None, v.terms_used, Method.PARTIAL_SUM)

    iis = np.arange(-n, n + 1)
    inner = np.logaddexp.reduce(np.abs(iis[:, None] - js[None, :]) * lt + log_w[None, :], axis=1)
    log_t = k1 * (log_h[m - n: m + n + 1] / k1 + inner)
    sides = [verdict_from_log_terms(log_t[n + 1:]), verdict_from_log_terms(log_t[:n][::-1])]
    if any(v.diverges for v in sides):
        return SeriesVerdict(Status.DIVERGES, None, 2 * n + 1, Method.PARTIAL_SUM)
    if all(v.converges for v in sides):
        total = math.exp(log_t[n]) + sides[0].value + sides[1].value
        return SeriesVerdict(Status.CONVERGES, total, 2 * n + 1, Method.PARTIAL_SUM)
    return SeriesVerdict(Status.INCONCLUSIVE, None, 2 * n + 1, Method.PARTIAL_SUM)


# ---------------------------------------------------------------------------
# condition matrix for a named law


def law_conditions(law: BoundaryLaw, trunc_n: int = 400) -> dict:
    """The series conditions a named law needs, each with its verdict.

    Returns a dict with one entry per condition (``required`` and
    ``verdict``) plus ``valid``.
    """
    f, t, k = law.field, law.theta, law.k
    conds = {}
    if law.kind == "left_infinite":
        conds["lin"] = ("Diverges", tail_series_verdict(f, t, -(k - 1), "left"))
        conds["rfi"] = ("Converges", tail_series_verdict(f, t, k + 1, "right"))
    elif law.kind == "right_infinite":
        conds["lfi"] = ("Converges", tail_series_verdict(f, t, k + 1, "left"))
        conds["rin"] = ("Diverges", tail_series_verdict(f, t, -(k - 1), "right"))
    elif law.kind == "both_infinite":
        sc = scl_scr_check(f, t, k)
        res = rho_residual(f, t, k, law.rho, trunc_n)
        out = {
            "scl": {"holds": sc.scl_holds, "witness": sc.scl_witness},
            "scr": {"holds": sc.scr_holds, "witness": sc.scr_witness},
            "tau_residual": res,
        }
        out["valid"] = bool(sc.scl_holds and sc.scr_holds and abs(res) < 1e-9)
        return out
    else:
        return {"valid": None}
    out = {name: {"required": req, "verdict": v.status.value, "value": v.value,
                  "method": v.method.value}
           for name, (req, v) in conds.items()}
    out["valid"] = all(v.status.value == req for req, v in conds.values())
    return out
