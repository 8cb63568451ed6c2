"""External-field weights h(j) = exp(Phi(j)) on the integers.

A :class:`Field` stores raw weights plus a normalization tag. Two
normalizations are in use and they are not interchangeable:

* ``"probability"`` -- weights sum to one over Z. The boundary-law
  formulas assume this.
* ``"unit_at_zero"`` -- h(0) is pinned to 1 and every other weight is left
  as given. The difference equation assumes this, so a constant field
  ``Field.constant(1.05)`` becomes h(0) = 1, h(n != 0) = 1.05.
* ``"raw"`` -- weights exactly as constructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from typing import Mapping, Optional, Tuple

from .errors import InvalidFieldSpec

NORMALIZATIONS = ("raw", "probability", "unit_at_zero")
KINDS = ("constant", "geometric_normalized", "geometric_family", "table")


@dataclass(frozen=True)
class Field:
    kind: str
    h: float = 1.0
    theta: float = 0.0
    c: float = 1.0
    base: float = 1.0
    alpha: float = 0.0
    table: Tuple[Tuple[int, float], ...] = ()
    default: float = 0.0
    normalization: str = "raw"
    _lookup: Mapping[int, float] = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidFieldSpec(f"unknown field kind {self.kind!r}")
        if self.normalization not in NORMALIZATIONS:
            raise InvalidFieldSpec(f"unknown normalization {self.normalization!r}")
        if self.kind == "constant" and not self.h > 0:
            raise InvalidFieldSpec("constant field needs h > 0")
        if self.kind == "geometric_normalized" and not 0 < self.theta < 1:
            raise InvalidFieldSpec("geometric_normalized needs theta in (0, 1)")
        if self.kind == "geometric_family" and not (self.c > 0 and self.base > 0):
            raise InvalidFieldSpec("geometric_family needs c > 0 and base > 0")
        if self.kind == "table":
            if any(not v > 0 for _, v in self.table):
                raise InvalidFieldSpec("table weights must be positive")
            if self.default < 0:
                raise InvalidFieldSpec("table default must be non-negative")
            object.__setattr__(self, "_lookup", dict(self.table))
        if self.normalization == "probability":
            self._total()  # raises on infinite mass

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, h: float, normalization: str = "raw") -> "Field":
        return cls("constant", h=float(h), normalization=normalization)

    @classmethod
    def geometric_normalized(cls, theta: float) -> "Field":
        """h(j) = (1 - theta)/(1 + theta) * theta**|j|, a probability on Z."""
        return cls("geometric_normalized", theta=float(theta), normalization="probability")

    @classmethod
    def geometric_family(cls, c: float, base: float, alpha: float,
                         normalization: str = "raw") -> "Field":
        """h(j) = c * base**(alpha*|j|)."""
        return cls("geometric_family", c=float(c), base=float(base), alpha=float(alpha),
                   normalization=normalization)

    @classmethod
    def steep(cls, theta: float, k: int) -> "Field":
        """Probability field (theta^(k+2)-1)/(theta^(k+2)+1) * theta^(-|j|(k+2)), theta > 1."""
        if not theta > 1:
            raise InvalidFieldSpec("steep field needs theta > 1")
        q = theta ** (k + 2)
        return cls.geometric_family((q - 1) / (q + 1), theta, -(k + 2), normalization="probability")

    @classmethod
    def from_table(cls, values: Mapping[int, float], default: float = 0.0,
                   normalization: str = "raw") -> "Field":
        items = tuple(sorted((int(j), float(v)) for j, v in values.items()))
        return cls("table", table=items, default=float(default), normalization=normalization)

    def normalized(self, normalization: str) -> "Field":
        return replace(self, normalization=normalization)

    # -- evaluation ---------------------------------------------------

    def raw(self, j: int) -> float:
        j = int(j)
        if self.kind == "constant":
            return self.h
        if self.kind == "geometric_normalized":
            return (1 - self.theta) / (1 + self.theta) * self.theta ** abs(j)
        if self.kind == "geometric_family":
            return self.c * self.base ** (self.alpha * abs(j))
        return self._lookup.get(j, self.default)

    def log_raw(self, j: int) -> float:
        j = int(j)
        if self.kind == "constant":
            return math.log(self.h)
        if self.kind == "geometric_normalized":
            t = self.theta
            return math.log((1 - t) / (1 + t)) + abs(j) * math.log(t)
        if self.kind == "geometric_family":
            return math.log(self.c) + self.alpha * abs(j) * math.log(self.base)
        v = self._lookup.get(j, self.default)
        return math.log(v) if v > 0 else -math.inf

    def _total(self) -> float:
        if self.kind == "geometric_normalized":
            return 1.0
        if self.kind == "constant":
            raise InvalidFieldSpec("a constant field has infinite mass")
        if self.kind == "geometric_family":
            r = self.base ** self.alpha
            if not r < 1:
                raise InvalidFieldSpec("geometric_family with base**alpha >= 1 has infinite mass")
            return self.c * (1 + r) / (1 - r)
        if self.default > 0:
            raise InvalidFieldSpec("table with positive default has infinite mass")
        return math.fsum(v for _, v in self.table)

    def _scale(self) -> float:
        if self.normalization == "probability" and self.kind != "geometric_normalized":
            return 1.0 / self._total()
        return 1.0

    def at(self, j: int) -> float:
        """Weight h(j) under this field's normalization."""
        if self.normalization == "unit_at_zero" and int(j) == 0:
            return 1.0
        return self.raw(j) * self._scale()

    def log_at(self, j: int) -> float:
        if self.normalization == "unit_at_zero" and int(j) == 0:
            return 0.0
        s = self._scale()
        return self.log_raw(j) + (math.log(s) if s != 1.0 else 0.0)

    # -- structure ----------------------------------------------------

    def is_symmetric(self) -> bool:
        if self.kind != "table":
            return True
        return all(self._lookup.get(-j, self.default) == v for j, v in self.table)

    def geometric_tail(self, side: str) -> Optional[Tuple[float, float]]:
        """``(c, r)`` with h(+-j) = c * r**j for every j >= 1, or None.

        ``side`` is ``"left"`` (negative heights) or ``"right"``.
        """
        s = self._scale()
        if self.kind == "constant":
            return self.h * s, 1.0
        if self.kind == "geometric_normalized":
            t = self.theta
            return (1 - t) / (1 + t), t
        if self.kind == "geometric_family":
            return self.c * s, self.base ** self.alpha
        sign = -1 if side == "left" else 1
        if self.default <= 0 or any(sign * j > 0 and v != self.default for j, v in self.table):
            return None
        return self.default * s, 1.0

    def bulk_constant(self) -> Optional[float]:
        """The common value of h(n) for n >= 1 if there is one."""
        tail = self.geometric_tail("right")
        if tail is not None and tail[1] == 1.0:
            return tail[0]
        return None

    def describe(self) -> dict:
        d = {"kind": self.kind, "normalization": self.normalization}
        if self.kind == "constant":
            d["h"] = self.h
        elif self.kind == "geometric_normalized":
            d["theta"] = self.theta
        elif self.kind == "geometric_family":
            d.update(c=self.c, base=self.base, alpha=self.alpha)
        else:
            d["table"] = {str(j): v for j, v in self.table}
            d["default"] = self.default
        return d
