"""Membership functions, t-norms, t-conorms and OWA aggregation."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError

#: Tolerance used by every degree comparison in the selection logic.
TOL = 1e-9


@dataclass(frozen=True)
class MembershipFunction:
    """Trapezoid with breakpoints ``a <= b <= c <= d``.

    Membership is 1 on the closed core ``[b, c]`` and 0 outside the open
    support ``(a, d)``. A vertical edge (``a == b`` or ``c == d``) is a
    crisp jump, so the shared breakpoint belongs to the core.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        values = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"trapezoid breakpoints must be finite: {values}")
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid breakpoints must satisfy a <= b <= c <= d: {values}")

    @classmethod
    def triangle(cls, a: float, peak: float, d: float) -> "MembershipFunction":
        return cls(a, peak, peak, d)

    @classmethod
    def crisp(cls, lo: float, hi: float) -> "MembershipFunction":
        return cls(lo, lo, hi, hi)

    @property
    def core(self) -> tuple[float, float]:
        return (self.b, self.c)

    def __call__(self, x: float) -> float:
        return evaluate_membership(self, x)

    def as_list(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]


def evaluate_membership(f: MembershipFunction, x: float) -> float:
    if f.b <= x <= f.c:
        return 1.0
    if f.a < x < f.b:
        return (x - f.a) / (f.b - f.a)
    if f.c < x < f.d:
        return (f.d - x) / (f.d - f.c)
    return 0.0


class Tnorm(str, enum.Enum):
    MINIMUM = "minimum"
    PRODUCT = "product"
    LUKASIEWICZ = "lukasiewicz"


class Tconorm(str, enum.Enum):
    MAXIMUM = "maximum"
    PROBABILISTIC_SUM = "probabilistic-sum"
    BOUNDED_SUM = "bounded-sum"


def _check_degree(*values: float) -> None:
    for v in values:
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"degree outside [0, 1]: {v!r}")


def tnorm_apply(op: Tnorm | str, x: float, y: float) -> float:
    _check_degree(x, y)
    op = Tnorm(op)
    if op is Tnorm.MINIMUM:
        return min(x, y)
    if op is Tnorm.PRODUCT:
        return x * y
    # Written so that T(x, 1) == x holds exactly in floating point;
    # sorting the arguments keeps the rounding symmetric.
    lo, hi = sorted((x, y))
    return max(0.0, lo - (1.0 - hi))


def tconorm_apply(op: Tconorm | str, x: float, y: float) -> float:
    _check_degree(x, y)
    op = Tconorm(op)
    if op is Tconorm.MAXIMUM:
        return max(x, y)
    if op is Tconorm.PROBABILISTIC_SUM:
        # Exact at both boundaries: S(x, 0) == x and S(x, 1) == 1.
        lo, hi = sorted((x, y))
        return hi + lo * (1.0 - hi)
    return min(1.0, x + y)


@dataclass(frozen=True)
class OwaWeights:
    """Ordered weighted averaging weights; non-negative and summing to 1."""

    w: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(float(v) for v in self.w))
        if not self.w:
            raise ValueError("OWA weight vector is empty")
        if any(v < 0 or not math.isfinite(v) for v in self.w):
            raise ValueError(f"OWA weights must be finite and non-negative: {self.w}")
        if abs(math.fsum(self.w) - 1.0) > TOL:
            raise ValueError(f"OWA weights must sum to 1, got {math.fsum(self.w)!r}")

    def __len__(self) -> int:
        return len(self.w)

    @classmethod
    def uniform(cls, n: int) -> "OwaWeights":
        return cls((1.0 / n,) * n)


def owa_aggregate(w: OwaWeights, values: Sequence[float]) -> float:
    if len(w) != len(values):
        raise ValueError(f"OWA length mismatch: {len(w)} weights for {len(values)} values")
    _check_degree(*values)
    ordered = sorted(values, reverse=True)
    total = math.fsum(wi * vi for wi, vi in zip(w.w, ordered))
    # Rounding can push the sum a hair outside [min, max].
    return min(max(total, ordered[-1]), ordered[0])
