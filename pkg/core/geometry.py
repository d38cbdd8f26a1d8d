#!/usr/bin/env python3
"""
Exact Minkowski and Euclidean predicates over rational coordinates.

All decisions are made on Fractions; square roots never enter an ordering
decision except through QuadraticSurd, which compares q + sqrt(r) values
exactly.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Tuple, Union

from config.settings import UP_PRECISION_BITS
from core.errors import DomainError

RationalLike = Union[Fraction, int, str]

_RATIONAL_PATTERN = re.compile(r"[+-]?\d+(/\d+)?")


def to_rational(value: RationalLike) -> Fraction:
    """
    Coerce an int, Fraction or "p/q" literal into a Fraction.

    Args:
        value: Integer, Fraction or decimal-free rational literal

    Returns:
        The exact rational value

    Raises:
        ValueError: If a string is not a "p/q" literal or has a zero denominator
        TypeError: For floats and other types
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_PATTERN.fullmatch(text):
            raise ValueError(f"Not a rational literal: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"Zero denominator in {value!r}")
    raise TypeError(f"Unsupported coordinate type: {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Render a rational as a decimal-free "p/q" (or "p") string."""
    return str(Fraction(value))


@dataclass(frozen=True, order=True)
class Point4:
    """A point of R^4: time coordinate t and spatial coordinates x1, x2, x3."""

    t: Fraction
    x1: Fraction = Fraction(0)
    x2: Fraction = Fraction(0)
    x3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("t", "x1", "x2", "x3"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))

    @classmethod
    def parse(cls, text: str) -> "Point4":
        """
        Parse "t,x1,x2,x3" (or the 2D shorthand "t,x1").

        Raises:
            ValueError: On a wrong coordinate count or a bad literal
        """
        parts = [part.strip() for part in str(text).strip().strip("()").split(",")]
        if len(parts) not in (2, 4):
            raise ValueError(f"Expected 2 or 4 coordinates, got {len(parts)} in {text!r}")
        return cls(*(to_rational(part) for part in parts))

    @classmethod
    def origin(cls) -> "Point4":
        return cls(Fraction(0))

    @property
    def coords(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.t, self.x1, self.x2, self.x3)

    @property
    def spatial(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.x1, self.x2, self.x3)

    @property
    def is_2d(self) -> bool:
        """True when the point lies in the embedded plane x2 = x3 = 0."""
        return self.x2 == 0 and self.x3 == 0

    def __add__(self, other: "Point4") -> "Point4":
        return Point4(*(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point4") -> "Point4":
        return Point4(*(a - b for a, b in zip(self.coords, other.coords)))

    def scaled(self, factor: RationalLike) -> "Point4":
        k = to_rational(factor)
        return Point4(*(k * c for c in self.coords))

    def shifted(self, dt: RationalLike) -> "Point4":
        """Move the point along the time axis."""
        return Point4(self.t + to_rational(dt), self.x1, self.x2, self.x3)

    def to_text(self) -> str:
        return ",".join(format_rational(c) for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(c) for c in self.coords) + ")"


class IntervalKind(Enum):
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"
    SPACE_LIKE = "space-like"


@dataclass(frozen=True)
class Interval:
    """Signed Lorentz interval -(dt)^2 + |dx|^2."""

    value: Fraction

    @property
    def kind(self) -> IntervalKind:
        if self.value < 0:
            return IntervalKind.TIME_LIKE
        if self.value == 0:
            return IntervalKind.LIGHT_LIKE
        return IntervalKind.SPACE_LIKE


def minkowski_product(u: Point4, v: Point4) -> Fraction:
    """Bilinear form with signature (-, +, +, +) on difference vectors."""
    return -u.t * v.t + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3


def lorentz_interval(x: Point4, y: Point4) -> Interval:
    d = x - y
    return Interval(minkowski_product(d, d))


def interval_kind(x: Point4, y: Point4) -> IntervalKind:
    return lorentz_interval(x, y).kind


def leq_M(x: Point4, y: Point4) -> bool:
    """x lies in the closed past light cone of y."""
    return lorentz_interval(x, y).value <= 0 and x.t <= y.t


def lt_M(x: Point4, y: Point4) -> bool:
    return x != y and leq_M(x, y)


def slr_M(x: Point4, y: Point4) -> bool:
    """Space-like relatedness: neither point precedes the other."""
    return not leq_M(x, y) and not leq_M(y, x)


def spatial_dist_sq(x: Point4, y: Point4) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(x.spatial, y.spatial)), Fraction(0))


def euclid_dist_sq(x: Point4, y: Point4) -> Fraction:
    return (x.t - y.t) ** 2 + spatial_dist_sq(x, y)


def spatial_norm_sq(v: Point4) -> Fraction:
    return v.x1 ** 2 + v.x2 ** 2 + v.x3 ** 2


def rational_sqrt(value: Fraction):
    """Return the exact rational square root of value, or None if irrational."""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt_upper_bound(value: Fraction, bits: int = UP_PRECISION_BITS) -> Fraction:
    """
    Smallest multiple of 2**-bits whose square is at least value.

    Perfect rational squares are returned exactly.

    Raises:
        DomainError: If value is negative
    """
    value = Fraction(value)
    if value < 0:
        raise DomainError(f"Square root of negative value {value}")
    exact = rational_sqrt(value)
    if exact is not None:
        return exact
    scale = 1 << bits
    scaled = value * scale * scale
    k = math.isqrt(math.ceil(scaled))
    if k * k < scaled:
        k += 1
    return Fraction(k, scale)


def up(a: Point4, b: Point4) -> Point4:
    """
    Lift a along the time axis far enough to dominate b.

    Args:
        a: Base point (its spatial coordinates are kept)
        b: Point that must end up below the result

    Returns:
        <a.t + r, a.x1, a.x2, a.x3> with r an upper bound of the spatial distance

    Raises:
        DomainError: If b is later than a
    """
    if a.t < b.t:
        raise DomainError(f"up() needs a.t >= b.t, got {a} and {b}")
    r = sqrt_upper_bound(spatial_dist_sq(a, b))
    return Point4(a.t + r, a.x1, a.x2, a.x3)


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def sign_linear_surd(p: Fraction, c: Fraction, r: Fraction) -> int:
    """Exact sign of p + c * sqrt(r) for r >= 0."""
    if r == 0 or c == 0:
        return _sign(p)
    sc = _sign(c)
    if p == 0 or _sign(p) == sc:
        return sc
    gap = p * p - c * c * r
    if gap > 0:
        return _sign(p)
    if gap < 0:
        return sc
    return 0


@total_ordering
@dataclass(frozen=True)
class QuadraticSurd:
    """Exact real base + sqrt(radicand), radicand >= 0; perfect squares fold into base."""

    base: Fraction
    radicand: Fraction = Fraction(0)

    def __post_init__(self):
        base, radicand = to_rational(self.base), to_rational(self.radicand)
        if radicand < 0:
            raise DomainError(f"Negative radicand {radicand}")
        root = rational_sqrt(radicand)
        if root is not None:
            base, radicand = base + root, Fraction(0)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "radicand", radicand)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 0

    def compare(self, other: "QuadraticSurd") -> int:
        d = self.base - other.base
        r1, r2 = self.radicand, other.radicand
        if r2 == 0:
            return sign_linear_surd(d, Fraction(1), r1)
        if sign_linear_surd(d, Fraction(1), r1) <= 0:
            return -1
        return sign_linear_surd(d * d + r1 - r2, 2 * d, r1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticSurd):
            return NotImplemented
        return self.base == other.base and self.radicand == other.radicand

    def __hash__(self) -> int:
        return hash((self.base, self.radicand))

    def __lt__(self, other: "QuadraticSurd") -> bool:
        return self.compare(other) < 0

    def approx(self) -> float:
        return float(self.base) + math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.is_rational:
            return format_rational(self.base)
        if self.base == 0:
            return f"sqrt({format_rational(self.radicand)})"
        return f"{format_rational(self.base)} + sqrt({format_rational(self.radicand)})"


def vertical_threshold(base: Point4, target: Point4) -> QuadraticSurd:
    """Least time shift s with target <=_M base.shifted(s)."""
    return QuadraticSurd(target.t - base.t, spatial_dist_sq(base, target))


def pairwise_slr(points: Iterable[Point4]) -> bool:
    pts = list(points)
    return all(slr_M(p, q) for i, p in enumerate(pts) for q in pts[i + 1:])
