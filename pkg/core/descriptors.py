#!/usr/bin/env python3
"""
Symbolic descriptors of omega-indexed point sequences.

A descriptor answers, exactly, which of its members lie below a given point.
Every answer is an IndexSet: a finite set of indices plus an optional
cofinite tail. Tails are found from the eventual sign of the polynomial that
the Lorentz interval becomes along the sequence.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from config.settings import (
    SAMPLE_LIMIT, WRAPPED_DENOMINATOR_LIMIT, WRAPPED_FLOAT_INDEX_LIMIT
)
from core.errors import DomainError, GenerationError, ModelParseError, UnsupportedError
from core.geometry import (
    Point4, euclid_dist_sq, format_rational, leq_M, minkowski_product, sqrt_upper_bound,
    pairwise_slr, slr_M, to_rational, vertical_threshold
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndexSet:
    """The indices in `finite` together with every index >= `tail_from`."""

    finite: FrozenSet[int] = frozenset()
    tail_from: Optional[int] = None

    def __post_init__(self):
        finite = frozenset(self.finite)
        if self.tail_from is not None:
            finite = frozenset(n for n in finite if n < self.tail_from)
        object.__setattr__(self, "finite", finite)

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls()

    @property
    def is_empty(self) -> bool:
        return not self.finite and self.tail_from is None

    @property
    def is_finite(self) -> bool:
        return self.tail_from is None

    def __contains__(self, n: int) -> bool:
        return n in self.finite or (self.tail_from is not None and n >= self.tail_from)

    def union(self, other: "IndexSet") -> "IndexSet":
        tails = [t for t in (self.tail_from, other.tail_from) if t is not None]
        return IndexSet(self.finite | other.finite, min(tails) if tails else None)

    def intersection(self, other: "IndexSet") -> "IndexSet":
        if self.tail_from is not None and other.tail_from is not None:
            tail = max(self.tail_from, other.tail_from)
        else:
            tail = None
        finite = frozenset(n for n in self.finite | other.finite if n in self and n in other)
        return IndexSet(finite, tail)

    def without(self, indices: Iterable[int]) -> "IndexSet":
        """Remove finitely many indices; a tail keeps its start but loses them."""
        removed = set(indices)
        if self.tail_from is None:
            return IndexSet(self.finite - removed)
        if not removed or max(removed) < self.tail_from:
            return IndexSet(self.finite - removed, self.tail_from)
        new_from = max(removed) + 1
        kept = set(self.finite) | set(range(self.tail_from, new_from))
        return IndexSet(frozenset(kept - removed), new_from)

    def shifted(self, offset: int) -> "IndexSet":
        tail = None if self.tail_from is None else self.tail_from + offset
        return IndexSet(frozenset(n + offset for n in self.finite), tail)

    def first(self, count: int) -> List[int]:
        """The `count` smallest members."""
        out = sorted(self.finite)[:count]
        n = self.tail_from
        while n is not None and len(out) < count:
            out.append(n)
            n += 1
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {"finite": sorted(self.finite), "tail_from": self.tail_from}

    def __str__(self) -> str:
        parts = [str(n) for n in sorted(self.finite)]
        if self.tail_from is not None:
            parts.append(f"{self.tail_from}..")
        return "{" + ", ".join(parts) + "}"


def _trim(coeffs: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _evaluate(coeffs: Sequence[Fraction], v: int) -> Fraction:
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * v + c
    return total


def eventual_sign(coeffs: Sequence[Fraction]) -> Tuple[int, int]:
    """
    Sign of a polynomial for all large positive arguments.

    Args:
        coeffs: Coefficients, lowest degree first

    Returns:
        (sign, threshold): for every integer v >= threshold the polynomial has this sign
    """
    trimmed = _trim(coeffs)
    if not trimmed:
        return 0, 1
    lead = trimmed[-1]
    rest = sum((abs(c) for c in trimmed[:-1]), Fraction(0))
    threshold = math.floor(rest / abs(lead)) + 1
    return (1 if lead > 0 else -1), max(threshold, 1)


def poly_nonpositive_set(coeffs: Sequence[Fraction], first: int,
                         stop: Optional[int] = None, strict: bool = False) -> IndexSet:
    """Integers v in [first, stop) (unbounded when stop is None) with p(v) <= 0 (< 0 when strict)."""

    def accepted(v: int) -> bool:
        value = _evaluate(coeffs, v)
        return value < 0 if strict else value <= 0

    if stop is not None:
        return IndexSet(frozenset(v for v in range(first, stop) if accepted(v)))
    sign, threshold = eventual_sign(coeffs)
    bound = max(first, threshold)
    finite = frozenset(v for v in range(first, bound) if accepted(v))
    tail = sign < 0 or (sign == 0 and not strict)
    return IndexSet(finite, bound if tail else None)


def euclid_dot(u: Point4, v: Point4) -> Fraction:
    return sum((a * b for a, b in zip(u.coords, v.coords)), Fraction(0))


class PointSequence(ABC):
    """An index-ordered family of points p_start, p_start+1, ..."""

    kind = "abstract"

    def __init__(self, start: int = 0, stop: Optional[int] = None):
        if stop is not None and stop <= start:
            raise DomainError(f"Empty index range [{start}, {stop})")
        self.start = start
        self.stop = stop

    @abstractmethod
    def point(self, n: int) -> Point4:
        """Member with index n."""

    @abstractmethod
    def indices_below(self, x: Point4, strict: bool = False) -> IndexSet:
        """Indices n with p_n <=_M x (p_n <_M x when strict)."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Serializable form, read back by sequence_from_dict."""

    @property
    def is_infinite(self) -> bool:
        return self.stop is None

    def indices(self) -> Iterator[int]:
        n = self.start
        while self.stop is None or n < self.stop:
            yield n
            n += 1

    def check_index(self, n: int):
        if n < self.start or (self.stop is not None and n >= self.stop):
            raise DomainError(f"Index {n} outside [{self.start}, {self.stop})")

    def sample(self, count: int = SAMPLE_LIMIT) -> List[Tuple[int, Point4]]:
        out = []
        for n in self.indices():
            if len(out) >= count:
                break
            out.append((n, self.point(n)))
        return out

    def sample_points(self, count: int = SAMPLE_LIMIT) -> List[Point4]:
        return [p for _, p in self.sample(count)]

    def check_points(self) -> List[Point4]:
        """Every member of a finite sequence, the first SAMPLE_LIMIT of an infinite one."""
        return self.sample_points(self._index_scan_limit())

    def any_below(self, x: Point4, strict: bool = False) -> bool:
        return not self.indices_below(x, strict).is_empty

    def index_of(self, x: Point4) -> Optional[int]:
        """Index of x in the sequence, or None."""
        for n, p in self.sample(self._index_scan_limit()):
            if p == x:
                return n
        return None

    def _index_scan_limit(self) -> int:
        return SAMPLE_LIMIT if self.stop is None else self.stop - self.start

    def _strict(self, result: IndexSet, x: Point4, strict: bool) -> IndexSet:
        if not strict:
            return result
        n = self.index_of(x)
        return result if n is None else result.without([n])

    def is_pairwise_slr(self) -> bool:
        return pairwise_slr(self.check_points())

    def min_gap_sq(self) -> Optional[Fraction]:
        """Positive lower bound of squared Euclidean gaps, None when gaps shrink to 0."""
        pts = self.check_points()
        gaps = [euclid_dist_sq(p, q) for i, p in enumerate(pts) for q in pts[i + 1:]]
        return min(gaps) if gaps else None

    def limit(self) -> Optional[Point4]:
        return None

    def time_bounded(self) -> bool:
        return not self.is_infinite

    def indices_near(self, x: Point4, radius_sq: Any) -> IndexSet:
        """Indices n with Euclidean |p_n - x|^2 < radius_sq."""
        radius_sq = to_rational(radius_sq)
        if self.is_infinite:
            raise UnsupportedError(f"No neighbourhood query for {self.describe()}")
        return IndexSet(frozenset(n for n, p in self.sample(self.stop - self.start)
                                  if euclid_dist_sq(p, x) < radius_sq))

    def cofinite_shift(self, a: Point4) -> Optional[Fraction]:
        """
        Time shift s0 past which a.shifted(s) lies above a cofinite set of members.

        For s < s0 the set below a.shifted(s) is finite; at s0 itself
        indices_below decides. None when no shift ever reaches a cofinite set.
        """
        return None

    def _posc_candidates(self, delta: Fraction) -> List[Point4]:
        return []

    def posc_counterexample(self, delta: Optional[Any] = None) -> Optional[Point4]:
        """
        A point above finitely many members whose time shift by delta is above infinitely many.

        Returns None when the shift property holds for every point.
        """
        if not self.is_infinite:
            return None
        delta = to_rational(delta if delta is not None else 1)
        if delta <= 0:
            raise DomainError(f"Shift must be positive, got {delta}")
        for x in self._posc_candidates(delta):
            if (self.indices_below(x).is_finite
                    and not self.indices_below(x.shifted(delta)).is_finite):
                return x
        return None

    def describe(self) -> str:
        return self.kind


class FinitePoints(PointSequence):
    """An explicit finite list of points indexed from `start`."""

    kind = "finite"

    def __init__(self, points: Sequence[Point4], start: int = 0):
        if not points:
            raise DomainError("A point list needs at least one point")
        super().__init__(start, start + len(points))
        self.points = tuple(points)

    def point(self, n: int) -> Point4:
        self.check_index(n)
        return self.points[n - self.start]

    def indices_below(self, x: Point4, strict: bool = False) -> IndexSet:
        return IndexSet(frozenset(
            self.start + i for i, p in enumerate(self.points)
            if leq_M(p, x) and not (strict and p == x)
        ))

    def index_of(self, x: Point4) -> Optional[int]:
        for i, p in enumerate(self.points):
            if p == x:
                return self.start + i
        return None

    def is_pairwise_slr(self) -> bool:
        return pairwise_slr(self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "start": self.start,
                "points": [p.to_text() for p in self.points]}

    def describe(self) -> str:
        return "{" + ", ".join(str(p) for p in self.points) + "}"


class LinearSequence(PointSequence):
    """p_n = base + (n - start) * step."""

    kind = "linear"

    def __init__(self, base: Point4, step: Point4, start: int = 0, stop: Optional[int] = None):
        super().__init__(start, stop)
        if step == Point4.origin():
            raise DomainError("Linear sequence needs a nonzero step")
        self.base = base
        self.step = step

    def point(self, n: int) -> Point4:
        self.check_index(n)
        return self.base + self.step.scaled(n - self.start)

    def indices_below(self, x: Point4, strict: bool = False) -> IndexSet:
        d = self.base - x
        interval = [minkowski_product(d, d), 2 * minkowski_product(self.step, d),
                    minkowski_product(self.step, self.step)]
        timing = [d.t, self.step.t]
        stop = None if self.stop is None else self.stop - self.start
        found = poly_nonpositive_set(interval, 0, stop).intersection(
            poly_nonpositive_set(timing, 0, stop))
        return self._strict(found.shifted(self.start), x, strict)

    def index_of(self, x: Point4) -> Optional[int]:
        diff = x - self.base
        for a, b in zip(diff.coords, self.step.coords):
            if b != 0:
                m = a / b
                if m.denominator != 1 or m < 0:
                    return None
                n = self.start + int(m)
                if self.stop is not None and n >= self.stop:
                    return None
                return n if self.point(n) == x else None
        return None

    def is_pairwise_slr(self) -> bool:
        return self.stop == self.start + 1 or minkowski_product(self.step, self.step) > 0

    def min_gap_sq(self) -> Optional[Fraction]:
        return euclid_dist_sq(self.step, Point4.origin())

    def time_bounded(self) -> bool:
        return not self.is_infinite or self.step.t == 0

    def indices_near(self, x: Point4, radius_sq: Any) -> IndexSet:
        d = self.base - x
        distance = [euclid_dot(d, d) - to_rational(radius_sq), 2 * euclid_dot(d, self.step),
                    euclid_dot(self.step, self.step)]
        stop = None if self.stop is None else self.stop - self.start
        return poly_nonpositive_set(distance, 0, stop, strict=True).shifted(self.start)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "base": self.base.to_text(), "step": self.step.to_text(),
                "start": self.start, "stop": self.stop}

    def describe(self) -> str:
        return f"{self.base} + (n - {self.start}) * {self.step}"


class HarmonicSequence(PointSequence):
    """p_n = limit + offset / j with j = n - start + first_denominator."""

    kind = "harmonic"

    def __init__(self, limit: Point4, offset: Point4, start: int = 0,
                 first_denominator: int = 1, stop: Optional[int] = None):
        super().__init__(start, stop)
        if first_denominator < 1:
            raise DomainError("Harmonic denominators start at 1 or above")
        if offset == Point4.origin():
            raise DomainError("Harmonic sequence needs a nonzero offset")
        self._limit = limit
        self.offset = offset
        self.first_denominator = first_denominator

    def _denominator(self, n: int) -> int:
        return n - self.start + self.first_denominator

    def point(self, n: int) -> Point4:
        self.check_index(n)
        return self._limit + self.offset.scaled(Fraction(1, self._denominator(n)))

    def indices_below(self, x: Point4, strict: bool = False) -> IndexSet:
        d = self._limit - x
        # interval times j^2, as a polynomial in j
        interval = [minkowski_product(self.offset, self.offset),
                    2 * minkowski_product(d, self.offset), minkowski_product(d, d)]
        timing = [self.offset.t, d.t]
        first = self.first_denominator
        stop = None if self.stop is None else self._denominator(self.stop)
        found = poly_nonpositive_set(interval, first, stop).intersection(
            poly_nonpositive_set(timing, first, stop))
        return self._strict(found.shifted(self.start - first), x, strict)

    def index_of(self, x: Point4) -> Optional[int]:
        diff = x - self._limit
        for a, b in zip(diff.coords, self.offset.coords):
            if b != 0:
                if a == 0:
                    return None
                j = b / a
                if j.denominator != 1 or j < self.first_denominator:
                    return None
                n = int(j) - self.first_denominator + self.start
                if self.stop is not None and n >= self.stop:
                    return None
                return n if self.point(n) == x else None
        return None

    def is_pairwise_slr(self) -> bool:
        return minkowski_product(self.offset, self.offset) > 0

    def min_gap_sq(self) -> Optional[Fraction]:
        if self.is_infinite:
            return None
        return super().min_gap_sq()

    def limit(self) -> Optional[Point4]:
        return self._limit if self.is_infinite else None

    def time_bounded(self) -> bool:
        return True

    def indices_near(self, x: Point4, radius_sq: Any) -> IndexSet:
        d = self._limit - x
        # squared distance minus radius, times j^2
        distance = [euclid_dot(self.offset, self.offset), 2 * euclid_dot(d, self.offset),
                    euclid_dot(d, d) - to_rational(radius_sq)]
        first = self.first_denominator
        stop = None if self.stop is None else self._denominator(self.stop)
        found = poly_nonpositive_set(distance, first, stop, strict=True)
        return found.shifted(self.start - first)

    def cofinite_shift(self, a: Point4) -> Optional[Fraction]:
        if not self.is_infinite:
            return None
        threshold = vertical_threshold(a, self._limit)
        if not threshold.is_rational:
            raise UnsupportedError(
                f"Limit {self._limit} is reached from {a} at irrational shift {threshold}")
        return threshold.base

    def _posc_candidates(self, delta: Fraction) -> List[Point4]:
        return [self._limit.shifted(-delta / 2)]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "limit": self._limit.to_text(),
                "offset": self.offset.to_text(), "start": self.start,
                "first_denominator": self.first_denominator, "stop": self.stop}

    def describe(self) -> str:
        return f"{self._limit} + {self.offset} / (n - {self.start} + {self.first_denominator})"


@lru_cache(maxsize=None)
def cone_parameter(n: int) -> Fraction:
    """
    Rational stand-in for cot(pi / 2**(n+2)), the half-angle tangent of direction n.

    Raises:
        GenerationError: If the surrogate is too small for the tail bounds
    """
    if n < 0:
        raise DomainError(f"Negative cone index {n}")
    if n <= WRAPPED_FLOAT_INDEX_LIMIT:
        value = Fraction(1 / math.tan(math.pi / 2 ** (n + 2))).limit_denominator(
            WRAPPED_DENOMINATOR_LIMIT)
    else:
        value = Fraction(round(2 ** (n + 2) / math.pi))
    if value < Fraction(2) ** (n - 1):
        raise GenerationError(f"Cone direction {n}: parameter {value} below 2^{n - 1}")
    if n > 0 and value <= cone_parameter(n - 1):
        raise GenerationError(f"Cone direction {n}: parameters not increasing")
    return value


def cone_direction(n: int) -> Tuple[Fraction, Fraction]:
    """Exact rational unit vector (c, s) for direction n."""
    t = cone_parameter(n)
    denom = 1 + t * t
    return (1 - t * t) / denom, 2 * t / denom


class ConeSequence(PointSequence):
    """
    Points wrapped around the backward light cone of the origin.

    Index n sits at radius r = n + 1 - lift in direction (c_n, s_n, 0); the
    directions sweep from angle pi/2 towards pi. With lift 0 every member
    lies exactly on the cone; a positive lift moves each member up along its
    cone generator.
    """

    kind = "cone"

    def __init__(self, lift: Any = 0, start: int = 0, stop: Optional[int] = None):
        super().__init__(start, stop)
        self.lift = to_rational(lift)
        if not 0 <= self.lift < 1:
            raise DomainError(f"Cone lift must lie in [0, 1), got {self.lift}")

    def radius(self, n: int) -> Fraction:
        return n - self.start + 1 - self.lift

    def point(self, n: int) -> Point4:
        self.check_index(n)
        r = self.radius(n)
        c, s = cone_direction(n - self.start)
        return Point4(-r, r * c, r * s, 0)

    def _is_below(self, n: int, x: Point4) -> bool:
        return leq_M(self.point(n), x)

    def _scan(self, x: Point4, upto: int) -> FrozenSet[int]:
        last = upto if self.stop is None else min(upto, self.stop)
        return frozenset(n for n in range(self.start, last) if self._is_below(n, x))

    def _first_index_with(self, predicate) -> int:
        n = self.start
        while not predicate(n):
            n += 1
        return n

    def indices_below(self, x: Point4, strict: bool = False) -> IndexSet:
        if self.stop is not None:
            return self._strict(IndexSet(self._scan(x, self.stop)), x, strict)
        x0, x1, x2, x3 = x.coords
        spatial_sq = x1 * x1 + x2 * x2 + x3 * x3
        bound = abs(x1) + abs(x2) + abs(x3)
        lead = x0 - x1
        if lead != 0:
            q = spatial_sq - x0 * x0
            needed_radius = abs(q) / abs(lead) + abs(x0) + 1

            def settled(n):
                m = n - self.start
                return (bound * Fraction(2) ** (2 - m) <= abs(lead) / 2
                        and self.radius(n) >= needed_radius)

            threshold = self._first_index_with(settled)
            tail = threshold if lead > 0 else None
            return self._strict(IndexSet(self._scan(x, threshold), tail), x, strict)
        rest = x2 * x2 + x3 * x3
        if rest > 0:
            weight = 2 * abs(x1) + 2 * abs(x2)

            def settled(n):
                m = n - self.start
                return (m >= 2 and 2 * (m + 1) * weight * Fraction(2) ** (1 - m) < rest
                        and self.radius(n) >= -x0)

            threshold = self._first_index_with(settled)
            return self._strict(IndexSet(self._scan(x, threshold)), x, strict)
        # x lies on the line t = x1 in the x2 = x3 = 0 plane
        if x1 >= 0:
            return self._strict(IndexSet(frozenset(), self.start), x, strict)
        return IndexSet.empty()

    def index_of(self, x: Point4) -> Optional[int]:
        m = -x.t - 1 + self.lift
        if m.denominator != 1 or m < 0:
            return None
        n = self.start + int(m)
        if self.stop is not None and n >= self.stop:
            return None
        return n if self.point(n) == x else None

    def is_pairwise_slr(self) -> bool:
        return True

    def min_gap_sq(self) -> Optional[Fraction]:
        return Fraction(2)

    def time_bounded(self) -> bool:
        return not self.is_infinite

    def indices_near(self, x: Point4, radius_sq: Any) -> IndexSet:
        radius_sq = to_rational(radius_sq)
        # members have |p|^2 = 2 r^2, so none is near once sqrt(2) r exceeds |x| + radius
        reach = sqrt_upper_bound(euclid_dot(x, x)) + sqrt_upper_bound(radius_sq)
        found = set()
        n = self.start
        while (self.stop is None or n < self.stop) and 2 * self.radius(n) ** 2 < reach ** 2:
            if euclid_dist_sq(self.point(n), x) < radius_sq:
                found.add(n)
            n += 1
        return IndexSet(frozenset(found))

    def cofinite_shift(self, a: Point4) -> Optional[Fraction]:
        if not self.is_infinite:
            return None
        # the tail enters once t - x1 turns positive along the vertical line
        return a.x1 - a.t

    def _posc_candidates(self, delta: Fraction) -> List[Point4]:
        return [Point4(-delta / 2)]

    def verify(self, count: int) -> Dict[str, bool]:
        """Exact check of cone membership, separation and gaps over the first `count` members."""
        pts = [self.point(n) for n in range(self.start, self.start + count)]
        on_cone = all(minkowski_product(p, p) == 0 and p.t < 0 for p in pts)
        separated = all(slr_M(p, q) for i, p in enumerate(pts) for q in pts[i + 1:])
        gaps = all(euclid_dist_sq(p, q) >= 2 for i, p in enumerate(pts) for q in pts[i + 1:])
        return {"on_cone": on_cone, "pairwise_slr": separated, "gap_at_least_2": gaps}

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "lift": format_rational(self.lift),
                "start": self.start, "stop": self.stop}

    def describe(self) -> str:
        lift = f" lifted by {format_rational(self.lift)}" if self.lift else ""
        return f"backward light cone of the origin{lift}, radius n + 1"


class ConcatSequence(PointSequence):
    """Consecutive parts sharing one index space."""

    kind = "concat"

    def __init__(self, parts: Sequence[PointSequence]):
        if not parts:
            raise DomainError("Concatenation needs at least one part")
        for left, right in zip(parts, parts[1:]):
            if left.stop is None or left.stop != right.start:
                raise DomainError("Concatenated parts must have contiguous index ranges")
        super().__init__(parts[0].start, parts[-1].stop)
        self.parts = tuple(parts)

    def _part(self, n: int) -> PointSequence:
        self.check_index(n)
        for part in self.parts:
            if part.stop is None or n < part.stop:
                return part
        raise DomainError(f"Index {n} outside the concatenation")

    def point(self, n: int) -> Point4:
        return self._part(n).point(n)

    def indices_below(self, x: Point4, strict: bool = False) -> IndexSet:
        found = IndexSet.empty()
        for part in self.parts:
            found = found.union(part.indices_below(x, strict))
        return found

    def index_of(self, x: Point4) -> Optional[int]:
        for part in self.parts:
            n = part.index_of(x)
            if n is not None:
                return n
        return None

    def is_pairwise_slr(self) -> bool:
        if not all(part.is_pairwise_slr() for part in self.parts):
            return False
        for i, part in enumerate(self.parts):
            for later in self.parts[i + 1:]:
                for p in part.sample_points():
                    if later.any_below(p):
                        return False
                    if any(not slr_M(p, q) for q in later.sample_points()):
                        return False
        return True

    def min_gap_sq(self) -> Optional[Fraction]:
        if any(part.is_infinite and part.min_gap_sq() is None for part in self.parts):
            return None
        return super().min_gap_sq()

    def limit(self) -> Optional[Point4]:
        return self.parts[-1].limit()

    def time_bounded(self) -> bool:
        return all(part.time_bounded() for part in self.parts)

    def indices_near(self, x: Point4, radius_sq: Any) -> IndexSet:
        found = IndexSet.empty()
        for part in self.parts:
            found = found.union(part.indices_near(x, radius_sq))
        return found

    def cofinite_shift(self, a: Point4) -> Optional[Fraction]:
        return self.parts[-1].cofinite_shift(a)

    def _posc_candidates(self, delta: Fraction) -> List[Point4]:
        return self.parts[-1]._posc_candidates(delta)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "parts": [part.to_dict() for part in self.parts]}

    def describe(self) -> str:
        return " then ".join(part.describe() for part in self.parts)


def sequence_from_dict(data: Dict[str, Any]) -> PointSequence:
    """
    Rebuild a descriptor from its serialized form.

    Raises:
        ModelParseError: On an unknown kind or missing fields
    """
    try:
        kind = data["kind"]
        stop = data.get("stop")
        if kind == "finite":
            return FinitePoints([Point4.parse(p) for p in data["points"]], int(data.get("start", 0)))
        if kind == "linear":
            return LinearSequence(Point4.parse(data["base"]), Point4.parse(data["step"]),
                                  int(data.get("start", 0)), stop)
        if kind == "harmonic":
            return HarmonicSequence(Point4.parse(data["limit"]), Point4.parse(data["offset"]),
                                    int(data.get("start", 0)),
                                    int(data.get("first_denominator", 1)), stop)
        if kind == "cone":
            return ConeSequence(data.get("lift", "0"), int(data.get("start", 0)), stop)
        if kind == "concat":
            return ConcatSequence([sequence_from_dict(part) for part in data["parts"]])
    except (KeyError, TypeError, ValueError) as e:
        raise ModelParseError(f"Bad sequence descriptor {data!r}: {e}")
    raise ModelParseError(f"Unknown sequence kind {data.get('kind')!r}")
