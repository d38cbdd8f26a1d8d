"""
Tests for index sets, eventual signs and the symbolic point sequences.
"""

from fractions import Fraction

import pytest

from core.descriptors import (
    ConcatSequence, ConeSequence, FinitePoints, HarmonicSequence, IndexSet, LinearSequence,
    cone_direction, cone_parameter, eventual_sign, poly_nonpositive_set, sequence_from_dict
)
from core.errors import DomainError, ModelParseError
from core.geometry import Point4, minkowski_product

ORIGIN = Point4.origin()


# -- Index sets ---------------------------------------------------------------

class TestIndexSet:
    def test_tail_absorbs_finite(self):
        """Finite members at or above the tail start are folded into the tail."""
        s = IndexSet(frozenset({1, 5, 7}), 5)
        assert s.finite == frozenset({1})
        assert 6 in s and 1 in s and 2 not in s
        assert not s.is_finite

    def test_union_and_intersection(self):
        a = IndexSet(frozenset({1}))
        b = IndexSet(frozenset(), 3)
        assert a.union(b) == IndexSet(frozenset({1}), 3)
        assert IndexSet(frozenset({1, 2})).intersection(IndexSet(frozenset(), 2)) == IndexSet(frozenset({2}))
        assert b.intersection(IndexSet(frozenset({4}), 6)) == IndexSet(frozenset({4}), 6)

    def test_without_inside_tail(self):
        """Removing a tail member moves the tail start past it."""
        s = IndexSet(frozenset(), 3).without([4])
        assert 3 in s and 4 not in s and 5 in s

    def test_first_and_text(self):
        s = IndexSet(frozenset({0}), 4)
        assert s.first(3) == [0, 4, 5]
        assert str(IndexSet(frozenset({1}), 3)) == "{1, 3..}"
        assert IndexSet.empty().is_empty


class TestEventualSign:
    def test_positive_quadratic(self):
        """v^2 - 5 is positive from the reported threshold on."""
        sign, threshold = eventual_sign([-5, 0, 1])
        assert sign == 1
        assert all(v * v - 5 > 0 for v in range(threshold, threshold + 20))

    def test_zero_polynomial(self):
        assert eventual_sign([0, 0]) == (0, 1)

    def test_nonpositive_finite(self):
        assert poly_nonpositive_set([-5, 0, 1], 0) == IndexSet(frozenset({0, 1, 2}))

    def test_nonpositive_tail(self):
        """5 - v is nonpositive from 5 on."""
        s = poly_nonpositive_set([5, -1], 0)
        assert 5 in s and 100 in s and 4 not in s

    def test_bounded_range(self):
        assert poly_nonpositive_set([5, -1], 0, stop=7) == IndexSet(frozenset({5, 6}))


# -- Sequences -----------------------------------------------------------------

class TestLinearSequence:
    def test_lattice_below(self):
        """Lattice points (0, n) below (3, 0) are exactly n <= 3."""
        lattice = LinearSequence(ORIGIN, Point4(0, 1))
        assert lattice.indices_below(Point4(3, 0)) == IndexSet(frozenset({0, 1, 2, 3}))

    def test_strict_excludes_self(self):
        lattice = LinearSequence(ORIGIN, Point4(0, 1))
        assert lattice.indices_below(Point4(0, 2)) == IndexSet(frozenset({2}))
        assert lattice.indices_below(Point4(0, 2), strict=True).is_empty

    def test_index_of(self):
        lattice = LinearSequence(ORIGIN, Point4(0, 1))
        assert lattice.index_of(Point4(0, 5)) == 5
        assert lattice.index_of(Point4(1, 5)) is None
        assert lattice.index_of(Point4(0, -1)) is None

    def test_slr_and_gap(self):
        assert LinearSequence(ORIGIN, Point4(0, 1)).is_pairwise_slr()
        assert not LinearSequence(ORIGIN, Point4(1, 0)).is_pairwise_slr()
        assert LinearSequence(ORIGIN, Point4(0, 1)).min_gap_sq() == 1

    def test_near(self):
        lattice = LinearSequence(ORIGIN, Point4(0, 1))
        assert lattice.indices_near(ORIGIN, 2) == IndexSet(frozenset({0, 1}))

    def test_no_posc_counterexample(self):
        """Shifting a point of the plane by a fixed time keeps finite below-sets finite."""
        assert LinearSequence(ORIGIN, Point4(0, 1)).posc_counterexample(Fraction(1, 2)) is None

    def test_zero_step(self):
        with pytest.raises(DomainError):
            LinearSequence(ORIGIN, ORIGIN)


class TestHarmonicSequence:
    def test_points_and_limit(self):
        seq = HarmonicSequence(ORIGIN, Point4(0, 1))
        assert seq.point(0) == Point4(0, 1)
        assert seq.point(3) == Point4(0, Fraction(1, 4))
        assert seq.limit() == ORIGIN

    def test_everything_below_a_later_point(self):
        below = HarmonicSequence(ORIGIN, Point4(0, 1)).indices_below(Point4(1, 0))
        assert 0 in below and 1000 in below

    def test_tail_below_shifted_limit(self):
        """(1/4, 0) dominates exactly the members with 1/j <= 1/4."""
        below = HarmonicSequence(ORIGIN, Point4(0, 1)).indices_below(Point4(Fraction(1, 4), 0))
        assert 3 in below and 50 in below
        assert 2 not in below

    def test_index_of(self):
        seq = HarmonicSequence(ORIGIN, Point4(0, 1))
        assert seq.index_of(Point4(0, Fraction(1, 3))) == 2
        assert seq.index_of(Point4(0, Fraction(2, 3))) is None

    def test_accumulation_breaks_posc(self):
        """Just below the limit the shift by delta sweeps in a whole tail."""
        seq = HarmonicSequence(ORIGIN, Point4(0, 1))
        assert seq.posc_counterexample(Fraction(1, 2)) == Point4(Fraction(-1, 4), 0)
        assert seq.min_gap_sq() is None

    def test_cofinite_shift_at_limit(self):
        half = Point4(0, Fraction(1, 2))
        seq = HarmonicSequence(half, Point4(0, Fraction(-1, 2)), 4, 2)
        assert seq.cofinite_shift(half) == 0


class TestConeSequence:
    def test_first_member(self):
        """Direction 0 is the x2 axis at radius 1."""
        assert cone_direction(0) == (Fraction(0), Fraction(1))
        assert ConeSequence().point(0) == Point4(-1, 0, 1, 0)

    def test_parameters_increase(self):
        assert cone_parameter(3) > cone_parameter(2) > cone_parameter(1)

    def test_exact_checks(self):
        seq = ConeSequence()
        checks = seq.verify(8)
        assert checks == {"on_cone": True, "pairwise_slr": True, "gap_at_least_2": True}
        for n in range(8):
            p = seq.point(n)
            assert minkowski_product(p, p) == 0

    def test_origin_dominates_everything(self):
        below = ConeSequence().indices_below(ORIGIN)
        assert below == IndexSet(frozenset(), 0)

    def test_index_of(self):
        seq = ConeSequence()
        assert seq.index_of(seq.point(5)) == 5
        assert seq.index_of(Point4(-1, 1, 0, 0)) is None

    def test_posc_fails(self):
        """Below the apex a finite below-set becomes cofinite after a shift."""
        assert ConeSequence().posc_counterexample(Fraction(1, 2)) == Point4(Fraction(-1, 4))

    def test_lift_range(self):
        with pytest.raises(DomainError):
            ConeSequence(1)


class TestFiniteAndConcat:
    def test_finite_points(self):
        seq = FinitePoints([Point4(0, 0), Point4(0, 2)], start=3)
        assert seq.point(4) == Point4(0, 2)
        assert seq.indices_below(Point4(2, 2)) == IndexSet(frozenset({3, 4}))
        assert seq.index_of(Point4(0, 2)) == 4

    def test_empty_finite(self):
        with pytest.raises(DomainError):
            FinitePoints([])

    def test_concat_needs_contiguous_parts(self):
        with pytest.raises(DomainError):
            ConcatSequence([FinitePoints([ORIGIN]), LinearSequence(ORIGIN, Point4(0, 1))])

    def test_concat_limit(self):
        half = Point4(0, Fraction(1, 2))
        seq = ConcatSequence([FinitePoints([half]), HarmonicSequence(half, Point4(0, -1), 1, 2)])
        assert seq.point(0) == half
        assert seq.point(1) == Point4(0, 0)
        assert seq.limit() == half


class TestSerialization:
    def test_rebuilt_descriptor_agrees(self):
        """A rebuilt descriptor yields the same members."""
        seq = HarmonicSequence(ORIGIN, Point4(0, -1), 2, 3, 9)
        again = sequence_from_dict(seq.to_dict())
        assert [again.point(n) for n in range(2, 9)] == [seq.point(n) for n in range(2, 9)]

    def test_unknown_kind(self):
        with pytest.raises(ModelParseError):
            sequence_from_dict({"kind": "spiral"})

    def test_missing_field(self):
        with pytest.raises(ModelParseError):
            sequence_from_dict({"kind": "linear", "base": "0,0"})
