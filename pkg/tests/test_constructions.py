"""
Tests for fin2inf, the cone-boundary walk, the minimum-gap chain and cause-like loci.
"""

from fractions import Fraction

import pytest

from core.catalog import gen_lattice, gen_planted_epr, gen_random_structure
from core.constructions import (
    LocateCase, cause_like_loci, check_min_gap_no_inffb, construct_inffb_from_finfb,
    lifted_x_set, locate_cone_boundary
)
from core.errors import DomainError
from core.families import BinaryLabel
from core.funny_business import FbKind, check_finfb
from core.geometry import Point4, QuadraticSurd

ZEROS = BinaryLabel.constant(0)
ONES = BinaryLabel.constant(1)
E1, E2 = "0,-1,0,0@+-", "0,1,0,0@+-"


class TestFin2Inf:
    def test_finite_witness_becomes_a_region(self, epr):
        T = epr.transition_set("+,+")
        result = construct_inffb_from_finfb(T, check_finfb(T))
        assert not result.passthrough
        assert result.passes
        assert result.certificate["histories"] == {"h_S": "+-", "h_A": "+-", "h_B": "-+"}
        assert result.certificate["excludes_common_future"]

    def test_region_membership(self, epr):
        T = epr.transition_set("+,+")
        region = construct_inffb_from_finfb(T, check_finfb(T)).region
        assert region.contains(Point4(-5, 0))
        assert region.contains(Point4(0, -1))
        assert not region.contains(Point4(1, -1))
        assert region.assigned_history(Point4(-2, -2)) == "+-"

    @pytest.mark.parametrize("seed", range(100))
    def test_planted(self, seed):
        T = gen_planted_epr(seed).transition_set("+,+")
        verdict = check_finfb(T)
        assert verdict.kind is FbKind.FINFB
        assert construct_inffb_from_finfb(T, verdict).passes

    def test_infinite_subject_passes_through(self, m2):
        result = construct_inffb_from_finfb(m2.points, rule=ZEROS)
        assert result.passthrough
        assert result.passes
        assert result.points is m2.points

    def test_needs_a_finfb_verdict(self, epr):
        T = epr.transition_set("+,-")
        with pytest.raises(DomainError):
            construct_inffb_from_finfb(T, check_finfb(T))

    def test_symbolic_needs_a_rule(self, m2):
        with pytest.raises(DomainError):
            construct_inffb_from_finfb(m2.points)


class TestLocate:
    def test_cone_on_a_finite_set(self, epr):
        """The second point joins at the light-cone distance 2 and empties the outcome."""
        result = locate_cone_boundary(epr.transition_set("+,+"), Point4(0, -1))
        assert result.case is LocateCase.CONE
        assert result.shift == QuadraticSurd(2)
        assert result.point == Point4(2, -1)
        assert result.certificate["cone_set"] == [E2]

    def test_good_line(self, epr):
        result = locate_cone_boundary(epr.transition_set("+,-"), Point4(0, -1))
        assert result.case is LocateCase.NO_FB
        assert result.certificate["history"] == "+-"

    def test_start_outside_reduced_set(self, epr):
        with pytest.raises(DomainError):
            locate_cone_boundary(epr.transition_set("+,+"), Point4(5, 5))

    def test_outer_lining(self, wrapped):
        a_star = wrapped.points.sequence.point(0)
        result = locate_cone_boundary(wrapped.points, a_star, ZEROS)
        assert result.case is LocateCase.OUTER_LINING
        assert result.certificate["beyond"]["intersection_empty"]

    def test_symbolic_good(self, m2):
        result = locate_cone_boundary(m2.points, Point4(1, 0), ONES)
        assert result.case is LocateCase.NO_FB

    def test_symbolic_needs_a_rule(self, m2):
        with pytest.raises(DomainError):
            locate_cone_boundary(m2.points, Point4(1, 0))


class TestMinGap:
    def test_lattice_ends_in_a_history(self):
        result = check_min_gap_no_inffb(gen_lattice().points, Fraction(1, 2), ZEROS)
        assert result.posc_holds
        assert result.verdict.kind is FbKind.NONE
        assert result.certificate["containing_history"] == "(0)"
        assert len(result.certificate["chain"]) == 12

    def test_m2_without_containing_history(self, m2):
        result = check_min_gap_no_inffb(m2.points, "1/2", ZEROS)
        assert result.posc_holds
        assert result.verdict.kind is FbKind.INFFB

    def test_wrapped_fails_the_shift_condition(self, wrapped):
        result = check_min_gap_no_inffb(wrapped.points, "1/2", ZEROS)
        assert not result.posc_holds
        assert result.verdict is None
        assert result.certificate["posc"]["counterexample"] == "-1/4,0,0,0"

    def test_shift_must_be_positive(self, m2):
        with pytest.raises(DomainError):
            check_min_gap_no_inffb(m2.points, 0, ZEROS)


class TestCauseLikeLoci:
    def test_source_is_a_locus_below(self):
        structure = gen_planted_epr().structure
        source, e1 = structure.points()[:2]
        result = cause_like_loci(e1, structure)
        assert result.loci == [source]
        assert result.all_below
        assert not result.finfb.found

    @pytest.mark.parametrize("seed", range(100))
    def test_loci_below_without_finfb(self, seed):
        structure = gen_random_structure(seed, 2 + seed % 3).structure
        for x in structure.points():
            result = cause_like_loci(x, structure)
            if not result.finfb.found:
                assert result.all_below
                assert all(structure.lt(e, x) for e in result.loci)

    def test_unknown_point(self, epr):
        with pytest.raises(DomainError):
            cause_like_loci("nowhere", epr.structure)


def test_lifted_points_need_a_cone(m2):
    with pytest.raises(DomainError):
        lifted_x_set(m2.points, ZEROS)
