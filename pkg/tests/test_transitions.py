"""
Tests for point structures, transition sets and symbolic point families.
"""

import pytest

from core.errors import CatalogLookupError, DomainError
from core.families import BinaryLabel, ConstraintSet, ExplicitFamily, parse_family
from core.transitions import (
    AbstractStructure, SymbolicPointFamily, TransitionSet, transition_set_from_model
)

ZEROS = BinaryLabel.constant(0)
E1, E2 = "0,-1,0,0@+-", "0,1,0,0@+-"


class TestAbstractStructure:
    def test_transitive_order(self):
        s = AbstractStructure("s", ["a", "b", "c"], [("a", "b"), ("b", "c")], ExplicitFamily(["h"]))
        assert s.leq("a", "c")
        assert s.lt("a", "b")
        assert not s.lt("a", "a")
        assert not s.leq("c", "a")

    def test_cycle(self):
        with pytest.raises(DomainError):
            AbstractStructure("s", ["a", "b"], [("a", "b"), ("b", "a")], ExplicitFamily(["h"]))

    def test_unknown_point_in_order(self):
        with pytest.raises(DomainError):
            AbstractStructure("s", ["a"], [("a", "z")], ExplicitFamily(["h"]))

    def test_slr_needs_a_common_history(self):
        family = ExplicitFamily(["x", "y"])
        apart = AbstractStructure("s", ["p", "q"], [], family,
                                  {"p": frozenset({"x"}), "q": frozenset({"y"})})
        assert not apart.slr("p", "q")
        shared = AbstractStructure("s", ["p", "q"], [], family)
        assert shared.slr("p", "q")


class TestModelTransitionSets:
    def test_declared_set(self, epr):
        T = epr.transition_set("+,+")
        assert T.points == [E1, E2]
        assert T.outcome(E1) == frozenset({"+-"})
        assert T.outcome(E2) == frozenset({"-+"})
        assert T.is_product_function()
        assert T.meet(T.points) == frozenset()

    def test_names(self, epr):
        assert sorted(epr.model.transitions) == ["+,+", "+,-", "-,+", "-,-"]

    def test_unknown_name(self, epr):
        with pytest.raises(CatalogLookupError):
            transition_set_from_model(epr.model, "0,0")

    def test_from_choice(self, epr):
        structure = epr.transition_set("+,-").structure
        T = TransitionSet.from_choice(structure, {E1: "-+"})
        assert T.outcome(E1) == frozenset({"-+"})

    def test_repeated_point_is_not_a_product_function(self, epr):
        T = epr.transition_set("+,+")
        twice = TransitionSet(T.structure, T.transitions + T.transitions[:1])
        assert not twice.is_product_function()
        assert twice.restricted([E2]).points == [E2]

    def test_unknown_point(self, epr):
        structure = epr.transition_set("+,+").structure
        with pytest.raises(DomainError):
            TransitionSet(structure, [("nowhere", frozenset())])


class TestSymbolicPointFamily:
    def test_outcomes(self, m2):
        points = m2.points
        assert points.outcome(0, ZEROS) == ConstraintSet.literal(0, 0)
        assert len(points.possibilities(3)) == 2

    def test_full_outcome_of_zeros_is_empty(self, m2):
        """Each finite part of the all-zeros rule is satisfiable, the whole is not."""
        points = m2.points
        assert points.full_outcome(ZEROS).tail_zero_from == 0
        assert points.family.is_empty(points.full_outcome(ZEROS))

    def test_transition_set(self, m2):
        T = m2.points.transition_set(ZEROS, 3)
        assert T.points == ["m2[0]", "m2[1]", "m2[2]"]
        assert T.is_product_function()

    def test_diagonal_points(self, m2):
        assert m2.x_set.history_set(2) == ConstraintSet.literal(2, 0)

    def test_family_bounds_the_range(self):
        points = SymbolicPointFamily("p", parse_family("all-strings(4)"))
        assert not points.is_infinite
        assert points.indices() == [0, 1, 2, 3]

    def test_empty_range(self):
        with pytest.raises(DomainError):
            SymbolicPointFamily("p", parse_family("all-sequences"), start=3, stop=3)
