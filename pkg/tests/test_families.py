"""
Tests for binary labels, constraint sets and the scenario family oracles.
"""

import pytest

from core.descriptors import IndexSet
from core.errors import DomainError, ModelParseError, UnknownScenarioError, UnsupportedError
from core.families import (
    AllSequencesFamily, AllStringsFamily, AtMostKZerosFamily, BinaryLabel, ConstraintSet,
    ExplicitFamily, FinitelyManyZerosFamily, family_from_dict, parse_family, parse_rule
)

ZEROS = BinaryLabel.constant(0)
ONES = BinaryLabel.constant(1)


class TestBinaryLabel:
    def test_parse_forms(self):
        assert BinaryLabel.parse("zeros") == ZEROS
        assert BinaryLabel.parse("01(1)") == BinaryLabel(frozenset({0}), 1)
        assert BinaryLabel.parse("0110") == BinaryLabel(frozenset({0, 3}), 1)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            BinaryLabel.parse("abc")

    def test_bits_and_text(self):
        label = BinaryLabel(frozenset({0, 3}), 1)
        assert label.bits(6) == "011011"
        assert label.to_text() == "0110(1)"
        assert label.zeros_in(0, 6) == [0, 3]

    def test_with_bit(self):
        """Setting a bit back to the default drops the flip."""
        label = ONES.with_bit(2, 0)
        assert label.bit(2) == 0
        assert label.with_bit(2, 1) == ONES

    def test_bad_default(self):
        with pytest.raises(DomainError):
            BinaryLabel(frozenset(), 2)

    def test_rule_is_a_label(self):
        assert parse_rule("ones") == ONES


class TestConstraintSet:
    def test_contradicting_literals(self):
        c = ConstraintSet(((0, 0), (0, 1)))
        assert c.conflict
        assert str(c) == "false"

    def test_tail_absorbs_agreeing_literal(self):
        c = ConstraintSet(((5, 0), (1, 1)), tail_zero_from=3)
        assert c.literals == ((1, 1),)
        assert c.tail_zero_from == 3

    def test_tail_conflicts_with_literal(self):
        assert ConstraintSet(((5, 1),), tail_zero_from=3).conflict

    def test_both_tails_conflict(self):
        assert ConstraintSet(tail_zero_from=1, tail_one_from=4).conflict

    def test_agreeing_on_a_tail(self):
        """Agreement on a cofinite set pins the label's default from there on."""
        c = ConstraintSet.agreeing(BinaryLabel.parse("01(1)"), IndexSet(frozenset(), 2))
        assert c == ConstraintSet((), None, 2)

    def test_following_bounded(self):
        assert ConstraintSet.following(ZEROS, 0, 3).literals == ((0, 0), (1, 0), (2, 0))

    def test_forced_bit_and_horizon(self):
        c = ConstraintSet(((1, 1),), tail_zero_from=6)
        assert c.forced_bit(1) == 1
        assert c.forced_bit(7) == 0
        assert c.forced_bit(3) is None
        assert c.horizon == 6

    def test_restricted(self):
        c = ConstraintSet(((1, 1),), tail_zero_from=2).restricted(4)
        assert c.literals == ((1, 1), (2, 0), (3, 0))
        assert c.tail_zero_from is None

    def test_satisfied_by(self):
        c = ConstraintSet(((0, 1),), tail_zero_from=1)
        assert c.satisfied_by(BinaryLabel.parse("1(0)"))
        assert not c.satisfied_by(ONES)
        assert c.satisfied_by(BinaryLabel.parse("1000"), stop=1)

    def test_meet(self):
        a = ConstraintSet.literal(0, 0)
        assert a.meet(ConstraintSet.literal(0, 1)).conflict
        assert a.meet(ConstraintSet.literal(2, 1)).literals == ((0, 0), (2, 1))


class TestSymbolicFamilies:
    def test_all_sequences_witness(self):
        family = AllSequencesFamily()
        c = ConstraintSet(((0, 0),), tail_one_from=3)
        assert family.witness(c) == BinaryLabel(frozenset({0}), 1)
        assert not family.is_empty(ConstraintSet(tail_zero_from=0))

    def test_finitely_many_zeros_rejects_zero_tail(self):
        """Every finite part of the all-zeros rule is satisfiable, the whole is not."""
        family = FinitelyManyZerosFamily()
        assert family.finite_conjunctions_satisfiable(ZEROS) == (True, None)
        assert family.is_empty(family.following(ZEROS))
        assert not family.is_empty(family.following(ZEROS, 0, 50))

    def test_finitely_many_zeros_membership(self):
        family = FinitelyManyZerosFamily()
        assert family.contains(BinaryLabel.parse("0010"))
        assert not family.contains(ZEROS)
        with pytest.raises(UnknownScenarioError):
            family.parse_label("zeros")

    def test_subset(self):
        family = FinitelyManyZerosFamily()
        a = ConstraintSet.literal(0, 0)
        assert family.is_subset(a, ConstraintSet())
        assert not family.is_subset(a, ConstraintSet.literal(1, 0))
        assert family.is_subset(a.meet(ConstraintSet.literal(1, 0)), ConstraintSet.literal(1, 0))

    def test_subset_with_tail(self):
        """A tail of ones is implied only when the left side forces it."""
        family = AllSequencesFamily()
        assert family.is_subset(ConstraintSet(tail_one_from=2), ConstraintSet(tail_one_from=5))
        assert not family.is_subset(ConstraintSet(tail_one_from=5), ConstraintSet(tail_one_from=2))

    def test_at_most_k_zeros(self):
        family = AtMostKZerosFamily(1)
        assert family.is_empty(ConstraintSet.from_literals([(0, 0), (1, 0)]))
        assert family.witness(ConstraintSet.literal(0, 0)) == BinaryLabel(frozenset({0}), 1)
        assert family.finite_conjunctions_satisfiable(ZEROS) == (False, [0, 1])
        assert family.finite_conjunctions_satisfiable(BinaryLabel.parse("01(1)")) == (True, None)

    def test_negative_k(self):
        with pytest.raises(DomainError):
            AtMostKZerosFamily(-1)

    def test_infinite_family_has_no_label_list(self):
        with pytest.raises(UnsupportedError):
            FinitelyManyZerosFamily().labels()


class TestAllStrings:
    def test_labels(self):
        family = AllStringsFamily(3)
        labels = family.labels()
        assert len(labels) == 8
        assert family.format_label(labels[0]) == "000"

    def test_parse_and_format(self):
        family = AllStringsFamily(3)
        label = family.parse_label("010")
        assert label == BinaryLabel(frozenset({0, 2}), 1)
        assert family.format_label(label) == "010"

    def test_indices_outside_the_string(self):
        family = AllStringsFamily(3)
        assert not family.contains(BinaryLabel(frozenset({5}), 1))
        with pytest.raises(DomainError):
            family.literal(3, 0)

    def test_tails_are_read_on_the_string(self):
        """A zero tail only constrains the indices below n."""
        family = AllStringsFamily(3)
        assert not family.is_empty(ConstraintSet(tail_zero_from=1))
        assert family.following(ZEROS).literals == ((0, 0), (1, 0), (2, 0))

    def test_too_large_to_enumerate(self):
        with pytest.raises(UnsupportedError):
            AllStringsFamily(17).labels()


class TestExplicitFamily:
    def test_basics(self):
        family = ExplicitFamily(["a", "b", "c"])
        assert family.witness(frozenset({"c", "b"})) == "b"
        assert family.meet(frozenset({"a", "b"}), frozenset({"b"})) == frozenset({"b"})
        assert family.is_empty(frozenset())
        assert family.format_predicate(frozenset({"b", "a"})) == "{a, b}"

    def test_duplicates(self):
        with pytest.raises(DomainError):
            ExplicitFamily(["a", "a"])

    def test_unknown_label(self):
        with pytest.raises(UnknownScenarioError):
            ExplicitFamily(["a"]).parse_label("c")

    def test_no_indexed_literals(self):
        with pytest.raises(UnsupportedError):
            ExplicitFamily(["a"]).literal(0, 1)


class TestParsing:
    def test_parse_family(self):
        assert parse_family("all-strings(8)").n == 8
        assert parse_family("at-most-k-zeros(3)").k == 3
        assert isinstance(parse_family("finitely-many-zeros"), FinitelyManyZerosFamily)

    @pytest.mark.parametrize("bad", ["finitely-many-zeros(2)", "all-strings", "spiral", "Zeros!"])
    def test_unknown_family(self, bad):
        with pytest.raises(ValueError):
            parse_family(bad)

    def test_family_from_dict(self):
        assert isinstance(family_from_dict(["a", "b"]), ExplicitFamily)
        assert isinstance(family_from_dict({"family": "all-sequences"}), AllSequencesFamily)

    @pytest.mark.parametrize("bad", [[], {"family": "bogus"}, 5])
    def test_family_from_dict_errors(self, bad):
        with pytest.raises(ModelParseError):
            family_from_dict(bad)
