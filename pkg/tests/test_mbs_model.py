"""
Tests for model validation and the quotient order on event classes.
"""

from fractions import Fraction

import pytest

from core.catalog import gen_lattice, gen_random_model
from core.errors import DomainError, UnknownScenarioError
from core.families import BinaryLabel, ExplicitFamily
from core.geometry import Point4
from core.mbs_model import (
    ExplicitSplitting, IndexedSplitting, LimitDeclaration, MbsModel, event_class,
    generated_choice_points, in_overlap, is_choice_point, leq_S, lt_S, pair_key, same_event,
    slr_S, validate
)
from core.descriptors import FinitePoints, IndexSet

ORIGIN = Point4.origin()
ONES = BinaryLabel.constant(1)


def _explicit(labels, pairs):
    return MbsModel("t", ExplicitFamily(labels), ExplicitSplitting(pairs))


def _converging(points):
    """Two scenarios split at the given points, declared to converge to the origin."""
    key = pair_key("sigma", "eta")
    declaration = LimitDeclaration(ORIGIN, FinitePoints(points))
    return MbsModel("t", ExplicitFamily(["sigma", "eta"]),
                    ExplicitSplitting({key: points}, {key: [declaration]}))


def _random_events(seed):
    """Event classes of a random model at its splitting points and above them."""
    model = gen_random_model(seed, 2 + seed % 3, 1 + seed % 4).model
    locations = model.splitting.all_points()
    locations += [x.shifted(3) for x in locations]
    events = [event_class(x, s, model) for x in locations for s in model.family.labels()]
    return model, events


class TestValidation:
    def test_catalog_models_are_valid(self, epr, lw1, m2):
        for instance in (epr, lw1, m2):
            assert validate(instance.model).is_valid

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_random_models_are_valid(self, seed):
        assert validate(gen_random_model(seed).model).is_valid

    def test_causally_related_splitting_points(self):
        model = _explicit(["a", "b"], {pair_key("a", "b"): [Point4(0, 0), Point4(1, 0)]})
        report = validate(model)
        assert not report.is_valid
        assert [v.kind for v in report.violations] == ["pairwise_slr"]

    def test_pair_that_never_splits(self):
        model = _explicit(["a", "b", "c"], {pair_key("a", "b"): [ORIGIN]})
        kinds = {v.kind for v in validate(model).violations}
        assert "nonempty" in kinds
        assert "triangle" in kinds

    def test_unknown_scenario_in_pair(self):
        model = _explicit(["a", "b"], {pair_key("a", "b"): [ORIGIN], pair_key("a", "z"): [ORIGIN]})
        assert "symmetry" in {v.kind for v in validate(model).violations}

    def test_indexed_sequence_too_short(self):
        """A sequence with fewer points than string positions leaves pairs unsplit."""
        report = validate(gen_lattice(3, "all-strings(8)").model)
        assert [v.kind for v in report.violations] == ["nonempty"]

    def test_summary(self, epr):
        assert "valid presentation" in validate(epr.model).summary()


class TestIndexedSplitting:
    def test_differing_defaults(self):
        zeros = BinaryLabel.constant(0)
        assert IndexedSplitting.differing(zeros, ONES) == IndexSet(frozenset(), 0)

    def test_differing_flips(self):
        assert IndexedSplitting.differing(BinaryLabel.parse("01(1)"), ONES) == IndexSet(frozenset({0}))


class TestEventOrder:
    def test_shared_event_at_splitting_point(self, epr):
        e = event_class(Point4(0, -1), "+-", epr.model)
        assert e.scenario_class == frozenset({"+-", "-+"})
        assert same_event(e, event_class(Point4(0, -1), "-+", epr.model), epr.model)

    def test_events_above_a_split_are_separate(self, epr):
        model = epr.model
        a = event_class(Point4(1, -1), "+-", model)
        b = event_class(Point4(1, -1), "-+", model)
        assert a.scenario_class == frozenset({"+-"})
        assert not same_event(a, b, model)

    def test_order_across_scenarios(self, epr):
        """Below the split both scenarios share the event, above it they do not."""
        model = epr.model
        low = event_class(Point4(0, -1), "+-", model)
        high = event_class(Point4(1, -1), "-+", model)
        assert leq_S(low, high, model)
        assert lt_S(low, high, model)
        a = event_class(Point4(1, -1), "+-", model)
        b = event_class(Point4(2, -1), "-+", model)
        assert not leq_S(a, b, model)
        assert slr_S(a, b, model)

    def test_models_do_not_mix(self, epr, lw1):
        a = event_class(Point4(0, -1), "+-", epr.model)
        b = event_class(ORIGIN, "sigma", lw1.model)
        with pytest.raises(DomainError):
            leq_S(a, b, epr.model)

    def test_unknown_scenario(self, epr):
        with pytest.raises(UnknownScenarioError):
            event_class(ORIGIN, "++", epr.model)

    def test_indexed_classes(self, m2):
        model = m2.model
        assert event_class(Point4(1, 0), ONES, model).scenario_class.literals == ()
        above = event_class(Point4(2, 0), ONES, model)
        assert above.scenario_class.literals == ((0, 1), (1, 1))
        assert in_overlap(Point4(1, 0), "0(1)", "ones", model)
        assert not in_overlap(Point4(2, 0), "0(1)", "ones", model)


class TestChoicePoints:
    def test_generated(self, epr):
        events = generated_choice_points("+-", "-+", epr.model)
        assert [e.location for e in events] == [Point4(0, -1), Point4(0, 1)]

    def test_splitting_point_is_a_choice_point(self, epr):
        e = event_class(Point4(0, -1), "+-", epr.model)
        assert is_choice_point(e, "+-", "-+", epr.model)
        assert not is_choice_point(event_class(Point4(-1, -1), "+-", epr.model), "+-", "-+", epr.model)

    def test_indexed_choice_point(self, m2):
        model = m2.model
        assert is_choice_point(event_class(Point4(1, 0), ONES, model), "0(1)", "ones", model)
        assert not is_choice_point(event_class(Point4(1, 1), ONES, model), "0(1)", "ones", model)

    def test_limit_choice_point_is_not_generated(self, lw1):
        """The origin is maximal in the overlap although no splitting point sits there."""
        model = lw1.model
        origin = event_class(ORIGIN, "sigma", model)
        assert is_choice_point(origin, "sigma", "eta", model)
        generated = [e.location for e in generated_choice_points("sigma", "eta", model)]
        assert len(generated) == 10
        assert ORIGIN not in generated

    def test_alternating_sequence_covers_both_rays(self):
        model = _converging([Point4(0, 1), Point4(0, Fraction(-1, 2)),
                             Point4(0, Fraction(1, 3)), Point4(0, Fraction(-1, 4))])
        assert is_choice_point(event_class(ORIGIN, "sigma", model), "sigma", "eta", model)

    def test_one_sided_sequence(self):
        model = _converging([Point4(0, 1), Point4(0, Fraction(1, 2)), Point4(0, Fraction(1, 3))])
        assert not is_choice_point(event_class(ORIGIN, "sigma", model), "sigma", "eta", model)

    def test_same_scenario(self, epr):
        e = event_class(Point4(0, -1), "+-", epr.model)
        with pytest.raises(DomainError):
            is_choice_point(e, "+-", "+-", epr.model)

    def test_event_outside_overlap(self, epr):
        e = event_class(Point4(1, -1), "+-", epr.model)
        with pytest.raises(DomainError):
            is_choice_point(e, "+-", "-+", epr.model)


class TestOrderLaws:
    @pytest.mark.parametrize("seed", range(200))
    def test_same_event_is_an_equivalence(self, seed):
        model, events = _random_events(seed)
        same = [[same_event(a, b, model) for b in events] for a in events]
        n = len(events)
        for i in range(n):
            assert same[i][i]
            for j in range(n):
                assert same[i][j] == same[j][i]
                if same[i][j]:
                    assert all(same[i][k] for k in range(n) if same[j][k])

    @pytest.mark.parametrize("seed", range(200))
    def test_leq_is_a_partial_order(self, seed):
        model, events = _random_events(seed)
        above = [{j for j, b in enumerate(events) if leq_S(a, b, model)} for a in events]
        for i, a in enumerate(events):
            assert i in above[i]
            for j in above[i]:
                assert above[j] <= above[i]
                if i in above[j]:
                    assert same_event(a, events[j], model)
