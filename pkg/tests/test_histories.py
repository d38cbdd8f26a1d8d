"""
Tests for elementary possibilities, the history-shape oracle and chain compactness.
"""

from fractions import Fraction

import pytest

from core.catalog import gen_imptop, gen_random_model
from core.errors import DomainError, ModelParseError, UnsupportedError
from core.families import BinaryLabel, parse_family
from core.geometry import Point4
from core.histories import (
    ExplicitChain, check_history_shape, chain_compactness_witness, chain_from_dict,
    elementary_possibilities, enumerate_histories, possibility_of, sigma_h, undivided
)
from core.mbs_model import event_class

ORIGIN = Point4.origin()
ONES = BinaryLabel.constant(1)


class TestPossibilities:
    def test_split_at_a_splitting_point(self, epr):
        at = event_class(Point4(0, -1), "+-", epr.model)
        cells = elementary_possibilities(at, epr.model)
        assert [c.members for c in cells] == [frozenset({"+-"}), frozenset({"-+"})]
        assert possibility_of(at, "-+", epr.model).members == frozenset({"-+"})

    def test_single_cell_below_the_split(self, epr):
        at = event_class(Point4(-1, -1), "+-", epr.model)
        assert undivided("+-", "-+", at, epr.model)
        assert len(elementary_possibilities(at, epr.model)) == 1

    def test_limit_divides(self, lw1):
        """Histories through the origin are divided although no splitting point is there."""
        at = event_class(ORIGIN, "sigma", lw1.model)
        assert not undivided("sigma", "eta", at, lw1.model)
        assert len(elementary_possibilities(at, lw1.model)) == 2

    def test_indexed_possibilities(self, m2):
        at = event_class(Point4(1, 0), ONES, m2.model)
        cells = elementary_possibilities(at, m2.model)
        assert [c.members.literals for c in cells] == [((0, 0),), ((0, 1),)]

    def test_indexed_off_sequence(self, m2):
        at = event_class(Point4(0, 0), ONES, m2.model)
        with pytest.raises(UnsupportedError):
            elementary_possibilities(at, m2.model)

    def test_undivided_outside_overlap(self, epr):
        at = event_class(Point4(1, -1), "+-", epr.model)
        with pytest.raises(DomainError):
            undivided("+-", "-+", at, epr.model)

    def test_sigma_h(self, epr):
        assert sigma_h(Point4(1, 1), "-+", epr.model) == frozenset({"-+"})

    @pytest.mark.parametrize("seed", range(50))
    def test_random_possibilities_partition(self, seed):
        model = gen_random_model(seed).model
        locations = model.splitting.all_points()
        for x in locations + [x.shifted(Fraction(1, 2)) for x in locations]:
            for sigma in model.family.labels():
                at = event_class(x, sigma, model)
                cells = [c.members for c in elementary_possibilities(at, model)]
                assert all(cells)
                assert frozenset().union(*cells) == at.scenario_class
                assert sum(len(c) for c in cells) == len(at.scenario_class)
                through = sorted(at.scenario_class)
                for a in through:
                    assert undivided(a, a, at, model)
                    for b in through:
                        assert undivided(a, b, at, model) == undivided(b, a, at, model)
                        same_cell = any(a in c and b in c for c in cells)
                        assert undivided(a, b, at, model) == same_cell


class TestHistoryShape:
    def test_epr_histories_are_scenarios(self, epr):
        """Maximal directed sets over a grid are exactly the scenario histories."""
        grid = [Point4(0, -1), Point4(0, 1), Point4(1, -1)]
        report = check_history_shape(epr.model, grid)
        assert report.matches
        assert report.histories == 2

    @pytest.mark.parametrize("seed", range(50))
    def test_random_models(self, seed):
        model = gen_random_model(seed).model
        assert check_history_shape(model, model.splitting.all_points()[:3]).matches

    def test_symbolic_family_refused(self, m2):
        with pytest.raises(UnsupportedError):
            enumerate_histories(m2.model, [ORIGIN])


class TestChains:
    def test_imptop_chain_is_not_compact(self):
        """Along the chain only the all-zeros sequence survives, outside the family."""
        model = gen_imptop().model
        verdict = chain_compactness_witness(None, model, model.chains["z"])
        assert not verdict.compact
        assert verdict.certificate["reason"] == "all-zeros sequence required"

    def test_imptop_chain_in_all_sequences(self):
        model = gen_imptop().model
        verdict = chain_compactness_witness(parse_family("all-sequences"), model, model.chains["z"])
        assert verdict.compact
        assert verdict.witness == BinaryLabel.constant(0)

    def test_finite_chain(self, wrapped):
        verdict = chain_compactness_witness(None, wrapped.model, wrapped.model.chains["axis"])
        assert verdict.compact
        assert verdict.witness == ONES

    def test_unordered_elements(self, epr):
        chain = ExplicitChain(((Point4(0, 0), "+-"), (Point4(0, 5), "+-")))
        with pytest.raises(DomainError):
            chain_compactness_witness(None, epr.model, chain)

    def test_empty_chain(self):
        with pytest.raises(DomainError):
            ExplicitChain(())

    def test_chain_documents(self):
        with pytest.raises(ModelParseError):
            chain_from_dict({"kind": "vertical"}, "z")
        with pytest.raises(UnsupportedError):
            chain_from_dict({"kind": "spiral"}, "z")
        chain = chain_from_dict({"kind": "explicit", "elements": [{"point": "0,0", "scenario": "a"}]})
        assert chain.sample_points() == [ORIGIN]
