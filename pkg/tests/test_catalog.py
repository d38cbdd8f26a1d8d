"""
Tests for the catalog generators and their expected verdicts.
"""

import pytest

from core.catalog import (
    CATALOG, RANDOM_ENTRY, catalog_names, check_catalog, check_entry, gen_m2,
    gen_random_model, gen_random_structure, gen_wrapped, generate, get_entry
)
from core.errors import CatalogLookupError, DomainError
from core.families import BinaryLabel


class TestLookup:
    def test_names(self):
        names = catalog_names()
        assert names[-1] == RANDOM_ENTRY
        assert "epr-bohm" in names and "wrapped" in names

    def test_unknown_name_lists_alternatives(self):
        with pytest.raises(CatalogLookupError) as excinfo:
            get_entry("epr")
        assert "epr-bohm" in excinfo.value.alternatives
        assert "Known:" in str(excinfo.value)

    def test_unknown_parameter(self):
        with pytest.raises(DomainError):
            generate("lw1", size=3)

    def test_random_parameters_are_integers(self):
        instance = generate(RANDOM_ENTRY, seed="2", scenarios="4")
        assert instance.model.family.labels() == ["s0", "s1", "s2", "s3"]

    @pytest.mark.parametrize("name,params", [
        ("wrapped", {"n": "abc"}),
        ("wrapped", {"n": None}),
        ("wrapped", {"n": True}),
        ("m2", {"n": "many"}),
        ("m2", {"family": 3}),
        (RANDOM_ENTRY, {"seed": None}),
        (RANDOM_ENTRY, {"colour": 1}),
    ])
    def test_parameter_types(self, name, params):
        with pytest.raises(DomainError):
            generate(name, **params)

    def test_none_means_unbounded(self):
        assert generate("m2", n=None).points.is_infinite
        assert not generate("m2", n="3").points.is_infinite


class TestGenerators:
    def test_wrapped_range(self):
        with pytest.raises(DomainError):
            gen_wrapped(1)
        with pytest.raises(DomainError):
            gen_wrapped(65)

    def test_m2_needs_a_choice_point(self):
        with pytest.raises(DomainError):
            gen_m2(0)
        assert gen_m2(2).points.stop == 2

    def test_random_ranges(self):
        with pytest.raises(DomainError):
            gen_random_model(scenarios=6)
        with pytest.raises(DomainError):
            gen_random_structure(events=5)

    def test_random_structure_is_small(self):
        instance = gen_random_structure(seed=1, events=3)
        assert 1 <= len(instance.structure.points()) <= 3

    def test_rules(self, m2):
        assert m2.rule("zeros") == BinaryLabel.constant(0)
        assert m2.rule("01(1)") == BinaryLabel.parse("01(1)")
        with pytest.raises(CatalogLookupError):
            m2.rule("twos")

    def test_unknown_transition_set(self, epr):
        with pytest.raises(CatalogLookupError):
            epr.transition_set("0,0")

    def test_seeds_are_reproducible(self):
        a, b = gen_random_model(7), gen_random_model(7)
        assert a.model.annotations == b.model.annotations


class TestExpectedVerdicts:
    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_entry_reproduces_its_verdicts(self, name):
        rows = check_entry(name)
        failed = [(r["check"], r["expected"], r["actual"]) for r in rows if not r["passed"]]
        assert failed == []

    def test_table(self):
        table = check_catalog(["epr-bohm", "lw1"])
        assert list(table.columns) == ["entry", "check", "expected", "actual", "passed"]
        assert set(table["entry"]) == {"epr-bohm", "lw1"}
        assert table["passed"].all()
