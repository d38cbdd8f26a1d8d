"""
Tests for model documents and the catalog configuration file.
"""

import json

import pytest

from core.catalog import gen_eps2d, gen_imptop, instance_from_model
from core.errors import ModelParseError
from core.funny_business import FbKind, check_eps_fb, check_finfb, check_inffb
from core.histories import chain_compactness_witness
from core.mbs_model import validate
from core.model_io import ModelFileManager, header_problems

EPR_DOCUMENT = """{
    "format": "mbs-model/1",
    "name": "epr",
    "scenarios": ["+-", "-+"],
    "splitting": {
        "pairs": [{"scenarios": ["+-", "-+"], "points": ["0,-1", "0,1"]}]
    },
    "transitions": {
        "+,+": [
            {"at": "0,-1", "scenario": "+-", "outcome": "+-"},
            {"at": "0,1", "scenario": "+-", "outcome": "-+"}
        ]
    }
}
"""


@pytest.fixture
def manager():
    return ModelFileManager()


class TestParse:
    def test_readme_document(self, manager):
        model = manager.parse_model(EPR_DOCUMENT)
        assert model.name == "epr"
        assert validate(model).is_valid
        T = instance_from_model(model).transition_set("+,+")
        assert check_finfb(T).kind is FbKind.FINFB

    def test_syntax_error_position(self, manager):
        with pytest.raises(ModelParseError) as excinfo:
            manager.parse_model('{\n  "name": ,\n}', "bad.json")
        assert excinfo.value.line == 2
        assert "bad.json" in str(excinfo.value)

    @pytest.mark.parametrize("key", ["name", "scenarios", "splitting"])
    def test_missing_field(self, manager, key):
        data = json.loads(EPR_DOCUMENT)
        del data[key]
        with pytest.raises(ModelParseError) as excinfo:
            manager.model_from_dict(data)
        assert excinfo.value.path == key

    def test_wrong_format(self, manager):
        data = json.loads(EPR_DOCUMENT)
        data["format"] = "mbs-model/9"
        with pytest.raises(ModelParseError):
            manager.model_from_dict(data)

    def test_bad_point(self, manager):
        data = json.loads(EPR_DOCUMENT)
        data["splitting"]["pairs"][0]["points"] = ["0,x"]
        with pytest.raises(ModelParseError) as excinfo:
            manager.model_from_dict(data)
        assert excinfo.value.path == "splitting.pairs[0].points"

    def test_bad_transition(self, manager):
        data = json.loads(EPR_DOCUMENT)
        data["transitions"]["+,+"][0] = {"at": "0,-1"}
        with pytest.raises(ModelParseError):
            manager.model_from_dict(data)

    def test_duplicate_scenarios(self, manager):
        data = json.loads(EPR_DOCUMENT)
        data["scenarios"] = ["+-", "+-"]
        with pytest.raises(ModelParseError):
            manager.model_from_dict(data)

    def test_not_an_object(self, manager):
        with pytest.raises(ModelParseError):
            manager.parse_model("[1, 2]")


class TestRoundTrip:
    def test_explicit_model(self, manager, epr):
        model = manager.parse_model(manager.dump_model(epr.model))
        assert manager.dump_model(model) == manager.dump_model(epr.model)
        T = instance_from_model(model).transition_set("+,+")
        assert check_finfb(T).kind is FbKind.FINFB

    def test_indexed_model(self, manager, m2):
        """Named rules travel in the annotations."""
        instance = instance_from_model(manager.parse_model(manager.dump_model(m2.model)))
        assert check_inffb(instance.points, instance.rule("zeros")).kind is FbKind.INFFB

    def test_declared_limits(self, manager):
        instance = instance_from_model(manager.parse_model(manager.dump_model(gen_eps2d().model)))
        assert check_eps_fb(instance.points, instance.rule("f")).kind is FbKind.EPSFB

    def test_chain(self, manager):
        model = manager.parse_model(manager.dump_model(gen_imptop().model))
        assert not chain_compactness_witness(None, model, model.chains["z"]).compact

    def test_save_and_load(self, manager, lw1, tmp_path):
        path = tmp_path / "models" / "lw1.json"
        manager.save_model(lw1.model, path)
        assert validate(manager.load_model(path)).is_valid

    def test_missing_file(self, manager, tmp_path):
        with pytest.raises(FileNotFoundError):
            manager.load_model(tmp_path / "absent.json")


class TestCatalogConfig:
    def test_defaults_without_file(self, manager, tmp_path):
        config = manager.load_catalog_config(tmp_path / "absent.json")
        assert config["catalog"]["wrapped"] == {"n": 16}
        assert config["header_formatting"]["bold"] is True

    def test_invalid_file_falls_back(self, manager, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"header_formatting": {"font_color": "white"}}))
        config = manager.load_catalog_config(path)
        assert "epr-bohm" in config["catalog"]

    def test_custom_file(self, manager, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"catalog": {"lw1": {"n": 3}}}))
        assert manager.load_catalog_config(path)["catalog"] == {"lw1": {"n": 3}}

    @pytest.mark.parametrize("config", [
        {"catalog": []},
        {"catalog": {"lw1": 3}},
        {"header_formatting": {"alignment": "top"}},
        {"header_formatting": {"bold": "yes"}},
        {"header_formatting": {"font_color": "#FFFFFF"}},
        {"header_formatting": {"italic": True}},
        {"header_formatting": "bold"},
    ])
    def test_validation(self, manager, config):
        with pytest.raises(ValueError):
            manager.validate_catalog_config(config)

    def test_every_header_problem_is_reported(self):
        problems = header_problems({"bold": 1, "background_color": "36609", "alignment": "top"})
        assert len(problems) == 3
        assert any("alignment" in p and "left, center, right" in p for p in problems)
        assert header_problems({"background_color": "366092", "font_color": "ffffff"}) == []
