"""
End-to-end tests of the command line.
"""

import json

import pytest

from cli.controllers.main_controller import parse_params
from core.descriptors import ConeSequence
from core.errors import DomainError
from core.report_writer import parse_certificate
from main import run

E1, E2 = "0,-1@+-", "0,1@+-"


class TestDetectors:
    def test_finfb(self, capsys):
        assert run(["finfb", "--catalog", "epr-bohm", "--f", "+,+"]) == 0
        certificate = parse_certificate(capsys.readouterr().out)
        assert certificate["verdict"] == "FINFB"
        assert certificate["rechecked"] is True

    def test_leading_dash_rule(self, capsys):
        assert run(["finfb", "--catalog", "epr-bohm", "--f=-,-"]) == 0
        assert parse_certificate(capsys.readouterr().out)["verdict"] == "FINFB"

    def test_no_funny_business(self, capsys):
        assert run(["finfb", "--catalog", "epr-bohm", "--f", "+,-"]) == 0
        assert parse_certificate(capsys.readouterr().out)["verdict"] == "NONE"

    def test_inffb_on_symbolic_family(self, capsys):
        assert run(["inffb", "--catalog", "m2", "--f", "zeros"]) == 0
        assert parse_certificate(capsys.readouterr().out)["verdict"] == "INFFB"

    @pytest.mark.parametrize("argv", [
        ["finfb", "--catalog", "epr-bohm", "--f", "+,+"],
        ["finfb", "--catalog", "m2", "--param", "n=6", "--f", "zeros", "--no-prune"],
    ])
    def test_jobs_do_not_change_the_output(self, capsys, argv):
        assert run(argv + ["--jobs", "1"]) == 0
        serial = capsys.readouterr().out
        assert run(argv + ["--jobs", "4"]) == 0
        assert capsys.readouterr().out == serial

    def test_unknown_rule(self, capsys):
        assert run(["finfb", "--catalog", "epr-bohm", "--f", "0,0"]) == 1
        assert "Known:" in capsys.readouterr().err


class TestModelVerbs:
    def test_slr(self, capsys):
        assert run(["slr", "--catalog", "epr-bohm", "--a", E1, "--b", E2]) == 0
        assert parse_certificate(capsys.readouterr().out)["slr"] is True

    def test_order(self, capsys):
        assert run(["order", "--catalog", "epr-bohm", "--a", E1, "--b", E2]) == 0
        out = capsys.readouterr().out
        assert "incomparable with" in out

    def test_event_needs_a_scenario(self, capsys):
        assert run(["order", "--catalog", "epr-bohm", "--a", "0,-1", "--b", E2]) == 1

    def test_chain(self, capsys):
        assert run(["chain", "--catalog", "imptop", "--chain", "z"]) == 0
        assert "all-zeros sequence required" in capsys.readouterr().out

    def test_subject_required(self, capsys):
        assert run(["validate"]) == 1
        assert "--catalog NAME" in capsys.readouterr().err


class TestFiles:
    def test_gen_then_validate(self, tmp_path, capsys):
        path = tmp_path / "lw1.json"
        assert run(["catalog", "gen", "lw1", "--output", str(path)]) == 0
        assert path.exists()
        capsys.readouterr()
        assert run(["validate", str(path)]) == 0
        assert parse_certificate(capsys.readouterr().out)["valid"] is True

    def test_gen_to_stdout(self, capsys):
        assert run(["catalog", "gen", "epr-bohm"]) == 0
        assert json.loads(capsys.readouterr().out)["name"] == "epr-bohm"

    def test_bad_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "name": ,\n}')
        assert run(["validate", str(path)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["validate", str(tmp_path / "absent.json")]) == 1

    def test_unknown_catalog_entry(self, capsys):
        assert run(["validate", "--catalog", "nope"]) == 1
        assert "epr-bohm" in capsys.readouterr().err

    def test_plot_needs_a_planar_model(self, capsys):
        assert run(["plot", "--catalog", "wrapped"]) == 2

    def test_plot_to_stdout(self, capsys):
        assert run(["plot", "--catalog", "lw1"]) == 0
        assert capsys.readouterr().out.startswith('<?xml version="1.0" encoding="UTF-8"?>')

    def test_catalog_check(self, tmp_path, capsys):
        path = tmp_path / "verdicts.xlsx"
        assert run(["catalog", "check", "lw1", "--xlsx", str(path)]) == 0
        out = capsys.readouterr().out
        assert "3 of 3 expected verdicts reproduced" in out
        assert path.exists()

    def test_bad_arguments(self):
        assert run(["finfb", "--jobs", "many"]) == 1

    def test_parameter_of_wrong_type(self, capsys):
        assert run(["catalog", "gen", "wrapped", "--param", "n=abc"]) == 1
        assert "takes int" in capsys.readouterr().err

    def test_surrogate_failure(self, monkeypatch, capsys):
        monkeypatch.setattr(ConeSequence, "verify", lambda self, n: {"separation": False})
        assert run(["catalog", "gen", "wrapped"]) == 2
        assert "separation" in capsys.readouterr().err


class TestParseParams:
    def test_conversion(self):
        assert parse_params(["n=3", "family=all-strings(4)", "seed=none"]) == {
            "n": 3, "family": "all-strings(4)", "seed": None}

    def test_malformed(self):
        with pytest.raises(DomainError):
            parse_params(["n"])
