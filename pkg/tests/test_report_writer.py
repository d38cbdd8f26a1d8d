"""
Tests for certificate text and verdict workbooks.
"""

from fractions import Fraction

import pandas as pd
import pytest
from openpyxl import load_workbook

from core.geometry import Point4
from core.report_writer import (
    HeaderStyle, ReportWriter, certificate_json, column_width, format_certificate,
    parse_certificate, verdict_frame
)


class TestCertificates:
    def test_block_reads_back(self):
        text = format_certificate({"b": Fraction(1, 2), "a": Point4(0, 1)}, "done")
        assert text.splitlines()[-1] == "done"
        assert parse_certificate(text) == {"a": "0,1,0,0", "b": "1/2"}

    def test_keys_are_sorted(self):
        """Identical certificates print identically whatever the insertion order."""
        assert certificate_json({"b": 1, "a": 2}) == certificate_json({"a": 2, "b": 1})
        assert certificate_json({"s": frozenset({"y", "x"})}) == '{\n  "s": [\n    "x",\n    "y"\n  ]\n}'

    def test_no_block(self):
        with pytest.raises(ValueError):
            parse_certificate("nothing here")


class TestVerdictFrame:
    def test_missing_columns_are_blank(self):
        frame = verdict_frame([{"subject": "m2", "check": "inffb", "verdict": "INFFB", "rule": "zeros"}])
        assert list(frame.columns) == ["subject", "check", "verdict", "summary", "rule"]
        assert frame.loc[0, "summary"] == ""


class TestReportWriter:
    def test_formatted_workbook(self, tmp_path):
        df = pd.DataFrame([{"entry": "epr-bohm", "check": "validate", "passed": True}])
        path = tmp_path / "out" / "verdicts.xlsx"
        ReportWriter().save_verdict_table(df, path)
        ws = load_workbook(path).active
        assert ws.cell(row=1, column=1).value == "entry"
        assert ws.cell(row=2, column=3).value == "True"
        assert ws.cell(row=1, column=1).font.bold
        assert ws.freeze_panes == "A2"
        assert ws.column_dimensions["A"].width == 10

    def test_custom_header(self, tmp_path):
        df = pd.DataFrame([{"entry": "lw1"}])
        path = tmp_path / "verdicts.xlsx"
        ReportWriter({"bold": False, "alignment": "left"}).save_verdict_table(df, path)
        cell = load_workbook(path).active.cell(row=1, column=1)
        assert not cell.font.bold
        assert cell.alignment.horizontal == "left"

    def test_failed_rows_are_marked(self, tmp_path):
        df = pd.DataFrame([{"entry": "lw1", "check": "validate", "passed": True},
                           {"entry": "lw1", "check": "origin generated", "passed": False}])
        path = tmp_path / "verdicts.xlsx"
        ReportWriter().save_verdict_table(df, path)
        ws = load_workbook(path).active
        assert ws.cell(row=3, column=2).font.color.rgb == "00C00000"
        assert getattr(ws.cell(row=2, column=2).font.color, "rgb", None) != "00C00000"


class TestHeaderStyle:
    def test_defaults_fill_missing_settings(self):
        style = HeaderStyle.from_config({"alignment": "right"})
        assert style.font.bold
        assert style.fill.start_color.rgb == "00366092"
        assert style.alignment.horizontal == "right"

    def test_column_width_limits(self):
        assert column_width("n", pd.Series(["1"])) == 10
        assert column_width("summary", pd.Series(["x" * 200])) == 60
        assert column_width("check", pd.Series(["postulate-a zeros"])) == 19
