#!/usr/bin/env python3
"""
Certificate text and verdict tables.

A certificate is printed as sorted-key JSON between two marker lines and is
followed by the one-line summary. Verdict tables are pandas DataFrames that
can be exported to a formatted workbook.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import pandas as pd
from openpyxl import load_workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils import get_column_letter

from config.settings import (
    CERTIFICATE_BEGIN, CERTIFICATE_END, CERTIFICATE_INDENT, REPORT_FAILED_FONT_COLOR,
    REPORT_HEADER_FORMATTING, REPORT_MAX_COLUMN_WIDTH, REPORT_MIN_COLUMN_WIDTH
)
from core.geometry import Point4, format_rational

VERDICT_COLUMNS = ["subject", "check", "verdict", "summary"]


def _json_default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Point4):
        return value.to_text()
    if isinstance(value, (set, frozenset)):
        return sorted(str(v) for v in value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


def certificate_json(certificate: Dict[str, Any]) -> str:
    return json.dumps(certificate, indent=CERTIFICATE_INDENT, sort_keys=True,
                      ensure_ascii=False, default=_json_default)


def format_certificate(certificate: Dict[str, Any], summary: str) -> str:
    """Certificate block followed by the summary line."""
    return "\n".join([CERTIFICATE_BEGIN, certificate_json(certificate), CERTIFICATE_END, summary])


def parse_certificate(text: str) -> Dict[str, Any]:
    """Read back the JSON between the certificate markers."""
    lines = text.splitlines()
    try:
        begin = lines.index(CERTIFICATE_BEGIN)
        end = lines.index(CERTIFICATE_END, begin)
    except ValueError:
        raise ValueError("Text holds no certificate block")
    return json.loads("\n".join(lines[begin + 1:end]))


def verdict_frame(rows: Iterable[Dict[str, Any]], columns: Optional[list] = None) -> pd.DataFrame:
    """One row per verdict; missing columns are left blank."""
    columns = columns or VERDICT_COLUMNS
    frame = pd.DataFrame(list(rows))
    for column in columns:
        if column not in frame.columns:
            frame[column] = ""
    extra = [c for c in frame.columns if c not in columns]
    return frame[columns + extra]


@dataclass(frozen=True)
class HeaderStyle:
    """openpyxl styles for the header row, built from a header_formatting block."""

    font: Font
    fill: PatternFill
    alignment: Alignment

    @classmethod
    def from_config(cls, header_formatting: Optional[Dict[str, Any]] = None) -> "HeaderStyle":
        settings = {**REPORT_HEADER_FORMATTING, **(header_formatting or {})}
        background = settings["background_color"]
        return cls(Font(bold=settings["bold"], color=settings["font_color"]),
                   PatternFill(fill_type="solid", start_color=background, end_color=background),
                   Alignment(horizontal=settings["alignment"], vertical="center"))


def column_width(name: Any, values: pd.Series) -> int:
    """Widest of the header and the first 100 values, plus padding, within the report limits."""
    widest = max([len(str(name))] + [len(str(v)) for v in values.head(100)])
    return min(max(widest + 2, REPORT_MIN_COLUMN_WIDTH), REPORT_MAX_COLUMN_WIDTH)


class ReportWriter:
    """Writes verdict tables to formatted workbooks."""

    def __init__(self, header_formatting: Optional[Dict[str, Any]] = None):
        self.logger = logging.getLogger(__name__)
        self.header_style = HeaderStyle.from_config(header_formatting)
        self.failed_font = Font(color=REPORT_FAILED_FONT_COLOR)

    def save_verdict_table(self, df: pd.DataFrame, output_path: Path):
        """
        Save a verdict table to Excel with formatting applied.

        Args:
            df: Verdict table
            output_path: Output .xlsx path
        """
        try:
            self.logger.info(f"Saving verdict table to: {output_path}")

            output_path.parent.mkdir(parents=True, exist_ok=True)
            df.astype(str).to_excel(output_path, index=False, engine="openpyxl")

            try:
                self.style_verdict_sheet(output_path, df)
            except Exception as e:
                self.logger.warning(f"Excel formatting failed, but file was saved: {str(e)}")

            self.logger.info("Verdict table saved successfully")

        except Exception as e:
            self.logger.error(f"Error saving verdict table: {str(e)}")
            raise

    def style_verdict_sheet(self, output_path: Path, df: pd.DataFrame):
        """Header style and column widths; rows of checks that did not reproduce are set in red."""
        wb = load_workbook(output_path)
        ws = wb.active
        style = self.header_style
        for col_idx, name in enumerate(df.columns, 1):
            header = ws.cell(row=1, column=col_idx)
            header.font, header.fill, header.alignment = style.font, style.fill, style.alignment
            ws.column_dimensions[get_column_letter(col_idx)].width = column_width(name, df[name])
        if "passed" in df.columns:
            failed = [row for row, passed in enumerate(df["passed"], 2) if not passed]
            for row in failed:
                for col_idx in range(1, len(df.columns) + 1):
                    ws.cell(row=row, column=col_idx).font = self.failed_font
            self.logger.debug(f"{len(failed)} failed verdict row(s) marked")
        ws.freeze_panes = "A2"
        wb.save(output_path)
