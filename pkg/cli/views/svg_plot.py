#!/usr/bin/env python3
"""
Static SVG diagrams of 2D-embedded models.

Time runs upward, x1 to the right, with one scale on both axes so light-cone
lines stay at 45 degrees. Output depends only on the model.
"""

import logging
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path
from typing import List, Tuple

from config.settings import (
    SVG_CHAIN_SAMPLES, SVG_COLORS, SVG_EMPTY_EXTENT, SVG_HEIGHT, SVG_MARGIN, SVG_MARK_RADIUS,
    SVG_PRECISION, SVG_WIDTH
)
from core.errors import UnsupportedError
from core.geometry import Point4
from core.mbs_model import MbsModel

SVG_NS = "http://www.w3.org/2000/svg"


class SvgPlotter:
    """Renders splitting points, their future light cones, declared limits and chains."""

    def __init__(self, model: MbsModel):
        if not model.is_2d:
            raise UnsupportedError(f"Model '{model.name}' is not 2D-embedded (x2 = x3 = 0)")
        self.model = model
        self.logger = logging.getLogger(__name__)
        self.marks = sorted(set(model.splitting.all_points()))
        self.limits = sorted({d.limit for d in model.splitting.all_limits()})
        self.chains = [(name, model.chains[name].sample_points(SVG_CHAIN_SAMPLES))
                       for name in sorted(model.chains)]
        self._frame()

    def _frame(self):
        points = self.marks + self.limits + [p for _, pts in self.chains for p in pts]
        if not points:
            e = Fraction(SVG_EMPTY_EXTENT)
            self.t_min, self.t_max, self.x_min, self.x_max = -e, e, -e, e
        else:
            pad = Fraction(1, 2)
            self.t_min = min(p.t for p in points) - pad
            self.t_max = max(p.t for p in points) + 2 * pad
            self.x_min = min(p.x1 for p in points) - pad
            self.x_max = max(p.x1 for p in points) + pad
        self.scale = min(Fraction(SVG_WIDTH - 2 * SVG_MARGIN) / (self.x_max - self.x_min),
                         Fraction(SVG_HEIGHT - 2 * SVG_MARGIN) / (self.t_max - self.t_min))

    def _xy(self, x: Fraction, t: Fraction) -> Tuple[str, str]:
        sx = SVG_MARGIN + (x - self.x_min) * self.scale
        sy = SVG_HEIGHT - SVG_MARGIN - (t - self.t_min) * self.scale
        return self._num(sx), self._num(sy)

    @staticmethod
    def _num(value: Fraction) -> str:
        return f"{float(value):.{SVG_PRECISION}f}"

    def _line(self, parent, a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction],
              kind: str, dashed: bool = False):
        x1, y1 = self._xy(*a)
        x2, y2 = self._xy(*b)
        attrs = {"class": kind, "x1": x1, "y1": y1, "x2": x2, "y2": y2,
                 "stroke": SVG_COLORS[kind], "stroke-width": "1"}
        if dashed:
            attrs["stroke-dasharray"] = "4 3"
        ET.SubElement(parent, "line", attrs)

    def _cone(self, parent, p: Point4):
        right = min(self.t_max - p.t, self.x_max - p.x1)
        left = min(self.t_max - p.t, p.x1 - self.x_min)
        self._line(parent, (p.x1, p.t), (p.x1 + right, p.t + right), "cone", dashed=True)
        self._line(parent, (p.x1, p.t), (p.x1 - left, p.t + left), "cone", dashed=True)

    def render(self) -> str:
        """The SVG document as text."""
        root = ET.Element("svg", {"xmlns": SVG_NS, "version": "1.1",
                                  "width": str(SVG_WIDTH), "height": str(SVG_HEIGHT),
                                  "viewBox": f"0 0 {SVG_WIDTH} {SVG_HEIGHT}"})
        ET.SubElement(root, "title").text = self.model.name

        axes = ET.SubElement(root, "g", {"id": "axes"})
        if self.t_min <= 0 <= self.t_max:
            self._line(axes, (self.x_min, Fraction(0)), (self.x_max, Fraction(0)), "axis")
        if self.x_min <= 0 <= self.x_max:
            self._line(axes, (Fraction(0), self.t_min), (Fraction(0), self.t_max), "axis")

        cones = ET.SubElement(root, "g", {"id": "cones"})
        for p in self.marks:
            self._cone(cones, p)

        chains = ET.SubElement(root, "g", {"id": "chains"})
        for name, pts in self.chains:
            coords = " ".join(",".join(self._xy(p.x1, p.t)) for p in pts)
            ET.SubElement(chains, "polyline", {"class": "chain", "points": coords, "fill": "none",
                                               "stroke": SVG_COLORS["chain"], "stroke-width": "1.5"})
            if pts:
                x, y = self._xy(pts[-1].x1, pts[-1].t)
                label = ET.SubElement(chains, "text", {"x": x, "y": y, "font-size": "11",
                                                       "fill": SVG_COLORS["text"]})
                label.text = name

        marks = ET.SubElement(root, "g", {"id": "splitting"})
        for p in self.marks:
            cx, cy = self._xy(p.x1, p.t)
            ET.SubElement(marks, "circle", {"class": "split", "cx": cx, "cy": cy,
                                            "r": str(SVG_MARK_RADIUS), "fill": SVG_COLORS["split"]})

        limits = ET.SubElement(root, "g", {"id": "limits"})
        for p in self.limits:
            cx, cy = self._xy(p.x1, p.t)
            ET.SubElement(limits, "circle", {"class": "limit", "cx": cx, "cy": cy,
                                             "r": str(SVG_MARK_RADIUS + 2), "fill": "none",
                                             "stroke": SVG_COLORS["limit"]})
            label = ET.SubElement(limits, "text", {"x": cx, "y": cy, "dx": "6", "dy": "-6",
                                                   "font-size": "11", "fill": SVG_COLORS["limit"]})
            label.text = f"limit ({p.to_text()})"

        ET.indent(root)
        return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"

    def save(self, output_path: Path):
        """Write the document to output_path."""
        try:
            self.logger.info(f"Saving plot to: {output_path}")
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_text(self.render(), encoding="utf-8")
        except Exception as e:
            self.logger.error(f"Error saving plot: {str(e)}")
            raise

    def mark_count(self) -> int:
        return len(self.marks)

    def chain_points(self) -> List[Tuple[str, List[Point4]]]:
        return list(self.chains)
