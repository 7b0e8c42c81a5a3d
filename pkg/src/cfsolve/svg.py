"""Planar SVG rendering of a subdivision run."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .homography import DomainBox

__all__ = ["SvgPlot", "render_run"]

_STYLE = """
  .domain { fill: #ffffff; stroke: #222222; stroke-width: 1.5; }
  .excluded { fill: #e8e8e8; stroke: #b0b0b0; stroke-width: 0.4; }
  .kept { fill: #ffd9a0; stroke: #c07000; stroke-width: 0.6; }
  .solution { fill: #d62728; fill-opacity: 0.55; stroke: #8b0000; stroke-width: 0.8; }
  text { font-family: sans-serif; font-size: 11px; fill: #333333; }
"""


class SvgPlot:
    """Accumulates axis-aligned rectangles in problem coordinates."""

    def __init__(self, extent: Sequence[tuple], size: int = 600, margin: int = 30):
        (self.x0, self.x1), (self.y0, self.y1) = [(float(a), float(b)) for a, b in extent]
        if self.x1 <= self.x0 or self.y1 <= self.y0:
            raise ValueError("degenerate plot extent")
        self.size = size
        self.margin = margin
        self.items: list[str] = []

    def _x(self, v) -> float:
        v = min(max(float(v), self.x0), self.x1)
        return self.margin + (v - self.x0) / (self.x1 - self.x0) * self.size

    def _y(self, v) -> float:
        v = min(max(float(v), self.y0), self.y1)
        return self.margin + (self.y1 - v) / (self.y1 - self.y0) * self.size

    def rect(self, box: DomainBox, cls: str, title: str | None = None):
        (xl, xh), (yl, yh) = box[0], box[1]
        x, y = self._x(xl), self._y(yh)
        w = max(self._x(xh) - x, 0.5)
        h = max(self._y(yl) - y, 0.5)
        body = f"<title>{title}</title>" if title else ""
        self.items.append(
            f'<rect class="{cls}" x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}">{body}</rect>'
            if body
            else f'<rect class="{cls}" x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}"/>'
        )

    def text(self, x: float, y: float, s: str, anchor: str = "middle"):
        self.items.append(f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="{anchor}">{s}</text>')

    def to_string(self) -> str:
        full = self.size + 2 * self.margin
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{full}" height="{full}" '
            f'viewBox="0 0 {full} {full}">\n<style>{_STYLE}</style>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _extent(domain: DomainBox, boxes: Iterable[DomainBox]) -> list[tuple]:
    ext = []
    for k, (lo, hi) in enumerate(domain):
        if hi != math.inf:
            ext.append((lo, hi))
            continue
        top = lo + 1
        for b in boxes:
            for v in b[k]:
                if v != math.inf:
                    top = max(top, v)
        ext.append((lo, top + (top - lo) / 10))
    return ext


def _label(v) -> str:
    v = Fraction(v)
    return str(v) if v.denominator == 1 else f"{float(v):.4g}"


def render_run(
    domain: DomainBox,
    excluded: Sequence[DomainBox],
    kept: Sequence[DomainBox],
    solutions: Sequence[DomainBox],
    size: int = 600,
) -> str:
    """SVG with the domain, excluded and unresolved boxes and the isolating boxes.

    Each isolating box is drawn as exactly one ``rect`` of class ``solution``.
    """
    if domain.nvars != 2:
        raise ValueError("SVG output is only available for two variables")
    ext = _extent(domain, list(excluded) + list(kept) + list(solutions))
    plot = SvgPlot(ext, size=size)
    plot.rect(DomainBox(ext), "domain")
    for b in excluded:
        plot.rect(b, "excluded")
    for b in kept:
        plot.rect(b, "kept")
    for b in solutions:
        plot.rect(b, "solution", title=str(b))
    m = plot.margin
    plot.text(m, m + size + 18, _label(ext[0][0]), "start")
    plot.text(m + size, m + size + 18, _label(ext[0][1]), "end")
    plot.text(m - 4, m + size, _label(ext[1][0]), "end")
    plot.text(m - 4, m + 10, _label(ext[1][1]), "end")
    return plot.to_string()
