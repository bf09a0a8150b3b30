# render.py
from __future__ import annotations

from exact_arith import to_decimal
from iis_core import IISystem
from rauzy_engine import InductionTrace, reduced_sequence, replay

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"
"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="%(width).3f" height="%(height).3f" viewBox="0 0 %(width).3f %(height).3f" version="1.1"
    xmlns="http://www.w3.org/2000/svg">
<g transform="translate(%(trans_x).3f,%(trans_y).3f)">
<rect x="%(neg_trans_x).3f" y="%(neg_trans_y).3f" width="%(width).3f" height="%(height).3f" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</g></svg>
"""

COLORS = {"a": "#1f4e9c", "b": "#b5361c", "c": "#2d7a2d"}
FALLBACK_COLOR = "#555555"
# arc family per pair: a rectangular, b triangular, c circular
SHAPES = {"a": "rect", "b": "tri", "c": "circle"}
ARC_HEIGHT = {"a": 0.34, "b": 0.24, "c": 0.14}

ROW_HEIGHT = 90.0
DRAW_WIDTH = 600.0
ASCII_WIDTH = 60


class SVG:
    def __init__(self):
        self.min_x = None
        self.max_x = None
        self.min_y = None
        self.max_y = None
        self.commands = []

    def render(self) -> str:
        pad = 20.0
        width = self.max_x - self.min_x + pad * 2
        height = self.max_y - self.min_y + pad * 2
        trans_x = -self.min_x + pad
        trans_y = -self.min_y + pad
        neg_trans_x = -trans_x
        neg_trans_y = -trans_y
        return PREAMBLE % locals() + "".join(item + "\n" for item in self.commands) + POSTAMBLE

    def require(self, x, y):
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def line(self, points, color="#000000", width=1.0):
        for x, y in points:
            self.require(x, y)
        self.commands.append(
            '<polyline points="%s" style="fill:none;stroke:%s;stroke-width:%.2f" />'
            % (" ".join("%.3f,%.3f" % item for item in points), color, width)
        )

    def arc(self, x1, x2, y, color="#000000", width=1.0):
        r = abs(x2 - x1) / 2
        self.require(min(x1, x2), y - r)
        self.require(max(x1, x2), y)
        self.commands.append(
            '<path d="M %.3f %.3f A %.3f %.3f 0 0 1 %.3f %.3f" style="fill:none;stroke:%s;stroke-width:%.2f" />'
            % (x1, y, r, r, x2, y, color, width)
        )

    def text(self, x, y, text, color="#333333"):
        font_height = 10
        self.require(x, y - font_height)
        self.require(x + len(text) * font_height * 0.6, y)
        self.commands.append(
            '<text x="%.3f" y="%.3f" fill="%s" font-size="%d" font-family="monospace" xml:space="preserve">%s</text>'
            % (x, y, color, font_height, _escape(text))
        )


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def trace_rows(trace: InductionTrace) -> list[tuple[str, IISystem]]:
    """Initial system plus the system after each ordinary iteration."""
    rows = [("initial", trace.initial)]
    route = reduced_sequence(trace)
    cur = trace.initial
    for rec in trace.steps:
        cur = replay(cur, [rec])
        if rec.kind == "reduction":
            rows.append((route[len(rows) - 1], cur))
    return rows


def render_svg(trace: InductionTrace) -> str:
    origin = float(trace.initial.A)
    scale = DRAW_WIDTH / (float(trace.initial.B) - origin)

    def px(v) -> float:
        return round((float(v) - origin) * scale, 3)

    svg = SVG()
    for i, (caption, s) in enumerate(trace_rows(trace)):
        y = i * ROW_HEIGHT + ROW_HEIGHT * 0.6
        svg.text(-110.0, y, f"{i}: {caption}")
        svg.line([(px(s.A), y), (px(s.B), y)], "#000000", 1.5)
        for p in s.pairs:
            color = COLORS.get(p.label, FALLBACK_COLOR)
            h = ARC_HEIGHT.get(p.label, 0.1) * ROW_HEIGHT
            for iv in (p.left, p.right):
                svg.line([(px(iv.lo), y + 4), (px(iv.hi), y + 4)], color, 3.0)
            x1 = px((p.left.lo + p.left.hi) / 2)
            x2 = px((p.right.lo + p.right.hi) / 2)
            shape = SHAPES.get(p.label, "tri")
            if shape == "rect":
                svg.line([(x1, y), (x1, y - h), (x2, y - h), (x2, y)], color)
            elif shape == "circle" and x1 != x2:
                svg.arc(x1, x2, y, color)
            else:
                svg.line([(x1, y), ((x1 + x2) / 2, y - h), (x2, y)], color)
    return svg.render()


def render_ascii(trace: InductionTrace, width: int = ASCII_WIDTH) -> str:
    origin = float(trace.initial.A)
    scale = width / (float(trace.initial.B) - origin)

    def col(v) -> int:
        return int(round((float(v) - origin) * scale))

    lines = []
    for i, (caption, s) in enumerate(trace_rows(trace)):
        lines.append(f"{i:>3} {caption}  [{to_decimal(s.A, 3)}, {to_decimal(s.B, 3)}]")
        bar = [" "] * (width + 1)
        for k in range(col(s.A), col(s.B) + 1):
            bar[k] = "="
        lines.append("    " + "".join(bar).rstrip())
        for p in s.pairs:
            cells = [" "] * (width + 1)
            mark = p.label[:1] or "?"
            for iv in (p.left, p.right):
                for k in range(col(iv.lo), col(iv.hi) + 1):
                    cells[k] = mark
            lines.append(f"  {mark} " + "".join(cells).rstrip())
    return "\n".join(lines) + "\n"
