"""Static SVG plots rendered from report dicts.

Every plot is a function of report contents only, so re-rendering a saved
report reproduces the files byte for byte.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET

SIZE = 400
MARGIN = 20
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


class _Canvas:
    """Maps plane coordinates into a square pixel box, y up."""

    def __init__(self, points, title: str = ""):
        xs = [p[0] for p in points] or [0.0]
        ys = [p[1] for p in points] or [0.0]
        lo = min(min(xs), min(ys))
        hi = max(max(xs), max(ys))
        span = (hi - lo) or 1.0
        self.lo, self.scale = lo, (SIZE - 2 * MARGIN) / span
        self.root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", version="1.1",
                               width=str(SIZE), height=str(SIZE),
                               viewBox=f"0 0 {SIZE} {SIZE}")
        ET.SubElement(self.root, "rect", x="0", y="0", width=str(SIZE), height=str(SIZE),
                      fill="white")
        if title:
            t = ET.SubElement(self.root, "text", x="6", y="14", fill="black")
            t.set("font-size", "11")
            t.text = title

    def xy(self, p):
        return (MARGIN + (p[0] - self.lo) * self.scale,
                SIZE - MARGIN - (p[1] - self.lo) * self.scale)

    def polygon(self, pts, stroke, dash=None, width="1.5"):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(self.xy, pts))
        el = ET.SubElement(self.root, "polygon", points=coords, fill="none", stroke=stroke)
        el.set("stroke-width", width)
        if dash:
            el.set("stroke-dasharray", dash)

    def dot(self, p, fill, r="2"):
        x, y = self.xy(p)
        ET.SubElement(self.root, "circle", cx=_fmt(x), cy=_fmt(y), r=r, fill=fill)

    def line(self, a, b, stroke, dash=None):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        el = ET.SubElement(self.root, "line", x1=_fmt(x1), y1=_fmt(y1), x2=_fmt(x2),
                           y2=_fmt(y2), stroke=stroke)
        if dash:
            el.set("stroke-dasharray", dash)

    def tostring(self) -> str:
        return ET.tostring(self.root, encoding="unicode") + "\n"


def overlay_svg(lhs, rhs, title: str = "") -> str:
    """Dual section (solid) over planar dual of the shadow (dashed)."""
    c = _Canvas(list(lhs) + list(rhs), title)
    c.polygon(lhs, PALETTE[0], width="2.5")
    c.polygon(rhs, PALETTE[1], dash="5,4")
    return c.tostring()


def polygon_svg(vertices, title: str = "") -> str:
    c = _Canvas(list(vertices), title)
    if len(vertices) >= 2:
        c.polygon(vertices, PALETTE[0])
    for v in vertices:
        c.dot(v, PALETTE[0])
    return c.tostring()


def clusters_svg(centers, title: str = "") -> str:
    """Cluster centres of sampled support points, one colour per cluster."""
    c = _Canvas(list(centers), title)
    for i, p in enumerate(centers):
        c.dot(p, PALETTE[i % len(PALETTE)], r="3")
    return c.tostring()


def mirkil_svg(points, title: str = "projection of the Mirkil cone") -> str:
    """Sampled projections, the excluded boundary ray ``b = 0`` (dashed) and
    the included origin."""
    pts = list(points)
    box = pts + [[-1.0, 0.0], [1.0, 0.0]]
    c = _Canvas(box, title)
    xs = [p[0] for p in box]
    for p in pts:
        c.dot(p, PALETTE[0], r="1")
    c.line([min(xs), 0.0], [max(xs), 0.0], PALETTE[1], dash="4,3")
    c.dot([0.0, 0.0], "black", r="4")
    return c.tostring()


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "_", str(text)).strip("_")


def render_report_svgs(report: dict) -> dict[str, str]:
    """File name -> SVG text for every plot a report supports."""
    out: dict[str, str] = {}
    cmd = report.get("command")
    if cmd == "mirkil":
        out["mirkil.svg"] = mirkil_svg(report["result"]["projection_preview"])
        return out
    for row in report.get("results", []):
        stem = f"{_slug(row.get('body', 'body'))}_p{row.get('plane', 0)}"
        if "lhs_vertices" in row and "rhs_vertices" in row:
            out[f"prop1_{stem}.svg"] = overlay_svg(row["lhs_vertices"], row["rhs_vertices"],
                                                   f"{row.get('body')} plane {row.get('plane')}")
        elif row.get("cluster_centers"):
            out[f"clusters_{stem}.svg"] = clusters_svg(row["cluster_centers"], stem)
        elif "polygon" in row:
            out[f"{cmd}_{stem}.svg"] = polygon_svg(row["polygon"], stem)
    return out
