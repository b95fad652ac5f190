"""SVG rendering of scenes, sample points and paths."""
from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

ZERO_FILL = "#cfe8ff"
OBSTACLE_FILL = "#404040"
MEDIUM_STROKE = {"plane": "#d62728", "zero": "#2ca02c", "boundary": "#ff7f0e"}


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _points_attr(pts) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)


def render(scene, path=None, samples=None, *, size: int = 800, extra_points=()) -> str:
    """SVG text for ``scene`` with an optional realized path and sample points."""
    pts = [p for p in extra_points]
    if path is not None:
        pts += [tuple(path.source), tuple(path.target)]
    x0, y0, x1, y1 = scene.bbox(pts)
    span = max(x1 - x0, y1 - y0, 1e-9)
    pad = 0.05 * span
    x0, y0, span = x0 - pad, y0 - pad, span + 2 * pad
    scale = size / span

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(size), height=str(size),
                     viewBox=f"0 0 {size} {size}")
    # flip y so the picture matches the usual axes
    g = ET.SubElement(svg, "g", transform=f"translate(0,{size}) scale({_fmt(scale)},{_fmt(-scale)}) "
                                          f"translate({_fmt(-x0)},{_fmt(-y0)})")
    lw = _fmt(1.5 / scale)
    for r in scene.regions:
        outline = r.shape.outline()
        fill = OBSTACLE_FILL if r.is_obstacle else ZERO_FILL
        if len(outline) >= 3:
            ET.SubElement(g, "polygon", points=_points_attr(outline), fill=fill,
                          stroke="#000000", **{"stroke-width": lw})
        else:
            ET.SubElement(g, "polyline", points=_points_attr(outline), fill="none", stroke=fill,
                          **{"stroke-width": _fmt(4 / scale)})
    if samples is not None:
        rad = _fmt(2.0 / scale)
        for x, y in np.asarray(samples, float).reshape(-1, 2):
            ET.SubElement(g, "circle", cx=_fmt(x), cy=_fmt(y), r=rad, fill="#1f77b4")
    if path is not None:
        for seg in path.segments:
            ET.SubElement(g, "polyline", points=_points_attr(seg.points), fill="none",
                          stroke=MEDIUM_STROKE.get(seg.medium, "#000000"),
                          **{"stroke-width": _fmt(3 / scale)})
        rad = _fmt(4.0 / scale)
        for p in (path.source, path.target):
            ET.SubElement(g, "circle", cx=_fmt(p[0]), cy=_fmt(p[1]), r=rad, fill="#000000")
    return ET.tostring(svg, encoding="unicode")


def write(filename, scene, path=None, samples=None, **kw) -> None:
    with open(filename, "w", encoding="utf-8") as fh:
        fh.write(render(scene, path, samples, **kw))
        fh.write("\n")
