# cli/svg.py
"""
cli/svg.py
-------------------------------------------------
SVG drawings: polygons with labelled sides and pairing chords, and scar
graphs in a layered layout keyed by vertex ids (breadth-first layers from
the smallest id), so the same scar always gives the same picture.
"""

from typing import Dict, List, Optional, Tuple

import networkx as nx

from core.geometry import BoundaryPos, Polygon, boundary_point
from core.scar import PLANAR, SINGULAR, ScarGraph
from core.scheme import FoldingScheme

CANVAS = 480.0
MARGIN = 32.0
KIND_COLORS = {PLANAR: "#777777", SINGULAR: "#d33", "RegularVertex": "#225"}


def _header(width: float, height: float) -> List[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
    ]


def _frame(polygon: Polygon):
    xs = [float(v.x) for v in polygon.vertices]
    ys = [float(v.y) for v in polygon.vertices]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (CANVAS - 2 * MARGIN) / span
    x0, y1 = min(xs), max(ys)

    def to_svg(x, y) -> Tuple[float, float]:
        return MARGIN + (float(x) - x0) * scale, MARGIN + (y1 - float(y)) * scale

    return to_svg


def polygon_svg(polygon: Polygon, scheme: Optional[FoldingScheme] = None, component: int = 0) -> str:
    """The polygon outline, side labels at side midpoints, and one chord per pairing between segment midpoints."""
    to_svg = _frame(polygon)
    lines = _header(CANVAS, CANVAS)
    pts = " ".join("{:.6f},{:.6f}".format(*to_svg(v.x, v.y)) for v in polygon.vertices)
    lines.append(f'  <polygon points="{pts}" fill="#f4f1e8" stroke="black" stroke-width="1.5"/>')

    if scheme is not None:
        lines.append('  <g id="pairings" stroke="#36c" stroke-width="0.8" fill="none">')
        L = polygon.boundary_length
        for p in scheme.pairings:
            if p.seg_a.component != component or p.seg_b.component != component:
                continue
            a = boundary_point(polygon, BoundaryPos(component, p.seg_a.midpoint(L)))
            b = boundary_point(polygon, BoundaryPos(component, p.seg_b.midpoint(L)))
            (ax, ay), (bx, by) = to_svg(a.x, a.y), to_svg(b.x, b.y)
            lines.append(f'    <line x1="{ax:.6f}" y1="{ay:.6f}" x2="{bx:.6f}" y2="{by:.6f}"/>')
        lines.append("  </g>")

    if polygon.labels:
        lines.append('  <g id="labels" font-family="sans-serif" font-size="11" fill="#333">')
        for i, label in enumerate(polygon.labels):
            a, b = polygon.side(i)
            x, y = to_svg((a.x + b.x) / 2, (a.y + b.y) / 2)
            lines.append(f'    <text x="{x:.6f}" y="{y:.6f}">{label}</text>')
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def layered_layout(scar: ScarGraph) -> Dict[object, Tuple[float, float]]:
    """Vertex positions: x by BFS layer from the smallest id of each component, y by rank in the layer."""
    g = scar.graph
    order = sorted(g.nodes, key=str)
    layers: Dict[int, List[object]] = {}
    seen = set()
    base = 0
    for root in order:
        if root in seen:
            continue
        depth = nx.single_source_shortest_path_length(g, root)
        for node, d in depth.items():
            seen.add(node)
            layers.setdefault(base + d, []).append(node)
        base += max(depth.values()) + 1
    width = max(len(layers) - 1, 1)
    pos = {}
    for layer, nodes in layers.items():
        nodes.sort(key=str)
        for k, node in enumerate(nodes):
            x = MARGIN + (CANVAS - 2 * MARGIN) * layer / width
            y = MARGIN + (CANVAS - 2 * MARGIN) * (k + 1) / (len(nodes) + 1)
            pos[node] = (x, y)
    return pos


def scar_svg(scar: ScarGraph) -> str:
    pos = layered_layout(scar)
    lines = _header(CANVAS, CANVAS)
    lines.append('  <g id="edges" stroke="#555" stroke-width="1">')
    for e in sorted(scar.edges.values(), key=lambda e: e.id):
        (x1, y1), (x2, y2) = pos[e.u], pos[e.v]
        lines.append(f'    <line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}">'
                     f'<title>{float(e.length):.6g}</title></line>')
    lines.append("  </g>")
    if scar.stars:
        lines.append('  <g id="stars" stroke="#d33" stroke-width="0.6">')
        for star in scar.stars:
            x, y = pos[star.center]
            for k in range(8):
                dx = 18.0 * (0.5 ** (k // 2)) * (1 if k % 2 == 0 else -1)
                lines.append(f'    <line x1="{x:.6f}" y1="{y:.6f}" x2="{x + dx:.6f}" y2="{y - 14.0 + 4.0 * k:.6f}"/>')
        lines.append("  </g>")
    lines.append('  <g id="vertices" font-family="sans-serif" font-size="9">')
    for vid in sorted(pos, key=str):
        x, y = pos[vid]
        kind = scar.vertices[vid].kind if vid in scar.vertices else PLANAR
        lines.append(f'    <circle cx="{x:.6f}" cy="{y:.6f}" r="3" fill="{KIND_COLORS.get(kind, "#225")}">'
                     f'<title>{vid}</title></circle>')
    lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


__all__ = ["polygon_svg", "scar_svg", "layered_layout"]
