# core/geometry.py
"""
core/geometry.py
-------------------------------------------------
Polygons, boundary arc-length coordinates and intrinsic distances.

Combinatorial predicates (orientation, incidence, self-intersection) are
decided exactly: Fraction coordinates as they are, float coordinates via
the exact rational value of the binary float. Only angles and geodesic
lengths through reflex vertices are floating point.
"""

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Tuple

import networkx as nx
from shapely.geometry import LineString
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon as ShapelyPolygon

from core.errors import (
    DegenerateVertex,
    DifferentComponents,
    NotCounterclockwise,
    OutOfRange,
    PointOutside,
    SelfIntersecting,
)
from core.numeric import Number, as_fraction, is_exact, sqrt_number

# relative threshold for collinearity in float mode
FLOAT_DEGENERACY = 1e-12
# shapely containment slack for points on the boundary
COVER_EPS = 1e-9


@dataclass(frozen=True)
class Point:
    x: Number
    y: Number

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, k) -> "Point":
        return Point(self.x * k, self.y * k)

    def as_tuple(self) -> Tuple[float, float]:
        return float(self.x), float(self.y)


@dataclass(frozen=True)
class BoundaryPos:
    component: int
    t: Number


@dataclass(frozen=True)
class BoundarySegment:
    """Arc [start.t, start.t + length] of one boundary component, taken mod its length."""

    start: BoundaryPos
    length: Number

    @property
    def component(self) -> int:
        return self.start.component

    @property
    def t0(self) -> Number:
        return self.start.t

    @property
    def t1(self) -> Number:
        return self.start.t + self.length

    def midpoint(self, boundary_length: Optional[Number] = None) -> Number:
        m = self.start.t + self.length / 2
        return m % boundary_length if boundary_length is not None else m


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _orient(p, q, r) -> int:
    """Sign of the turn p->q->r, exact on Fractions."""
    v = _cross(q[0] - p[0], q[1] - p[1], r[0] - p[0], r[1] - p[1])
    return (v > 0) - (v < 0)


def _on_segment(p, q, r) -> bool:
    # r collinear with pq: inside the bounding box
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def segments_intersect(p1, p2, q1, q2) -> bool:
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4 and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_segment(q1, q2, p2):
        return True
    return False


@dataclass(frozen=True)
class Polygon:
    """
    Simple, counterclockwise polygon.

    Attributes:
        vertices: counterclockwise vertex list
        side_lengths: |v_i v_{i+1}|, Fraction when the square root is rational
        boundary_length: sum of side_lengths
        semi_angles: half of each internal angle, radians
        offsets: arc-length parameter of each vertex, offsets[0] == 0
        labels: optional side names (e.g. "V0", "H0" for the NBT family)
    """

    vertices: Tuple[Point, ...]
    side_lengths: Tuple[Number, ...]
    boundary_length: Number
    semi_angles: Tuple[float, ...]
    offsets: Tuple[Number, ...]
    exact: bool = True
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def side(self, i: int) -> Tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.size]

    def side_index(self, label: str) -> int:
        if not self.labels or label not in self.labels:
            raise KeyError(label)
        return self.labels.index(label)

    @cached_property
    def shape(self) -> ShapelyPolygon:
        return ShapelyPolygon([v.as_tuple() for v in self.vertices])

    @cached_property
    def reflex_vertices(self) -> Tuple[int, ...]:
        return tuple(i for i, th in enumerate(self.semi_angles) if th > math.pi / 2)

    def to_dict(self) -> dict:
        out = {
            "vertices": [[str(v.x), str(v.y)] for v in self.vertices],
            "boundary_length": self.boundary_length,
            "side_lengths": list(self.side_lengths),
            "semi_angles": list(self.semi_angles),
        }
        if self.labels:
            out["labels"] = list(self.labels)
        return out


def _coerce(value, exact: bool):
    if exact:
        return Fraction(value)
    return float(value)


def polygon_validate(vertices: Sequence, labels: Optional[Sequence[str]] = None) -> Polygon:
    """Check simplicity and orientation, then compute side lengths and semi-angles."""
    pts = [v if isinstance(v, Point) else Point(*v) for v in vertices]
    if len(pts) < 3:
        raise DegenerateVertex("polygon needs at least 3 vertices", count=len(pts))

    exact = all(is_exact(p.x) and is_exact(p.y) for p in pts)
    pts = [Point(_coerce(p.x, exact), _coerce(p.y, exact)) for p in pts]
    n = len(pts)
    if labels is not None and len(labels) != n:
        raise ValueError("one label per side expected")

    # exact rational images for the predicates
    q = [(as_fraction(p.x), as_fraction(p.y)) for p in pts]

    side_lengths = []
    for i in range(n):
        (x0, y0), (x1, y1) = q[i], q[(i + 1) % n]
        sq = (x1 - x0) ** 2 + (y1 - y0) ** 2
        if sq == 0:
            raise DegenerateVertex("zero-length side", side=i)
        side_lengths.append(sqrt_number(sq) if exact else math.hypot(float(x1 - x0), float(y1 - y0)))

    semi = []
    for i in range(n):
        v, prev, nxt = q[i], q[i - 1], q[(i + 1) % n]
        ax, ay = nxt[0] - v[0], nxt[1] - v[1]
        bx, by = prev[0] - v[0], prev[1] - v[1]
        cr = _cross(ax, ay, bx, by)
        dot = ax * bx + ay * by
        if exact:
            degenerate = cr == 0
        else:
            norm = math.hypot(float(ax), float(ay)) * math.hypot(float(bx), float(by))
            degenerate = abs(float(cr)) <= FLOAT_DEGENERACY * norm
        if degenerate:
            raise DegenerateVertex("internal angle 0 or pi", vertex=i)
        angle = math.atan2(float(cr), float(dot))
        if angle < 0:
            angle += 2 * math.pi
        semi.append(angle / 2)

    _check_simple(q)

    area2 = sum(_cross(q[i][0], q[i][1], q[(i + 1) % n][0], q[(i + 1) % n][1]) for i in range(n))
    if area2 <= 0:
        raise NotCounterclockwise("vertices listed clockwise", signed_area=float(area2) / 2)

    offsets = [0 if exact else 0.0]
    for length in side_lengths[:-1]:
        offsets.append(offsets[-1] + length)
    total = offsets[-1] + side_lengths[-1]

    return Polygon(
        vertices=tuple(pts),
        side_lengths=tuple(side_lengths),
        boundary_length=total,
        semi_angles=tuple(semi),
        offsets=tuple(offsets),
        exact=exact,
        labels=tuple(labels) if labels is not None else None,
    )


def _check_simple(q) -> None:
    n = len(q)
    boxes = []
    for i in range(n):
        a, b = q[i], q[(i + 1) % n]
        boxes.append((float(min(a[0], b[0])), float(max(a[0], b[0])), float(min(a[1], b[1])), float(max(a[1], b[1]))))
    order = sorted(range(n), key=lambda i: boxes[i][0])
    for pos, i in enumerate(order):
        for j in order[pos + 1:]:
            if boxes[j][0] > boxes[i][1]:
                break
            if boxes[j][2] > boxes[i][3] or boxes[i][2] > boxes[j][3]:
                continue
            adjacent = (j - i) % n in (1, n - 1)
            a1, a2, b1, b2 = q[i], q[(i + 1) % n], q[j], q[(j + 1) % n]
            if adjacent:
                # sharing one endpoint; only a collinear overlap counts
                shared = a2 if a2 in (b1, b2) else a1
                other_a = a1 if shared == a2 else a2
                other_b = b2 if shared == b1 else b1
                if _orient(shared, other_a, other_b) == 0 and _on_segment(shared, other_a, other_b):
                    raise SelfIntersecting("adjacent sides overlap", sides=[i, j])
                if _orient(shared, other_b, other_a) == 0 and _on_segment(shared, other_b, other_a):
                    raise SelfIntersecting("adjacent sides overlap", sides=[i, j])
                continue
            if segments_intersect(a1, a2, b1, b2):
                raise SelfIntersecting("non-adjacent sides meet", sides=[i, j])


def polygon_area(polygon: Polygon) -> Number:
    vs = polygon.vertices
    n = len(vs)
    area2 = sum(vs[i].x * vs[(i + 1) % n].y - vs[(i + 1) % n].x * vs[i].y for i in range(n))
    return area2 / 2


def boundary_locate(polygon: Polygon, pos: BoundaryPos) -> Tuple[int, Number]:
    """(side index, offset along that side) of an arc-length position."""
    t = pos.t
    if not 0 <= t < polygon.boundary_length:
        raise OutOfRange("t outside [0, L)", t=float(t), length=float(polygon.boundary_length))
    i = bisect.bisect_right(polygon.offsets, t) - 1
    return i, t - polygon.offsets[i]


def boundary_param(polygon: Polygon, side: int, offset: Number) -> Number:
    if not 0 <= offset <= polygon.side_lengths[side]:
        raise OutOfRange("offset outside side", side=side)
    return (polygon.offsets[side] + offset) % polygon.boundary_length


def boundary_point(polygon: Polygon, pos: BoundaryPos) -> Point:
    i, off = boundary_locate(polygon, pos)
    a, b = polygon.side(i)
    s = off / polygon.side_lengths[i]
    return Point(a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s)


def boundary_distance(polygon, a: BoundaryPos, b: BoundaryPos) -> Number:
    """Intrinsic distance along one boundary circle; `polygon` may also be a bare length."""
    if a.component != b.component:
        raise DifferentComponents("positions on different components", a=a.component, b=b.component)
    length = polygon.boundary_length if isinstance(polygon, Polygon) else polygon
    d = abs(a.t - b.t)
    return min(d, length - d)


def intrinsic_distance(polygon: Polygon, p: Point, q: Point) -> float:
    """Geodesic distance inside the closed polygon: visibility graph through reflex vertices."""
    shape = polygon.shape
    region = shape.buffer(COVER_EPS)
    pp, qq = p.as_tuple(), q.as_tuple()
    for name, pt in (("p", pp), ("q", qq)):
        if not region.covers(ShapelyPoint(pt)):
            raise PointOutside(f"{name} is outside the polygon", point=list(pt))
    if pp == qq:
        return 0.0
    if region.covers(LineString([pp, qq])):
        return math.dist(pp, qq)

    nodes = {"p": pp, "q": qq}
    for i in polygon.reflex_vertices:
        nodes[i] = polygon.vertices[i].as_tuple()
    g = nx.Graph()
    keys = list(nodes)
    for k, a in enumerate(keys):
        for b in keys[k + 1:]:
            seg = LineString([nodes[a], nodes[b]])
            if region.covers(seg):
                g.add_edge(a, b, length=math.dist(nodes[a], nodes[b]))
    return nx.dijkstra_path_length(g, "p", "q", weight="length")
