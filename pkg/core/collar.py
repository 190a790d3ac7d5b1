# core/collar.py
"""
core/collar.py
-------------------------------------------------
Foliated collar of a polygon: one trapezoid over every side, of common
height h, with vertical sides along the internal angle bisectors.

Coordinates (t, h): t is the arc-length parameter of the foot of the
vertical leaf, h the height of the horizontal leaf. The retraction psi
slides a point down its vertical leaf to (t, 0).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from shapely import STRtree
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon as ShapelyPolygon

from core.errors import InvalidHeight, NoValidHeight, OutOfRange, PointOutside
from core.geometry import BoundaryPos, Polygon, boundary_distance, boundary_locate, boundary_point
from core.log_utils import get_logger
from core.numeric import Number

logger = get_logger("folding.collar", "Collar")

# overlap area still counted as "meeting along a side"
OVERLAP_AREA = 1e-12
CONTAIN_EPS = 1e-9
MAX_HEIGHT_EXPONENT = 64


def _bisector(polygon: Polygon, i: int) -> np.ndarray:
    """Unit inward bisector at vertex i: the outgoing side direction turned by the semi-angle."""
    a, b = polygon.vertices[i], polygon.vertices[(i + 1) % polygon.size]
    u = np.array([float(b.x - a.x), float(b.y - a.y)])
    u /= np.linalg.norm(u)
    th = polygon.semi_angles[i]
    c, s = math.cos(th), math.sin(th)
    return np.array([c * u[0] - s * u[1], s * u[0] + c * u[1]])


def _corner(polygon: Polygon, i: int, h) -> np.ndarray:
    v = polygon.vertices[i]
    return np.array(v.as_tuple()) + (float(h) / math.sin(polygon.semi_angles[i])) * _bisector(polygon, i)


def _side_normal(polygon: Polygon, i: int) -> Tuple[Number, Number]:
    """Inward unit normal of side i; rational when the side length is."""
    a, b = polygon.vertices[i], polygon.vertices[(i + 1) % polygon.size]
    length = polygon.side_lengths[i]
    return (a.y - b.y) / length, (b.x - a.x) / length


def _offset_vertex(polygon: Polygon, i: int, h) -> Tuple[Number, Number]:
    """The point at distance h from both sides meeting at vertex i."""
    (ax, ay), (bx, by) = _side_normal(polygon, i - 1), _side_normal(polygon, i)
    k = h / (1 + ax * bx + ay * by)
    v = polygon.vertices[i]
    return v.x + k * (ax + bx), v.y + k * (ay + by)


def _translated(points, anchor) -> ShapelyPolygon:
    ox, oy = anchor
    return ShapelyPolygon([(float(x - ox), float(y - oy)) for x, y in points])


@dataclass(frozen=True)
class Trapezoid:
    side: int
    base: Number
    top: Number
    height: Number
    angles: Tuple[float, float]
    points: Tuple[Tuple[Number, Number], ...]

    @property
    def ratio(self) -> Number:
        return self.top / self.base

    @property
    def corners(self) -> Tuple[Tuple[float, float], ...]:
        return tuple((float(x), float(y)) for x, y in self.points)

    @property
    def shape(self) -> ShapelyPolygon:
        return ShapelyPolygon(self.corners)

    def shape_at(self, anchor) -> ShapelyPolygon:
        """The trapezoid in coordinates centred on anchor."""
        return _translated(self.points, anchor)

    def to_dict(self) -> dict:
        return {"side": self.side, "base": float(self.base), "top": float(self.top), "height": float(self.height),
                "angles": list(self.angles), "corners": [list(c) for c in self.corners]}


def trapezoids(polygon: Polygon, h) -> List[Trapezoid]:
    """Exact for exact polygons with rational side lengths."""
    out = []
    n = polygon.size
    tops = [_offset_vertex(polygon, i, h) for i in range(n)]
    for i in range(n):
        j = (i + 1) % n
        a, b = polygon.vertices[i], polygon.vertices[j]
        base = polygon.side_lengths[i]
        # top edge is parallel to the base
        top = ((b.x - a.x) * (tops[j][0] - tops[i][0]) + (b.y - a.y) * (tops[j][1] - tops[i][1])) / base
        points = ((a.x, a.y), (b.x, b.y), tops[j], tops[i])
        out.append(Trapezoid(i, base, top, h, (polygon.semi_angles[i], polygon.semi_angles[j]), points))
    return out


def collar_violations(polygon: Polygon, h) -> List[str]:
    """
    Reasons h fails as a collar height; empty when it is valid.

    Shapes are compared in coordinates centred on the smaller trapezoid, so
    sides much shorter than the float spacing of their position still count.
    """
    L = float(polygon.boundary_length)
    reasons = []
    traps = trapezoids(polygon, h)
    for tr in traps:
        if tr.top <= 0 or not 0.5 <= tr.ratio <= 2:
            reasons.append(f"side {tr.side}: top/base ratio {float(tr.ratio):.6g}")
    for i, th in enumerate(polygon.semi_angles):
        if math.sin(th) < 2 * float(h) / L:
            reasons.append(f"vertex {i}: semi-angle too small for h")
    if reasons:
        return reasons
    if any(not tr.shape_at(tr.points[0]).is_valid for tr in traps):
        return ["degenerate trapezoid"]
    shapes = [tr.shape for tr in traps]
    tree = STRtree(shapes)
    for i, s in enumerate(shapes):
        for j in tree.query(s):
            j = int(j)
            if j <= i:
                continue
            anchor = min(traps[i], traps[j], key=lambda tr: tr.base).points[0]
            area = traps[i].shape_at(anchor).intersection(traps[j].shape_at(anchor)).area
            if area > OVERLAP_AREA:
                reasons.append(f"trapezoids {i} and {j} overlap (area {area:.3g})")
    outline = [(v.x, v.y) for v in polygon.vertices]
    for tr in traps:
        anchor = tr.points[0]
        if not _translated(outline, anchor).buffer(CONTAIN_EPS).covers(tr.shape_at(anchor)):
            reasons.append(f"trapezoid {tr.side} leaves the polygon")
    return reasons


def is_collar_height(polygon: Polygon, h) -> bool:
    return h > 0 and not collar_violations(polygon, h)


def choose_collar_height(polygon: Polygon):
    """Largest L / 2^k (k >= 3) passing the collar predicate."""
    L = polygon.boundary_length
    for k in range(3, MAX_HEIGHT_EXPONENT + 1):
        h = L / Fraction(2 ** k) if isinstance(L, (Fraction, int)) else L / 2 ** k
        if is_collar_height(polygon, h):
            logger.debug(f"✅ collar height L/2^{k}")
            return h
    raise NoValidHeight("no collar height down to L/2^64", length=float(L))


class Collar:
    """
    Collar of fixed height.

    Attributes:
        polygon: the polygon collared
        hbar: trapezoid height
        trapezoids: one per side, in side order
    Behavior:
        gamma(t, h) evaluates the foliation chart, locate(z) inverts it and
        retract(z) is the boundary parameter of psi(z)
    """

    def __init__(self, polygon: Polygon, hbar):
        self.polygon = polygon
        self.hbar = hbar
        self.trapezoids = trapezoids(polygon, hbar)
        self._shapes = [tr.shape for tr in self.trapezoids]
        self._tree = STRtree(self._shapes)
        n = polygon.size
        self._tops = [_corner(polygon, i, hbar) for i in range(n)]
        self._normals, self._dirs = [], []
        for i in range(n):
            a, b = polygon.vertices[i], polygon.vertices[(i + 1) % n]
            u = np.array([float(b.x - a.x), float(b.y - a.y)])
            u /= np.linalg.norm(u)
            self._dirs.append(u)
            self._normals.append(np.array([-u[1], u[0]]))

    def _top_point(self, i: int, s: float) -> np.ndarray:
        j = (i + 1) % self.polygon.size
        frac = s / float(self.polygon.side_lengths[i])
        return self._tops[i] + frac * (self._tops[j] - self._tops[i])

    def gamma(self, t, h) -> np.ndarray:
        if not 0 <= h <= self.hbar:
            raise OutOfRange("height outside [0, hbar]", h=float(h))
        i, s = boundary_locate(self.polygon, BoundaryPos(0, t))
        base = np.array(boundary_point(self.polygon, BoundaryPos(0, t)).as_tuple())
        top = self._top_point(i, float(s))
        return base + (float(h) / float(self.hbar)) * (top - base)

    def leaf_length(self, t) -> float:
        """Length of the full vertical leaf through t."""
        return float(np.linalg.norm(self.gamma(t, self.hbar) - self.gamma(t, 0)))

    def locate(self, z) -> Tuple[object, float]:
        """(t, h) of a point of the collar."""
        z = np.asarray(z, dtype=float)
        pt = ShapelyPoint(z)
        hits = [int(k) for k in self._tree.query(pt.buffer(CONTAIN_EPS))]
        for k in sorted(hits):
            if not self._shapes[k].buffer(CONTAIN_EPS).covers(pt):
                continue
            v = np.array(self.polygon.vertices[k].as_tuple())
            u, nrm = self._dirs[k], self._normals[k]
            h = float(np.dot(z - v, nrm))
            tau = min(max(h / float(self.hbar), 0.0), 1.0)
            x_i = self._tops[k] - v
            w = (self._tops[(k + 1) % self.polygon.size] - self._tops[k]) / float(self.polygon.side_lengths[k])
            s = (np.dot(z - v, u) - tau * np.dot(x_i, u)) / (1 + tau * (np.dot(w, u) - 1))
            s = min(max(s, 0.0), float(self.polygon.side_lengths[k]))
            t = (float(self.polygon.offsets[k]) + s) % float(self.polygon.boundary_length)
            return t, max(h, 0.0)
        raise PointOutside("point is not in the collar", point=z.tolist())

    def retract(self, z) -> float:
        return self.locate(z)[0]

    def to_dict(self) -> dict:
        return {"hbar": self.hbar, "trapezoids": [tr.to_dict() for tr in self.trapezoids]}


def build_collar(polygon: Polygon, hbar) -> Collar:
    reasons = collar_violations(polygon, hbar) if hbar > 0 else ["non-positive height"]
    if reasons:
        raise InvalidHeight("not a collar height", hbar=float(hbar), reasons=reasons)
    return Collar(polygon, hbar)


def collar_locate(collar: Collar, z) -> Tuple[float, float]:
    return collar.locate(z)


# --------------------------------------------------
# Path lengths for the retraction Lipschitz property
# --------------------------------------------------
def lifted_path_length(points: Sequence) -> float:
    pts = np.asarray(points, dtype=float)
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def retracted_path_length(collar: Collar, points: Sequence, subdivide: int = 32) -> float:
    """Boundary length swept by psi along the polygonal path (length of its image in the scar, at most)."""
    pts = np.asarray(points, dtype=float)
    L = collar.polygon.boundary_length
    total = 0.0
    prev = None
    for a, b in zip(pts, pts[1:]):
        for k in range(subdivide + 1):
            if prev is not None and k == 0:
                continue
            t = collar.retract(a + (b - a) * k / subdivide)
            if prev is not None:
                total += float(boundary_distance(float(L), BoundaryPos(0, prev), BoundaryPos(0, t)))
            prev = t
    return total


def random_collar_path(collar: Collar, rng: np.random.Generator, steps: int = 4, reach: Optional[float] = None):
    """A short polygonal path through the collar, built in (t, h) coordinates."""
    L = float(collar.polygon.boundary_length)
    reach = reach if reach is not None else float(collar.hbar) / 2
    t = float(rng.uniform(0, L))
    h = float(rng.uniform(0, float(collar.hbar)))
    points = [collar.gamma(t, h)]
    for _ in range(steps):
        t = (t + float(rng.uniform(-reach, reach))) % L
        h = float(np.clip(h + rng.uniform(-reach, reach) / 4, 0, float(collar.hbar)))
        points.append(collar.gamma(t, h))
    return points


def ball_in_disk_check(collar: Collar, constants, rng: np.random.Generator, samples: int = 100) -> dict:
    """
    Sampled containment of collar balls in scar disks: every x with lifted
    distance <= r from q (q of height h_q <= delta) has h_x <= hbar*A*(r+h_q)/(2*rbar)
    and a retracted image within A*(r+h_q) of psi(q).
    """
    delta, A = float(constants.delta), float(constants.A)
    hbar, rbar = float(collar.hbar), float(constants.rbar)
    L = float(collar.polygon.boundary_length)
    checked, violations = 0, []
    for _ in range(samples):
        t = float(rng.uniform(0, L))
        hq = float(rng.uniform(0, delta))
        r = float(rng.uniform(0, delta))
        q = collar.gamma(t, hq)
        angle = float(rng.uniform(0, 2 * math.pi))
        x = q + r * float(rng.uniform(0, 1)) * np.array([math.cos(angle), math.sin(angle)])
        try:
            _, hx = collar.locate(x)
            moved = retracted_path_length(collar, [q, x], subdivide=8)
        except PointOutside:
            continue
        checked += 1
        K = A * (r + hq)
        if hx > hbar * K / (2 * rbar) + 1e-12 or moved > K + 1e-12:
            violations.append({"t": t, "h_q": hq, "r": r, "h_x": hx, "moved": moved, "bound": K})
    return {"checked": checked, "violations": violations}
