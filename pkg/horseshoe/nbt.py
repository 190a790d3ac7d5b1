# horseshoe/nbt.py
"""
horseshoe/nbt.py
-------------------------------------------------
The 1/n NBT family: slope lambda_n, the tent orbit of 1, the polygon P_n
with its 2n+4 segment pairings, and the piecewise-affine map F_n.

Side order along the boundary (counterclockwise from (1, 0)):

    V0, H0, V{n+1}, H{n+1}, V1, H1, V2, H2, ..., Vn, Hn

Every V side is folded about its midpoint. The horizontal sides carry n+2
pairings generated by the period-n orbit q_0 .. q_{n-1} of F_n.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import sympy
from shapely.geometry import LineString
from shapely.geometry import Point as ShapelyPoint

from core.errors import OutOfRange, PointOutside
from core.geometry import BoundaryPos, Point, Polygon, polygon_validate
from core.log_utils import get_logger
from core.numeric import Number
from core.scheme import FoldingScheme, SegmentPairing, make_pairing, make_scheme
from core.settings import FLOAT_TOLERANCE, LAMBDA_BITS
from horseshoe.tent import TentMap

logger = get_logger("folding.nbt", "NBT")

MIN_N = 3
CONTAIN_EPS = 1e-9
# vertex grid of the rational P_n; its shortest sides are near 2^-(n+2)
PN_GRID_BITS = 192


# --------------------------------------------------
# lambda_n
# --------------------------------------------------
def _scaled_poly(k: int, n: int, bits: int) -> int:
    """2^(bits*(n+2)) * P(k / 2^bits) with P(x) = x^(n+2) - 2x^(n+1) + 2x - 1."""
    d = 1 << bits
    return k ** (n + 2) - 2 * k ** (n + 1) * d + 2 * k * d ** (n + 1) - d ** (n + 2)


@lru_cache(maxsize=None)
def lambda_bracket(n: int, bits: int = LAMBDA_BITS) -> Tuple[Fraction, Fraction]:
    """Dyadic interval of width 2^-bits holding the root of P in (3/2, 2)."""
    if n < MIN_N:
        raise OutOfRange("n must be at least 3", n=n)
    lo, hi = 3 << (bits - 1), 2 << bits
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _scaled_poly(mid, n, bits) < 0:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, 1 << bits), Fraction(hi, 1 << bits)


def lambda_n(n: int) -> float:
    lo, hi = lambda_bracket(n)
    return float((lo + hi) / 2)


def lambda_residual(n: int) -> float:
    """|P(lambda)| at the bracket midpoint, evaluated exactly."""
    lo, hi = lambda_bracket(n)
    x = (lo + hi) / 2
    return float(abs(x ** (n + 2) - 2 * x ** (n + 1) + 2 * x - 1))


def lambda_root_count(n: int) -> int:
    """Real roots of P in [3/2, 2], counted symbolically."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(x ** (n + 2) - 2 * x ** (n + 1) + 2 * x - 1, x)
    return int(poly.count_roots(sympy.Rational(3, 2), 2))


# --------------------------------------------------
# Parameters
# --------------------------------------------------
@dataclass(frozen=True)
class NBTParameters:
    """
    Attributes:
        n: family index, n >= 3
        lam: lambda_n
        orbit: p_0 .. p_{n+1}, the tent orbit of 1
        h: height of V0, lambda^(n+1) / (lambda^(n+1) + 1)
        alpha: (lambda - 1) / (lambda^n - 1)
        beta: (lambda - 1) / (lambda^(n+2) - 1)
        xi: horizontal coordinate of q_0
    """

    n: int
    lam: float
    orbit: Tuple[float, ...]
    h: float
    alpha: float
    beta: float
    xi: float
    residual: float = 0.0

    @property
    def tent(self) -> TentMap:
        return TentMap(self.lam)

    def vertical_height(self, i: int) -> float:
        return self.h / self.lam ** i

    def bottom(self, i: int) -> float:
        """y of the bottom of V_i for 1 <= i <= n."""
        return sum((self.vertical_height(j) for j in range(i + 1, self.n + 1)), 0.0)

    def q_offset(self, i: int) -> float:
        """Distance from the left end of H_i to q_i, 1 <= i <= n-1."""
        return self.alpha * self.lam ** (i - 2)

    def to_dict(self) -> dict:
        return {"n": self.n, "lambda": self.lam, "residual": self.residual, "orbit": list(self.orbit),
                "h": self.h, "alpha": self.alpha, "beta": self.beta, "xi": self.xi}


def tent_orbit(n: int, lam: float) -> List[float]:
    """p_0 .. p_{n+1} in closed form."""
    out = [1.0, 0.0]
    for i in range(2, n + 1):
        out.append((2 - lam) * (lam ** (i - 1) - 1) / (lam - 1))
    out.append(1 - 1 / lam)
    return out


@lru_cache(maxsize=None)
def nbt_parameters(n: int) -> NBTParameters:
    lam = lambda_n(n)
    orbit = tuple(tent_orbit(n, lam))
    h = lam ** (n + 1) / (lam ** (n + 1) + 1)
    alpha = (lam - 1) / (lam ** n - 1)
    beta = (lam - 1) / (lam ** (n + 2) - 1)
    xi = 1 - (2 - lam) / (lam * (lam + 1))
    return NBTParameters(n, lam, orbit, h, alpha, beta, xi, lambda_residual(n))


# --------------------------------------------------
# The maps
# --------------------------------------------------
def Fn_map(params: NBTParameters, x: float, y: float) -> Tuple[float, float]:
    lam = params.lam
    if not (-CONTAIN_EPS <= x <= 1 + CONTAIN_EPS and -CONTAIN_EPS <= y <= 1 + CONTAIN_EPS):
        raise PointOutside("point outside the unit square", point=[x, y])
    if x <= 1 - 1 / lam:
        return lam * (x - 1) + 2, y / lam - 1 / (lam ** (params.n + 1) + 1)
    return lam * (1 - x), 1 - y / lam


def orbit_q(params: NBTParameters) -> List[Tuple[float, float]]:
    """q_0 = (xi, h) and q_i = F_n^i(q_0), i < n."""
    pts = [(params.xi, params.h)]
    for _ in range(1, params.n):
        pts.append(Fn_map(params, *pts[-1]))
    return pts


# --------------------------------------------------
# P_n
# --------------------------------------------------
def side_labels(n: int) -> List[str]:
    labels = ["V0", "H0", f"V{n + 1}", f"H{n + 1}"]
    for i in range(1, n + 1):
        labels += [f"V{i}", f"H{i}"]
    return labels


def _outline(n: int, p: Sequence, h, bottom: Callable[[int], Number], one: Number = 1.0) -> List[Tuple]:
    zero = one - one
    pts = [(one, zero), (one, h), (p[n + 1], h), (p[n + 1], one), (zero, one)]
    for i in range(1, n):
        y = bottom(i)
        pts += [(p[i], y), (p[i + 1], y)]
    pts.append((p[n], zero))
    return pts


def pn_vertices(params: NBTParameters) -> List[Tuple[float, float]]:
    return _outline(params.n, params.orbit, params.h, params.bottom)


def pn_exact_vertices(n: int, bits: int = PN_GRID_BITS) -> List[Tuple[Fraction, Fraction]]:
    """
    Vertices of P_n rounded to the dyadic grid 2^-bits, computed from the
    lambda bracket midpoint in rational arithmetic.
    """
    lo, hi = lambda_bracket(n)
    lam = (lo + hi) / 2
    power = lam ** (n + 1)
    h = power / (power + 1)
    bottoms, acc = {}, Fraction(0)
    for i in range(n, 0, -1):
        bottoms[i] = acc
        acc += h / lam ** i
    p = [Fraction(1), Fraction(0)]
    p += [(2 - lam) * (lam ** (i - 1) - 1) / (lam - 1) for i in range(2, n + 1)]
    p.append(1 - 1 / lam)
    scale = 2 ** bits

    def snap(x: Fraction) -> Fraction:
        return Fraction(round(x * scale), scale)

    return [(snap(x), snap(y)) for x, y in _outline(n, p, h, bottoms.__getitem__, Fraction(1))]


@lru_cache(maxsize=None)
def pn_exact_polygon(n: int) -> Polygon:
    """P_n with rational vertices; keeps V_n and V_{n+1} apart from their neighbours at every n."""
    if n < MIN_N:
        raise OutOfRange("n must be at least 3", n=n)
    return polygon_validate([Point(x, y) for x, y in pn_exact_vertices(n)], side_labels(n))


@dataclass
class NBTPolygonScheme:
    params: NBTParameters
    polygon: Polygon
    scheme: FoldingScheme
    orbit_points: List[BoundaryPos]
    sides: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    def side_start(self, label: str) -> float:
        return self.sides[label][0]

    def side_length(self, label: str) -> float:
        return self.sides[label][1]

    def horizontal_segment(self, label: str) -> LineString:
        i = self.polygon.side_index(label)
        a, b = self.polygon.side(i)
        return LineString([a.as_tuple(), b.as_tuple()])

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "polygon": self.polygon.to_dict(),
                "scheme": self.scheme.summary(),
                "orbit_points": [p.t for p in self.orbit_points]}


def _horizontal_pairings(pn_sides: Dict[str, Tuple[float, float]], params: NBTParameters) -> List[SegmentPairing]:
    n, lam = params.n, params.lam
    start = {k: v[0] for k, v in pn_sides.items()}
    length = {k: v[1] for k, v in pn_sides.items()}
    d = {i: params.q_offset(i) for i in range(1, n)}
    tail_of_h0 = params.alpha / lam ** 2
    top = f"H{n + 1}"
    h0_left = start["H0"] + length["H0"]
    q0 = start["H0"] + tail_of_h0

    out = [
        # H_{n+1} folded over V_{n+1} onto the left end of H0
        make_pairing(start[top], h0_left - length[top], length[top], label="H:1a"),
        # rest of L onto the start of H1, up to q_1
        make_pairing(q0, start["H1"], d[1], label="H:1b"),
    ]
    for i in range(1, n - 1):
        out.append(make_pairing(start[f"H{i}"] + d[i], start[f"H{i + 1}"], d[i + 1], label=f"H:2.{i}"))
    hn, hm = f"H{n}", f"H{n - 1}"
    out.append(make_pairing(start[hm] + length[hm] - length[hn], start[hn], length[hn], label="H:3a"))
    out.append(make_pairing(start[hm] + d[n - 1], start["H0"], tail_of_h0, label="H:3b"))
    return out


def pn_shortest_side(n: int) -> float:
    """|V_{n+1}| = 1 / (lambda^(n+1) + 1), the shortest side of P_n."""
    return 1 / (lambda_n(n) ** (n + 1) + 1)


def float_pn_supported(n: int) -> bool:
    """Whether the V_{n+1} fold, half the shortest side, stays above the float tolerance."""
    return n >= MIN_N and pn_shortest_side(n) / 2 > FLOAT_TOLERANCE


def build_Pn(n: int) -> NBTPolygonScheme:
    """P_n with its vertical midpoint folds and horizontal orbit pairings (float mode)."""
    params = nbt_parameters(n)
    if not float_pn_supported(n):
        raise OutOfRange("the V{n+1} fold is shorter than the float tolerance; use pn_exact_polygon for geometry",
                         n=n, shortest_side=pn_shortest_side(n))
    labels = side_labels(n)
    polygon = polygon_validate([Point(x, y) for x, y in pn_vertices(params)], labels)
    sides = {lab: (polygon.offsets[i], polygon.side_lengths[i]) for i, lab in enumerate(labels)}

    pairings = []
    for i in range(n + 2):
        t0, length = sides[f"V{i}"]
        pairings.append(make_pairing(t0, t0 + length / 2, length / 2, label=f"V{i}"))
    pairings += _horizontal_pairings(sides, params)

    orbit = [BoundaryPos(0, sides["H0"][0] + params.alpha / params.lam ** 2)]
    orbit += [BoundaryPos(0, sides[f"H{i}"][0] + params.q_offset(i)) for i in range(1, n)]
    scheme = make_scheme([polygon], pairings, name=f"P{n}")
    logger.info(f"✅ built P{n}: lambda={params.lam:.12f}, {len(pairings)} pairings")
    return NBTPolygonScheme(params, polygon, scheme, orbit, sides)


# --------------------------------------------------
# Checks on P_n
# --------------------------------------------------
def q0_identity_gap(pn: NBTPolygonScheme) -> float:
    """|dist(H0 left end, q0) - (|H_{n+1}| + dist(H1 left end, q1))|."""
    params = pn.params
    left = params.xi - params.orbit[params.n + 1]
    right = pn.side_length(f"H{params.n + 1}") + params.q_offset(1)
    return abs(left - right)


def vertical_projections(params: NBTParameters) -> List[Tuple[float, float]]:
    """pi_y(V_i) for i = 0 .. n+1."""
    n, h = params.n, params.h
    out = [(0.0, h)]
    for i in range(1, n + 1):
        out.append((params.bottom(i), params.bottom(i - 1) if i > 1 else 1.0))
    out.append((1 - params.vertical_height(n + 1), 1.0))
    return out


def fn_side_images(pn: NBTPolygonScheme, samples: int = 33) -> Dict[str, float]:
    """Largest distance from F_n(sample of a horizontal side) to the side's expected image."""
    params = pn.params
    n = params.n
    y1 = params.bottom(1)
    I = LineString([(params.orbit[2], y1), (1.0, y1)])

    def seg(label):
        return pn.horizontal_segment(label)

    targets = {"H0": [I, seg("H1")], f"H{n - 1}": [seg(f"H{n}"), seg("H0")],
               f"H{n}": [seg(f"H{n + 1}")], f"H{n + 1}": [I]}
    for i in range(1, n - 1):
        targets[f"H{i}"] = [seg(f"H{i + 1}")]
    out = {}
    for label, images in targets.items():
        line = seg(label)
        worst = 0.0
        for s in np.linspace(0.0, 1.0, samples + 2)[1:-1]:
            x, y = line.interpolate(float(s), normalized=True).coords[0]
            fx, fy = Fn_map(params, x, y)
            target = ShapelyPoint(fx, fy)
            worst = max(worst, min(g.distance(target) for g in images))
        out[label] = worst
    return out


def fn_maps_into(pn: NBTPolygonScheme, rng: np.random.Generator, samples: int = 200) -> dict:
    """Sampled check that F_n(P_n) lies in P_n."""
    shape = pn.polygon.shape
    region = shape.buffer(CONTAIN_EPS)
    checked, bad = 0, []
    while checked < samples:
        x, y = float(rng.uniform(0, 1)), float(rng.uniform(0, 1))
        if not shape.contains(ShapelyPoint(x, y)):
            continue
        checked += 1
        fx, fy = Fn_map(pn.params, x, y)
        if not region.covers(ShapelyPoint(fx, fy)):
            bad.append([x, y, fx, fy])
    return {"checked": checked, "violations": bad}
