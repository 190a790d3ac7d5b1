# core/ball.py
"""
core/ball.py
-------------------------------------------------
Piecewise-exact ball profiles r -> (m(q;r), n(q;r)) on a scar.

Every finite edge seen from q contributes a measure that is affine in r
between its breakpoints (distance to the near end, to the far end, and the
radius at which the two fronts meet). Tail stars contribute
2(rho * N(rho) + sum of a_n <= rho) with rho = r - d(q, center).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from core.errors import BeyondInjectivityRadius, OutOfRange
from core.log_utils import get_logger
from core.scar import PLANAR, ScarGraph, ScarPoint

logger = get_logger("folding.ball", "Ball")

# planar radii are nudged by at most this much off a breakpoint
NUDGE = 1e-12


@dataclass(frozen=True)
class Piece:
    """On (lo, hi): m = a + b*r and n = c. Dense pieces hold unenumerated star crossings."""

    lo: object
    hi: object
    a: object
    b: object
    c: int
    dense: bool = False

    def m(self, r):
        return self.a + self.b * r

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "a": self.a, "b": self.b, "n": self.c, "dense": self.dense}


@dataclass(frozen=True)
class _EdgeTerm:
    du: object
    dv: object
    length: object

    @property
    def peak(self):
        return (self.du + self.dv + self.length) / 2


@dataclass(frozen=True)
class _StarTerm:
    dc: object
    tail: object
    # branch holding q; it is carried by explicit edges of the augmented graph
    excluded: Optional[int] = None


class BallProfile:
    """
    Ball measure and circle count around one scar point.

      - Attributes:
          center: the ScarPoint q
          rmax: largest radius the profile is valid for
          radii: distances to every node of the augmented graph
      - Behavior:
          m(r), n(r) are exact at every radius; n_right(r) is the right limit
          used by the goodness function; pieces(r1, r2) yields the affine
          pieces between breakpoints
    """

    def __init__(self, graph: ScarGraph, center: ScarPoint, rmax, edges: List[_EdgeTerm],
                 stars: List[_StarTerm], radii: Dict[object, object], nonplanar: List):
        self.graph = graph
        self.center = center
        self.rmax = rmax
        self.edges = edges
        self.stars = stars
        self.radii = radii
        self.nonplanar = sorted(set(nonplanar))
        self._finite_breaks = sorted(
            {x for t in edges for x in (t.du, t.dv, t.peak)} | set(radii.values()) | {s.dc for s in stars}
        )

    # ---- values ----
    def m(self, r):
        if r <= 0:
            return 0 * r
        total = 0
        for t in self.edges:
            if r <= t.du:
                continue
            if r >= t.peak:
                total += 2 * t.length
            elif r <= t.dv:
                total += 2 * (r - t.du)
            else:
                total += 2 * (2 * r - t.du - t.dv)
        for s in self.stars:
            rho = r - s.dc
            if rho <= 0:
                continue
            total += 2 * (rho * s.tail.count_longer(rho) + s.tail.mass_at_most(rho))
            if s.excluded is not None:
                a = s.tail.length(s.excluded)
                total -= 2 * rho if a > rho else 2 * a
        return total

    def n(self, r) -> int:
        """#points at distance exactly r."""
        if r <= 0:
            return 1
        count = sum(1 for d in self.radii.values() if d == r)
        for t in self.edges:
            if t.du < r < t.peak and r - t.du < t.length:
                count += 1
            if t.dv < r < t.peak and r - t.dv < t.length:
                count += 1
            if r == t.peak and t.du < r and t.dv < r and r - t.du < t.length:
                count += 1
        for s in self.stars:
            rho = r - s.dc
            if rho <= 0:
                continue
            k = s.tail.count_at_least(rho)
            if s.excluded is not None and s.tail.length(s.excluded) >= rho:
                k -= 1
            count += k
        return count

    def n_right(self, r):
        """lim n(s) as s decreases to r; math.inf just outside a star center."""
        if r < 0:
            return 0
        count = 0
        for t in self.edges:
            if t.du <= r < t.peak:
                count += 1 if r < t.dv else 2
        for s in self.stars:
            rho = r - s.dc
            if rho < 0:
                continue
            if rho == 0:
                return math.inf
            k = s.tail.count_longer(rho)
            if s.excluded is not None and s.tail.length(s.excluded) > rho:
                k -= 1
            count += k
        return count

    # ---- structure ----
    def is_planar(self, r) -> bool:
        if r in self.nonplanar:
            return False
        for s in self.stars:
            rho = r - s.dc
            if rho > 0 and s.tail.count_at_least(rho) != s.tail.count_longer(rho):
                return False
        return True

    def _next_break(self, r, upward: bool):
        cands = [x for x in self._finite_breaks if (x > r if upward else x < r)]
        for s in self.stars:
            rho = r - s.dc
            if rho <= 0:
                continue
            k = s.tail.count_longer(rho)
            if upward and k > 0:
                cands.append(s.dc + s.tail.length(k - 1))
            if not upward:
                cands.append(s.dc + s.tail.length(s.tail.count_at_least(rho)))
        if not cands:
            return None
        return min(cands) if upward else max(cands)

    def nudge(self, r, upward: bool = True):
        """(radius, shift): r itself when planar, else the nearby planar radius."""
        if self.is_planar(r):
            return r, 0
        nxt = self._next_break(r, upward)
        gap = abs(nxt - r) if nxt is not None else 1.0
        eta = min(NUDGE, float(gap) / 2)
        if isinstance(r, Fraction):
            eta = Fraction(eta)
        shifted = r + eta if upward else r - eta
        logger.debug(f"⚠️ radius {float(r):.6g} non-planar, moved by {float(eta):.3g}")
        return shifted, eta

    def breakpoints(self, r1, r2) -> Tuple[List, List[Tuple[object, object]]]:
        """Breakpoints strictly inside (r1, r2) and the dense zones there."""
        out = {x for x in self._finite_breaks if r1 < x < r2}
        zones = []
        for s in self.stars:
            lo, hi = r1 - s.dc, r2 - s.dc
            if hi <= 0:
                continue
            lengths, dense_below = s.tail.lengths_between(max(lo, 0), hi)
            out.update(s.dc + a for a in lengths if r1 < s.dc + a < r2)
            if dense_below is not None:
                z0, z1 = max(r1, s.dc), s.dc + dense_below
                if z1 > z0:
                    zones.append((z0, z1))
                    out.update(x for x in (z0, z1) if r1 < x < r2)
        return sorted(out), zones

    def coefficients(self, r) -> Tuple[object, object, int]:
        """(a, b, c) of the piece containing r in its interior."""
        a, b, c = 0, 0, 0
        for t in self.edges:
            if r <= t.du:
                continue
            if r >= t.peak:
                a += 2 * t.length
            elif r < t.dv:
                a, b, c = a - 2 * t.du, b + 2, c + 1
            else:
                a, b, c = a - 2 * (t.du + t.dv), b + 4, c + 2
        for s in self.stars:
            rho = r - s.dc
            if rho <= 0:
                continue
            k = s.tail.count_longer(rho)
            a += 2 * s.tail.mass_at_most(rho) - 2 * k * s.dc
            b += 2 * k
            c += k
            if s.excluded is not None:
                ex = s.tail.length(s.excluded)
                if ex > rho:
                    a, b, c = a + 2 * s.dc, b - 2, c - 1
                else:
                    a -= 2 * ex
        return a, b, c

    def pieces(self, r1, r2) -> List[Piece]:
        if r2 <= r1:
            return []
        cuts, zones = self.breakpoints(r1, r2)
        points = [r1] + cuts + [r2]
        out = []
        for lo, hi in zip(points, points[1:]):
            if hi <= lo:
                continue
            mid = (lo + hi) / 2
            dense = any(z0 <= lo and hi <= z1 for z0, z1 in zones)
            a, b, c = self.coefficients(mid)
            out.append(Piece(lo, hi, a, b, c, dense))
        return out

    def table(self, radii) -> List[dict]:
        return [{"r": r, "m": self.m(r), "n": self.n(r), "planar": self.is_planar(r)} for r in radii]

    def to_dict(self) -> dict:
        return {"center": self.center.to_dict(), "rmax": self.rmax,
                "nonplanar_radii": [x for x in self.nonplanar if x <= self.rmax]}


def ball_profile(g: ScarGraph, q: ScarPoint, rmax=None, check_radius: bool = True) -> BallProfile:
    inj = g.injectivity_radius
    if rmax is None:
        rmax = inj
    if rmax <= 0:
        raise OutOfRange("rmax must be positive", rmax=rmax)
    if check_radius and rmax > inj:
        raise BeyondInjectivityRadius("balls beyond the injectivity radius are not dendrites",
                                      rmax=rmax, injectivity_radius=inj)
    graph, node, dist = g.distances_from(q)
    edges = []
    for u, v, data in graph.edges(data=True):
        if u not in dist or v not in dist:
            continue
        du, dv = dist[u], dist[v]
        if du > dv:
            du, dv = dv, du
        edges.append(_EdgeTerm(du, dv, data["length"]))
    stars = []
    for si, star in enumerate(g.stars):
        if star.center not in dist:
            continue
        excluded = q.branch if q.kind == "star" and q.star == si else None
        stars.append(_StarTerm(dist[star.center], star.tail, excluded))

    nonplanar = []
    for v, d in dist.items():
        vert = g.vertices.get(v)
        if v == node and q.kind != "vertex":
            continue
        if vert is None or vert.kind != PLANAR:
            nonplanar.append(d)
    return BallProfile(g, q, rmax, edges, stars, dict(dist), nonplanar)
