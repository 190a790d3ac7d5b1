# horseshoe/convergence.py
"""
horseshoe/convergence.py
-------------------------------------------------
Metric checks that P_n and its identifications converge to the tight
horseshoe: Hausdorff distance of the boundaries, containment of the inner
squares [eps, 1-eps]^2, the vertical sides against their limits, and a
sampled Hausdorff distance between the two boundary relations.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from networkx.utils import UnionFind
from scipy.spatial import cKDTree
import shapely
from shapely.geometry import LineString, box

from core.errors import OutOfRange
from core.geometry import BoundaryPos, Polygon, boundary_point
from core.log_utils import get_logger
from core.scheme import FoldingScheme, partner
from horseshoe.nbt import (
    MIN_N,
    Fn_map,
    NBTPolygonScheme,
    build_Pn,
    float_pn_supported,
    lambda_n,
    nbt_parameters,
    pn_exact_polygon,
)
from horseshoe.tight import F_map, tight_horseshoe_scheme

logger = get_logger("folding.convergence", "Converge")

DENSIFY = 1 / 256
# snapping grid for endpoint classes, well above the float incidence tolerance
CLASS_SNAP = 1e-8

UNIT_SQUARE = box(0.0, 0.0, 1.0, 1.0)


# --------------------------------------------------
# Boundaries and containment
# --------------------------------------------------
@dataclass
class HausdorffEstimate:
    value: float
    error: float

    def to_dict(self) -> dict:
        return {"value": self.value, "error": self.error}


def boundary_hausdorff(polygon: Polygon, densify: float = DENSIFY) -> HausdorffEstimate:
    """d_H(dP_n, dSigma) from densified boundaries; true value within `error`."""
    ring = polygon.shape.exterior
    value = shapely.hausdorff_distance(ring, UNIT_SQUARE.exterior, densify=densify)
    longest = max(float(x) for x in polygon.side_lengths)
    return HausdorffEstimate(float(value), densify * max(longest, 1.0))


def sigma_eps_contained(polygon: Polygon, eps: float) -> bool:
    if not 0 < eps < 0.5:
        raise OutOfRange("eps outside (0, 1/2)", eps=eps)
    return polygon.shape.covers(box(eps, eps, 1 - eps, 1 - eps))


def find_n0(contained: Dict[int, bool]) -> Optional[int]:
    """Least n0 with containment for every tested n >= n0."""
    n0 = None
    for n in sorted(contained, reverse=True):
        if not contained[n]:
            break
        n0 = n
    return n0


def vertical_limits(count: int) -> Dict[str, LineString]:
    """Limit positions of V0 and V1..V{count}: {1} x [0,1] and {0} x [2^-i, 2^-(i-1)]."""
    out = {"V0": LineString([(1.0, 0.0), (1.0, 1.0)])}
    for i in range(1, count + 1):
        out[f"V{i}"] = LineString([(0.0, 2.0 ** -i), (0.0, 2.0 ** -(i - 1))])
    return out


def vertical_side_gaps(polygon: Polygon, count: int = 3) -> Dict[str, float]:
    # P_n has n + 2 vertical sides
    count = min(count, polygon.size // 2 - 2)
    out = {}
    for label, limit in vertical_limits(count).items():
        a, b = polygon.side(polygon.side_index(label))
        side = LineString([a.as_tuple(), b.as_tuple()])
        out[label] = float(side.hausdorff_distance(limit))
    return out


# --------------------------------------------------
# Relations
# --------------------------------------------------
def _endpoint_classes(scheme: FoldingScheme) -> List[List[float]]:
    """Boundary parameters glued together at segment and tail endpoints."""
    L = float(scheme.component_length(0))
    uf = UnionFind()

    def key(t) -> int:
        return round((float(t) % L) / CLASS_SNAP)

    values = {}

    def union(s, t):
        values[key(s)], values[key(t)] = float(s) % L, float(t) % L
        uf.union(key(s), key(t))

    for p in scheme.pairings:
        union(p.seg_a.t0, p.seg_b.t1)
        union(p.seg_a.t1, p.seg_b.t0)
    for tail in scheme.tails:
        start = tail.interval_start(scheme.component_length(0))
        union(start, start + tail.cover)
    groups = {}
    for k in values:
        groups.setdefault(uf[k], []).append(values[k])
    return [sorted(g) for g in groups.values() if len(g) > 1]


def relation_points(scheme: FoldingScheme, spacing: float) -> np.ndarray:
    """
    Sample of the relation as points (x, y, x', y') of R^4: the diagonal,
    (z, partner(z)) at boundary points every `spacing`, and every pair of
    an endpoint class.
    """
    polygon = scheme.polygons[0]
    L = scheme.component_length(0)
    count = max(4, math.ceil(float(L) / spacing))

    def at(t):
        if scheme.exact:
            t = Fraction(t)
        return boundary_point(polygon, BoundaryPos(0, t % L))

    rows = []
    for k in range(count):
        t = (k + 0.5) * float(L) / count
        a = at(t)
        rows.append((float(a.x), float(a.y), float(a.x), float(a.y)))
        pos = BoundaryPos(0, Fraction(t) if scheme.exact else t)
        other = partner(scheme, pos)
        if other is None:
            continue
        b = boundary_point(polygon, BoundaryPos(0, other.t % L))
        rows.append((float(a.x), float(a.y), float(b.x), float(b.y)))
        rows.append((float(b.x), float(b.y), float(a.x), float(a.y)))
    for group in _endpoint_classes(scheme):
        pts = [at(t) for t in group]
        for a in pts:
            for b in pts:
                rows.append((float(a.x), float(a.y), float(b.x), float(b.y)))
    return np.array(rows, dtype=float)


@dataclass
class RelationGap:
    n: int
    eps: float
    to_limit: float
    from_limit: float
    samples: Tuple[int, int]

    @property
    def value(self) -> float:
        return max(self.to_limit, self.from_limit)

    @property
    def within_eps(self) -> bool:
        return self.value <= self.eps

    def to_dict(self) -> dict:
        return {"n": self.n, "eps": self.eps, "gap": self.value, "pn_to_limit": self.to_limit,
                "limit_to_pn": self.from_limit, "samples": list(self.samples), "within_eps": self.within_eps}


def relation_gap(n: int, eps: float, pn: Optional[NBTPolygonScheme] = None) -> RelationGap:
    """Sampled Hausdorff distance in R^4 between the relations of P_n and of the tight horseshoe."""
    if not 0 < eps < 0.5:
        raise OutOfRange("eps outside (0, 1/2)", eps=eps)
    pn = build_Pn(n) if pn is None else pn
    spacing = eps / 4
    mine = relation_points(pn.scheme, spacing)
    limit = relation_points(tight_horseshoe_scheme().scheme, spacing)
    to_limit = float(cKDTree(limit).query(mine)[0].max())
    from_limit = float(cKDTree(mine).query(limit)[0].max())
    return RelationGap(n, eps, to_limit, from_limit, (len(mine), len(limit)))


def map_gap(n: int, eps: float, rng: np.random.Generator, samples: int = 64) -> float:
    """max |F_n(z) - F(z)| over random z in [eps, 1-eps]^2 at least eps away from x = 1/2."""
    params = nbt_parameters(n)
    worst = 0.0
    done = 0
    while done < samples:
        x, y = float(rng.uniform(eps, 1 - eps)), float(rng.uniform(eps, 1 - eps))
        if abs(x - 0.5) < eps:
            continue
        done += 1
        a, b = Fn_map(params, x, y), F_map(x, y)
        worst = max(worst, math.dist(a, b))
    return worst


# --------------------------------------------------
# Report
# --------------------------------------------------
@dataclass
class ConvergenceReport:
    max_n: int
    eps: float
    rows: List[dict] = field(default_factory=list)
    n0: Optional[int] = None
    relation: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"max_n": self.max_n, "eps": self.eps, "n0": self.n0, "rows": self.rows, "relation": self.relation}


def gap_levels(max_n: int) -> List[int]:
    levels = {MIN_N, max_n}
    k = 4
    while k < max_n:
        levels.add(k)
        k *= 2
    return sorted(levels)


def convergence_report(max_n: int, eps: float, seed: int = 0) -> ConvergenceReport:
    if max_n < MIN_N:
        raise OutOfRange("max_n must be at least 3", max_n=max_n)
    if not 0 < eps < 0.5:
        raise OutOfRange("eps outside (0, 1/2)", eps=eps)
    rng = np.random.default_rng(seed)
    report = ConvergenceReport(max_n, eps)
    contained = {}
    levels = set(gap_levels(max_n))
    for n in range(MIN_N, max_n + 1):
        polygon = pn_exact_polygon(n)
        hd = boundary_hausdorff(polygon)
        contained[n] = sigma_eps_contained(polygon, eps)
        report.rows.append({"n": n, "lambda": lambda_n(n), "hausdorff": hd.value, "hausdorff_error": hd.error,
                            "contains_sigma_eps": contained[n], "vertical_gaps": vertical_side_gaps(polygon),
                            "map_gap": map_gap(n, eps, rng)})
        # relations need the float scheme
        if n in levels and float_pn_supported(n):
            report.relation.append(relation_gap(n, eps).to_dict())
    report.n0 = find_n0(contained)
    if report.n0 is None:
        logger.warning(f"⚠️ [eps, 1-eps]^2 not inside P{max_n} for eps={eps}")
    else:
        logger.info(f"✅ n0({eps}) = {report.n0} on n <= {max_n}")
    return report


__all__ = ["HausdorffEstimate", "boundary_hausdorff", "sigma_eps_contained", "find_n0", "vertical_side_gaps",
           "relation_points", "RelationGap", "relation_gap", "map_gap", "ConvergenceReport",
           "convergence_report", "gap_levels"]
