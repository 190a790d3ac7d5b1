# core/oracle.py
"""
Brute-force quotient distances by chains of boundary moves and free jumps
across pairings, used to cross-check the scar metric.
"""

import bisect
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from core.geometry import BoundaryPos, Point, polygon_validate
from core.log_utils import get_logger
from core.scheme import FoldingScheme, arc_offset, in_arc, make_pairing, make_scheme, scheme_validate, truncate_tails
from core.settings import ORACLE_GRID_CAP, TAIL_DEPTH

logger = get_logger("folding.oracle", "Oracle")


class ChainOracle:
    """
    Chain graph of a finite scheme.

    Nodes are boundary points: segment endpoints, a grid on every segment at
    pitch max(eps, length / ORACLE_GRID_CAP), and the partners of all of them.
    Consecutive nodes on a component are joined at the cost of their gap;
    each node inside a pairing segment is joined to its partner at cost 0.
    """

    def __init__(self, scheme: FoldingScheme, eps):
        if scheme.tails:
            scheme = truncate_tails(scheme, TAIL_DEPTH)
        if not scheme.validated:
            scheme = scheme_validate(scheme)
        self.scheme = scheme
        self.eps = eps
        self.points: Dict[int, set] = {c: set() for c in range(scheme.component_count)}
        for p in scheme.pairings:
            pitch = max(eps, p.length / ORACLE_GRID_CAP)
            steps = max(1, int(p.length / pitch))
            for seg in p.segments():
                L = scheme.component_length(seg.component)
                for k in range(steps + 1):
                    self.points[seg.component].add((seg.t0 + p.length * Fraction(k, steps)) % L
                                                   if scheme.exact else (seg.t0 + p.length * k / steps) % L)
        self.graph = nx.Graph()
        self._extra: List[Tuple[int, object]] = []

    def _partner(self, comp: int, t):
        scheme = self.scheme
        L = scheme.component_length(comp)
        tol = scheme.tolerance
        out = []
        for p in scheme.pairings:
            for seg, other in ((p.seg_a, p.seg_b), (p.seg_b, p.seg_a)):
                if seg.component != comp or not in_arc(seg.t0, seg.length, t, L, tol):
                    continue
                s = arc_offset(seg.t0, t, L)
                if s > seg.length + tol:
                    s = 0 * s
                s = min(s, seg.length)
                Lo = scheme.component_length(other.component)
                out.append((other.component, (other.t0 + seg.length - s) % Lo))
        return out

    def _build(self, extra: List[BoundaryPos]):
        points = {c: set(v) for c, v in self.points.items()}
        for pos in extra:
            points[pos.component].add(pos.t)
        for pos in extra:
            for comp, t in self._partner(pos.component, pos.t):
                points[comp].add(t)
        g = nx.Graph()
        for comp, vals in points.items():
            L = self.scheme.component_length(comp)
            ordered = sorted(vals)
            for a, b in zip(ordered, ordered[1:]):
                g.add_edge((comp, a), (comp, b), weight=float(b - a))
            if len(ordered) > 1:
                g.add_edge((comp, ordered[-1]), (comp, ordered[0]), weight=float(ordered[0] + L - ordered[-1]))
            else:
                g.add_nodes_from((comp, t) for t in ordered)
        for comp, vals in points.items():
            for t in vals:
                for oc, ot in self._partner(comp, t):
                    target = _nearest(points[oc], ot, self.scheme.tolerance)
                    if target is not None and (oc, target) != (comp, t):
                        g.add_edge((comp, t), (oc, target), weight=0.0)
        return g

    def distance(self, x: BoundaryPos, y: BoundaryPos) -> float:
        return self.distances([(x, y)])[0]

    def distances(self, pairs: Sequence[Tuple[BoundaryPos, BoundaryPos]]) -> List[float]:
        """Distances of many pairs on one chain graph holding all of their points."""
        g = self._build([pos for pair in pairs for pos in pair])
        out = []
        for x, y in pairs:
            try:
                out.append(nx.dijkstra_path_length(g, (x.component, x.t), (y.component, y.t), weight="weight"))
            except nx.NetworkXNoPath:
                out.append(float("inf"))
        return out


def _nearest(values, t, tol):
    if t in values:
        return t
    if not tol:
        return None
    ordered = sorted(values)
    i = bisect.bisect_left(ordered, t)
    for j in (i - 1, i):
        if 0 <= j < len(ordered) and abs(ordered[j] - t) <= tol:
            return ordered[j]
    return None


def chain_distance_bruteforce(scheme: FoldingScheme, x: BoundaryPos, y: BoundaryPos, eps) -> float:
    return ChainOracle(scheme, eps).distance(x, y)


# --------------------------------------------------
# Random plain schemes
# --------------------------------------------------
def _dyck_word(rng: np.random.Generator, k: int) -> List[int]:
    word, opened, depth = [], 0, 0
    while len(word) < 2 * k:
        if opened < k and (depth == 0 or rng.random() < 0.5):
            word.append(1)
            opened += 1
            depth += 1
        else:
            word.append(-1)
            depth -= 1
    return word


def random_plain_scheme(rng: np.random.Generator, max_pairings: int = 8) -> FoldingScheme:
    """A rectangle with a seeded non-crossing (Dyck) matching of boundary arcs."""
    w = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    h = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    polygon = polygon_validate([Point(Fraction(0), Fraction(0)), Point(w, Fraction(0)), Point(w, h), Point(Fraction(0), h)])
    L = polygon.boundary_length

    k = int(rng.integers(1, max_pairings + 1))
    word = _dyck_word(rng, k)
    weights = [Fraction(int(rng.integers(1, 9))) for _ in range(k)]
    scale = L / (2 * sum(weights))

    stack, arcs, pair_of = [], [], {}
    j = 0
    for i, step in enumerate(word):
        if step == 1:
            stack.append((i, j))
            arcs.append(weights[j] * scale)
            j += 1
        else:
            first, idx = stack.pop()
            pair_of[first] = i
            arcs.append(weights[idx] * scale)

    shift = L * Fraction(int(rng.integers(0, 1000)), 1000)
    starts, t = [], shift
    for a in arcs:
        starts.append(t % L)
        t += a
    pairings = [make_pairing(starts[i], starts[e], arcs[i], label=f"p{n}")
                for n, (i, e) in enumerate(sorted(pair_of.items()))]
    return scheme_validate(make_scheme([polygon], pairings, name="random-plain"))
