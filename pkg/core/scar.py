# core/scar.py
"""
core/scar.py
-------------------------------------------------
The scar of a folding scheme as an exact metric graph.

Vertices are union-find classes of boundary cut points (segment endpoints,
polygon vertices and their partners). Each pairing contributes one edge
per piece between consecutive cut points; tails stay analytic as stars
hanging at the class of their interval endpoints.
"""

import bisect
import dataclasses
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from core.errors import NonTilingGaps, OutOfRange, RefusedInconclusive
from core.geometry import BoundaryPos
from core.log_utils import get_logger
from core.scheme import FoldingScheme, arc_offset, in_arc, scheme_validate, truncate_tails
from core.settings import TAIL_DEPTH

logger = get_logger("folding.scar", "Scar")

PLANAR = "Planar"
REGULAR = "RegularVertex"
SINGULAR = "Singular"


@dataclass
class ScarVertex:
    """
    Vertex of the scar:
      - Attributes:
          preimages: boundary points in the class
          valence: number of incident edge-ends, math.inf at a tail star center
          kind: Planar, RegularVertex or Singular
          isolated: False at an accumulation point the criterion must refuse
    """

    id: object
    preimages: Tuple[BoundaryPos, ...] = ()
    valence: object = 0
    kind: str = REGULAR
    isolated: bool = True

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "valence": self.valence,
            "kind": self.kind,
            "isolated": self.isolated,
            "preimages": [{"component": p.component, "t": p.t} for p in self.preimages],
        }


@dataclass(frozen=True)
class ScarEdge:
    id: int
    u: object
    v: object
    length: object
    source: str = ""
    # boundary position of the u end on the pairing's first segment
    anchor: Optional[BoundaryPos] = None

    @property
    def measure(self):
        return 2 * self.length

    def to_dict(self) -> dict:
        return {"id": self.id, "u": self.u, "v": self.v, "length": self.length,
                "measure": self.measure, "source": self.source}


@dataclass(frozen=True)
class TailStar:
    center: object
    tail: object
    index: int

    def to_dict(self) -> dict:
        return {"center": self.center, "tail": self.index, "kind": self.tail.kind,
                "total": self.tail.total, "longest_branch": self.tail.longest,
                "isolated": self.tail.isolated}


@dataclass(frozen=True)
class ScarPoint:
    kind: str
    vertex: object = None
    edge: Optional[int] = None
    star: Optional[int] = None
    branch: Optional[int] = None
    offset: object = 0

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name in ("vertex", "edge", "star", "branch"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        if self.kind != "vertex":
            out["offset"] = self.offset
        return out


class ScarGraph:
    """
    Metric graph with analytic tail stars.

    The networkx MultiGraph carries one edge per ScarEdge, keyed by edge id,
    with a `length` attribute. Star branches are not graph edges.
    """

    def __init__(self, vertices: Dict[object, ScarVertex], edges: Dict[int, ScarEdge],
                 stars: Sequence[TailStar] = (), scheme: Optional[FoldingScheme] = None, name: str = ""):
        self.vertices = vertices
        self.edges = edges
        self.stars = list(stars)
        self.scheme = scheme
        self.name = name
        self.graph = nx.MultiGraph()
        self.graph.add_nodes_from(vertices)
        for e in edges.values():
            self.graph.add_edge(e.u, e.v, key=e.id, length=e.length)
        self._inj = None
        self._locator = None

    @classmethod
    def from_edges(cls, edges: Sequence[Tuple[object, object, object]], name: str = "",
                   kinds: Optional[Dict[object, str]] = None) -> "ScarGraph":
        """Plain metric graph from (u, v, length) triples."""
        vertices: Dict[object, ScarVertex] = {}
        out = {}
        for i, (u, v, length) in enumerate(edges):
            for x in (u, v):
                vertices.setdefault(x, ScarVertex(x))
                vertices[x].valence += 1
            out[i] = ScarEdge(i, u, v, length, source="model")
        for vid, vert in vertices.items():
            if kinds and vid in kinds:
                vert.kind = kinds[vid]
            else:
                vert.kind = PLANAR if vert.valence == 2 else REGULAR
        return cls(vertices, out, name=name)

    # ---- totals ----
    @property
    def total_measure(self):
        m = sum((e.measure for e in self.edges.values()), 0)
        return m + sum((2 * s.tail.total for s in self.stars), 0)

    @property
    def injectivity_radius(self):
        if self._inj is None:
            self._inj = injectivity_radius(self)
        return self._inj

    def is_tree(self) -> bool:
        g = self.graph
        return g.number_of_edges() == g.number_of_nodes() - nx.number_connected_components(g)

    def star_branch_length(self, star: int, branch: int):
        return self.stars[star].tail.length(branch)

    # ---- points ----
    def vertex_point(self, vid) -> ScarPoint:
        if vid not in self.vertices:
            raise OutOfRange("unknown vertex", vertex=vid)
        return ScarPoint("vertex", vertex=vid)

    def edge_point(self, edge_id: int, offset) -> ScarPoint:
        e = self.edges[edge_id]
        if offset < 0 or offset > e.length:
            raise OutOfRange("offset outside edge", edge=edge_id)
        if offset == 0:
            return ScarPoint("vertex", vertex=e.u)
        if offset == e.length:
            return ScarPoint("vertex", vertex=e.v)
        return ScarPoint("edge", edge=edge_id, offset=offset)

    def star_point(self, star: int, branch: int, offset) -> ScarPoint:
        a = self.star_branch_length(star, branch)
        if offset < 0 or offset > a:
            raise OutOfRange("offset outside branch", star=star, branch=branch)
        if offset == 0:
            return ScarPoint("vertex", vertex=self.stars[star].center)
        return ScarPoint("star", star=star, branch=branch, offset=offset)

    def locate(self, pos: BoundaryPos) -> ScarPoint:
        if self._locator is None:
            raise OutOfRange("graph was not built from a scheme")
        return self._locator.locate(pos)

    # ---- distances ----
    def augmented(self, p: ScarPoint, name="q*") -> Tuple[nx.MultiGraph, object]:
        """Copy of the graph with p inserted as a node; returns (graph, node)."""
        g = self.graph.copy()
        if p.kind == "vertex":
            return g, p.vertex
        if p.kind == "edge":
            e = self.edges[p.edge]
            g.remove_edge(e.u, e.v, key=e.id)
            g.add_edge(e.u, name, key=("a", e.id), length=p.offset)
            g.add_edge(name, e.v, key=("b", e.id), length=e.length - p.offset)
            return g, name
        st = self.stars[p.star]
        a = st.tail.length(p.branch)
        g.add_edge(st.center, name, key="branch", length=p.offset)
        if a > p.offset:
            g.add_edge(name, ("tip", p.star, p.branch), key="branch", length=a - p.offset)
        return g, name

    def _attachments(self, p: ScarPoint, q: ScarPoint, pnode):
        if q.kind == "vertex":
            return [(q.vertex, 0)]
        if q.kind == "edge":
            e = self.edges[q.edge]
            if p.kind == "edge" and p.edge == q.edge:
                if q.offset >= p.offset:
                    return [(pnode, q.offset - p.offset), (e.v, e.length - q.offset)]
                return [(e.u, q.offset), (pnode, p.offset - q.offset)]
            return [(e.u, q.offset), (e.v, e.length - q.offset)]
        st = self.stars[q.star]
        if p.kind == "star" and (p.star, p.branch) == (q.star, q.branch):
            return [(pnode, abs(q.offset - p.offset))]
        return [(st.center, q.offset)]

    def distances_from(self, p: ScarPoint):
        g, node = self.augmented(p)
        return g, node, nx.single_source_dijkstra_path_length(g, node, weight="length")

    def distance(self, p: ScarPoint, q: ScarPoint):
        if p == q:
            return 0 * (p.offset or 0)
        _, node, dist = self.distances_from(p)
        best = math.inf
        for target, extra in self._attachments(p, q, node):
            if target in dist:
                best = min(best, dist[target] + extra)
        return best

    # ---- export ----
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": [v.to_dict() for v in self.vertices.values()],
            "edges": [e.to_dict() for e in self.edges.values()],
            "tail_stars": [s.to_dict() for s in self.stars],
            "total_measure": self.total_measure,
            "injectivity_radius": self.injectivity_radius,
            "tree": self.is_tree(),
        }


# --------------------------------------------------
# Building from a scheme
# --------------------------------------------------
class _CutTable:
    """Sorted cut values per component, clustered within the scheme tolerance."""

    def __init__(self, scheme: FoldingScheme, values: Dict[int, List]):
        self.scheme = scheme
        self.tol = scheme.tolerance
        self.reps: Dict[int, List] = {}
        for comp, vals in values.items():
            reps = []
            for v in sorted(vals):
                if reps and v - reps[-1] <= self.tol:
                    continue
                reps.append(v)
            L = scheme.component_length(comp)
            if self.tol and len(reps) > 1 and reps[0] + L - reps[-1] <= self.tol:
                reps.pop()
            self.reps[comp] = reps

    def find(self, comp: int, t):
        """Index of the cut point at t, or None."""
        L = self.scheme.component_length(comp)
        t = t % L
        reps = self.reps[comp]
        i = bisect.bisect_left(reps, t)
        for j in (i - 1, i, (i + 1) % len(reps), 0, len(reps) - 1):
            if 0 <= j < len(reps):
                d = abs(reps[j] - t)
                if d <= self.tol or L - d <= self.tol:
                    return j
        return None

    def key(self, comp: int, t):
        j = self.find(comp, t)
        if j is None:
            raise NonTilingGaps("point is not a cut point", component=comp, t=t)
        return comp, j

    def inside(self, comp: int, start, length):
        """(offset, index) of cut points in the closed arc, sorted by offset."""
        L = self.scheme.component_length(comp)
        out = []
        for j, v in enumerate(self.reps[comp]):
            off = arc_offset(start, v, L)
            if off >= L - self.tol:
                off = 0 * off
            if off <= length + self.tol:
                out.append((min(off, length), j))
        out.sort(key=lambda x: x[0])
        return out


class _Locator:
    def __init__(self, scar: ScarGraph, scheme: FoldingScheme, table: _CutTable, classes, pieces):
        self.scar = scar
        self.scheme = scheme
        self.table = table
        self.classes = classes
        self.pieces = pieces   # pairing index -> (offsets, edge ids)

    def locate(self, pos: BoundaryPos) -> ScarPoint:
        scheme = self.scheme
        L = scheme.component_length(pos.component)
        if not 0 <= pos.t < L:
            raise OutOfRange("t outside [0, L)", t=pos.t)
        tol = scheme.tolerance
        j = self.table.find(pos.component, pos.t)
        if j is not None:
            return ScarPoint("vertex", vertex=self.classes[(pos.component, j)])
        for i, p in enumerate(scheme.pairings):
            for side, seg in enumerate(p.segments()):
                if seg.component != pos.component or not in_arc(seg.t0, seg.length, pos.t, L, tol, closed=False):
                    continue
                s = arc_offset(seg.t0, pos.t, L)
                if side == 1:
                    s = p.length - s
                offsets, edge_ids = self.pieces[i]
                k = bisect.bisect_right(offsets, s) - 1
                k = min(max(k, 0), len(edge_ids) - 1)
                return self.scar.edge_point(edge_ids[k], s - offsets[k])
        for si, star in enumerate(self.scar.stars):
            tail = star.tail
            if tail.anchor.component != pos.component:
                continue
            off = tail.offset_of(pos.t, L)
            if off is None:
                continue
            hit = tail.locate(off)
            if hit is None:
                return ScarPoint("vertex", vertex=star.center)
            n, w = hit
            a = tail.length(n)
            d = min(w, 2 * a - w)
            if d <= tol:
                return ScarPoint("vertex", vertex=star.center)
            return ScarPoint("star", star=si, branch=n, offset=d)
        raise NonTilingGaps("position covered by nothing", component=pos.component, t=pos.t)


def build_scar_graph(scheme: FoldingScheme) -> ScarGraph:
    if not scheme.validated:
        scheme = scheme_validate(scheme)
    if any(t.arrangement == "unspecified" for t in scheme.tails):
        raise RefusedInconclusive("tail arrangement unspecified; the scar is undetermined")
    tol = scheme.tolerance

    # crossed tails are truncated; their accumulation point is marked non-isolated
    accumulation = []
    crossed = [t for t in scheme.tails if t.arrangement == "crossed"]
    if crossed:
        kept = tuple(t for t in scheme.tails if t.arrangement != "crossed")
        cut = truncate_tails(dataclasses.replace(scheme, tails=tuple(crossed)), TAIL_DEPTH)
        for tail in crossed:
            L = scheme.component_length(tail.anchor.component)
            accumulation.append((tail.anchor.component, tail.t_of(tail.cover, L) % L))
        scheme = dataclasses.replace(scheme, pairings=cut.pairings, tails=kept)
        logger.warning(f"⚠️ {len(crossed)} crossed tail(s) truncated at depth {TAIL_DEPTH}")

    values: Dict[int, List] = {c: [] for c in range(scheme.component_count)}
    for p in scheme.pairings:
        for seg in p.segments():
            L = scheme.component_length(seg.component)
            values[seg.component] += [seg.t0 % L, seg.t1 % L]
    for tail in scheme.tails:
        L = scheme.component_length(tail.anchor.component)
        start = tail.interval_start(L)
        values[tail.anchor.component] += [start, (start + tail.cover) % L]
    corner_values: Dict[int, List] = {c: [] for c in range(scheme.component_count)}
    for c, poly in enumerate(scheme.polygons):
        for off in poly.offsets:
            if any(t.anchor.component == c and _inside_tail(t, off, poly.boundary_length, tol) for t in scheme.tails):
                continue
            corner_values[c].append(off)
            values[c].append(off)
            for p in scheme.pairings:
                for seg, other in ((p.seg_a, p.seg_b), (p.seg_b, p.seg_a)):
                    L = scheme.component_length(seg.component)
                    if seg.component == c and in_arc(seg.t0, seg.length, off, L, tol, closed=False):
                        s = arc_offset(seg.t0, off, L)
                        Lo = scheme.component_length(other.component)
                        values[other.component].append((other.t0 + p.length - s) % Lo)
    table = _CutTable(scheme, values)

    uf = UnionFind([(c, j) for c, reps in table.reps.items() for j in range(len(reps))])
    for p in scheme.pairings:
        La = scheme.component_length(p.seg_a.component)
        for s, j in table.inside(p.seg_a.component, p.seg_a.t0, p.length):
            uf.union((p.seg_a.component, j), table.key(p.seg_b.component, p.seg_b.t0 + p.length - s))
    centers = []
    for tail in scheme.tails:
        L = scheme.component_length(tail.anchor.component)
        start = tail.interval_start(L)
        a = table.key(tail.anchor.component, start)
        uf.union(a, table.key(tail.anchor.component, start + tail.cover))
        centers.append(a)

    classes: Dict[Tuple[int, int], int] = {}
    root_id: Dict[object, int] = {}
    for c in sorted(table.reps):
        for j in range(len(table.reps[c])):
            root = uf[(c, j)]
            if root not in root_id:
                root_id[root] = len(root_id)
            classes[(c, j)] = root_id[root]

    vertices: Dict[int, ScarVertex] = {vid: ScarVertex(vid) for vid in root_id.values()}
    corner_keys = set()
    for c, offs in corner_values.items():
        for off in offs:
            corner_keys.add(table.key(c, off))
    for (c, j), vid in classes.items():
        v = vertices[vid]
        v.preimages = v.preimages + (BoundaryPos(c, table.reps[c][j]),)

    edges: Dict[int, ScarEdge] = {}
    pieces = {}
    for i, p in enumerate(scheme.pairings):
        cuts = table.inside(p.seg_a.component, p.seg_a.t0, p.length)
        offsets, ids = [], []
        for (s0, j0), (s1, j1) in zip(cuts, cuts[1:]):
            if s1 - s0 <= tol:
                continue
            eid = len(edges)
            L = scheme.component_length(p.seg_a.component)
            edges[eid] = ScarEdge(eid, classes[(p.seg_a.component, j0)], classes[(p.seg_a.component, j1)],
                                  s1 - s0, source=f"pairing:{i}",
                                  anchor=BoundaryPos(p.seg_a.component, (p.seg_a.t0 + s0) % L))
            offsets.append(s0)
            ids.append(eid)
        pieces[i] = (offsets, ids)

    stars = [TailStar(classes[centers[k]], tail, k) for k, tail in enumerate(scheme.tails)]

    star_centers = {s.center for s in stars}
    non_isolated = {classes[table.key(c, t)] for c, t in accumulation}
    non_isolated |= {s.center for s in stars if not s.tail.isolated}
    for vid, v in vertices.items():
        v.valence = math.inf if vid in star_centers else len(v.preimages)
        if vid in star_centers or vid in non_isolated:
            v.kind = SINGULAR
        elif v.valence != 2 or any(table.key(p.component, p.t) in corner_keys for p in v.preimages):
            v.kind = REGULAR
        else:
            v.kind = PLANAR
        v.isolated = vid not in non_isolated

    scar = ScarGraph(vertices, edges, stars, scheme=scheme, name=scheme.name)
    scar._locator = _Locator(scar, scheme, table, classes, pieces)

    covered = scar.total_measure
    expected = scheme.total_boundary_length
    slack = tol * (1 + len(edges)) if tol else 0
    if abs(covered - expected) > slack:
        raise NonTilingGaps("scar measure differs from boundary length", measure=covered, boundary=expected)
    logger.info(f"✅ scar {scheme.name or ''}: {len(vertices)} vertices, {len(edges)} edges, {len(stars)} stars")
    return scar


def _inside_tail(tail, t, length, tol) -> bool:
    off = tail.offset_of(t, length)
    return off is not None and tol < off < tail.cover - tol


# --------------------------------------------------
# Metric queries
# --------------------------------------------------
def scar_distance(g: ScarGraph, p: ScarPoint, q: ScarPoint):
    return g.distance(p, q)


def scar_export(g: ScarGraph) -> dict:
    """JSON-ready dict of the scar; Fractions are kept for the report writer."""
    return g.to_dict()


def injectivity_radius(g: ScarGraph):
    """Half the shortest cycle length; math.inf for forests."""
    graph = g.graph
    if g.is_tree():
        return math.inf
    best = math.inf
    for u, v, k, d in graph.edges(keys=True, data=True):
        if u == v:
            best = min(best, d["length"])
            continue
        h = graph.copy()
        h.remove_edge(u, v, key=k)
        try:
            best = min(best, d["length"] + nx.dijkstra_path_length(h, u, v, weight="length"))
        except nx.NetworkXNoPath:
            continue
    return best / 2


def is_dendrite_ball(g: ScarGraph, q: ScarPoint, r) -> bool:
    graph, _, dist = g.distances_from(q)
    inside = {v for v, d in dist.items() if d <= r}
    covered = nx.MultiGraph()
    covered.add_nodes_from(inside)
    for u, v, k, data in graph.edges(keys=True, data=True):
        if u in inside and v in inside and (r - dist[u]) + (r - dist[v]) >= data["length"]:
            covered.add_edge(u, v, key=k)
    cycles = covered.number_of_edges() - covered.number_of_nodes() + nx.number_connected_components(covered)
    return cycles == 0


def circle_points(g: ScarGraph, q: ScarPoint, r) -> List[dict]:
    """Points at distance exactly r from q; star branches reported as counts."""
    graph, _, dist = g.distances_from(q)
    out = []
    for v, d in dist.items():
        if d == r:
            out.append({"vertex": v})
    for u, v, k, data in graph.edges(keys=True, data=True):
        if u not in dist or v not in dist:
            continue
        du, dv, L = dist[u], dist[v], data["length"]
        peak = (du + dv + L) / 2
        fronts = []
        if 0 < r - du < L and r <= peak:
            fronts.append((u, r - du))
        if 0 < r - dv < L and r <= peak and not (r == peak and fronts):
            fronts.append((v, r - dv))
        for end, off in fronts:
            out.append({"edge": k, "from": end, "offset": off})
    for si, star in enumerate(g.stars):
        if star.center not in dist:
            continue
        rho = r - dist[star.center]
        if rho > 0:
            count = star.tail.count_at_least(rho)
            if q.kind == "star" and q.star == si and star.tail.length(q.branch) >= rho:
                count -= 1
            if count:
                out.append({"star": si, "count": count})
    return out


def smooth_valence_two(g: ScarGraph) -> nx.MultiGraph:
    """Merge edges through valence-2 vertices, summing lengths."""
    h = nx.MultiGraph()
    for u, v, d in g.graph.edges(data=True):
        h.add_edge(u, v, length=d["length"])
    changed = True
    while changed:
        changed = False
        for node in list(h.nodes):
            if h.degree(node) != 2 or h.number_of_edges(node, node):
                continue
            (_, a, da), (_, b, db) = list(h.edges(node, data=True))
            h.remove_node(node)
            h.add_edge(a, b, length=da["length"] + db["length"])
            changed = True
    return h


def scar_isomorphic(g1: ScarGraph, g2: ScarGraph, tol: float = 1e-10) -> bool:
    """Isometric after smoothing valence-2 vertices, edge lengths matched within tol."""
    def simple(h):
        out = nx.Graph()
        for u, v, d in h.edges(data=True):
            if out.has_edge(u, v):
                return None
            out.add_edge(u, v, length=float(d["length"]))
        return out

    a, b = simple(smooth_valence_two(g1)), simple(smooth_valence_two(g2))
    if a is None or b is None:
        return False
    return nx.is_isomorphic(a, b, edge_match=lambda x, y: abs(x["length"] - y["length"]) <= tol)
