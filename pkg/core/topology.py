# core/topology.py
"""
core/topology.py
-------------------------------------------------
Linking structure and topology of the quotient of a folding scheme.

A boundary component is cut into "atoms": one per pairing segment, one per
tail interval. Plain arcs are runs of atoms closed under partners whose
pairings nest without crossing; everything else feeds the Euler
characteristic count.
"""

import copy
import dataclasses
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx
from networkx.utils import UnionFind

from core.errors import DisconnectedUnion
from core.geometry import BoundaryPos, BoundarySegment
from core.log_utils import get_logger
from core.scheme import FoldingScheme, scheme_validate, truncate_tails

logger = get_logger("folding.topology", "Topology")

PLAIN_TAIL_ARRANGEMENTS = ("contiguous", "cantor")
# truncation depths used as evidence for non-compact quotients
EVIDENCE_DEPTHS = (1, 2, 3, 4)


@dataclass
class TopologyReport:
    classification: str
    genus: List[int] = field(default_factory=list)
    maximal_plain_arcs: List[BoundarySegment] = field(default_factory=list)
    unlinked_arc_count: Union[int, str, None] = None
    reason: str = ""
    evidence: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "genus": list(self.genus),
            "maximal_plain_arcs": [
                {"component": a.component, "start": a.t0, "length": a.length} for a in self.maximal_plain_arcs
            ],
            "maximal_unlinked_arc_count": self.unlinked_arc_count,
            "reason": self.reason,
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class _Atom:
    start: object
    length: object
    kind: str          # "seg", "plain" or "barrier"
    owner: int         # pairing or tail index
    partner: Optional[int] = None   # atom index of the other segment, same component only


def _atoms(scheme: FoldingScheme, comp: int) -> List[_Atom]:
    L = scheme.component_length(comp)
    raw = []
    for i, p in enumerate(scheme.pairings):
        for side, seg in enumerate(p.segments()):
            if seg.component == comp:
                raw.append([seg.t0 % L, seg.length, "seg", i, side])
    for i, tail in enumerate(scheme.tails):
        if tail.anchor.component == comp:
            kind = "plain" if tail.arrangement in PLAIN_TAIL_ARRANGEMENTS else "barrier"
            raw.append([tail.interval_start(L), tail.cover, kind, i, 0])
    raw.sort(key=lambda r: r[0])
    where = {(r[3], r[4]): k for k, r in enumerate(raw) if r[2] == "seg"}
    atoms = []
    for r in raw:
        partner = where.get((r[3], 1 - r[4])) if r[2] == "seg" else None
        kind = r[2]
        if kind == "seg" and partner is None:
            kind = "barrier"
        atoms.append(_Atom(r[0], r[1], kind, r[3], partner))
    return atoms


def _longest_plain_runs(atoms: List[_Atom]) -> List[Tuple[int, int]]:
    """For each start atom, the longest saturated non-crossing run (start, count)."""
    n = len(atoms)
    runs = []
    for i in range(n):
        stack: List[int] = []
        best = 0
        for k in range(n):
            a = atoms[(i + k) % n]
            if a.kind == "barrier":
                break
            if a.kind == "seg":
                rel = (a.partner - i) % n
                if rel < k:
                    if not stack or stack[-1] != a.owner:
                        break
                    stack.pop()
                else:
                    stack.append(a.owner)
            if not stack:
                best = k + 1
        if best:
            runs.append((i, best))
    return runs


def _component_plain_runs(scheme: FoldingScheme, comp: int):
    atoms = _atoms(scheme, comp)
    n = len(atoms)
    runs = _longest_plain_runs(atoms)
    if any(count == n for _, count in runs):
        return atoms, [(0, n)]
    maximal = []
    for i, c in runs:
        contained = any(
            (j, d) != (i, c) and (i - j) % n + c <= d
            for j, d in runs
        )
        if not contained:
            maximal.append((i, c))
    return atoms, maximal


def maximal_plain_arcs(scheme: FoldingScheme) -> List[BoundarySegment]:
    """Maximal plain arcs of every component; a whole plain component is one arc."""
    arcs = []
    for comp in range(scheme.component_count):
        atoms, runs = _component_plain_runs(scheme, comp)
        for i, c in runs:
            if c == len(atoms):
                length = scheme.component_length(comp)
            else:
                length = sum((atoms[(i + k) % len(atoms)].length for k in range(c)), 0 * atoms[i].length)
            arcs.append(BoundarySegment(BoundaryPos(comp, atoms[i].start), length))
    return arcs


def maximal_unlinked_arcs(scheme: FoldingScheme) -> List[BoundarySegment]:
    """
    Maximal unlinked arcs of the residual curve left after collapsing
    maximal plain arcs. Neighbouring residual atoms merge when their partners
    are neighbours in reverse order (a pairing cut into subpairings). An arc
    spans the collapsed plain arcs lying inside it.
    """
    arcs = []
    for comp in range(scheme.component_count):
        L = scheme.component_length(comp)
        atoms, runs = _component_plain_runs(scheme, comp)
        n = len(atoms)
        covered = set()
        for i, c in runs:
            covered.update((i + k) % n for k in range(c))
        residual = [k for k in range(n) if k not in covered]
        m = len(residual)
        if m == 0:
            continue
        pos = {k: r for r, k in enumerate(residual)}
        breaks = []
        for r in range(m):
            a, b = atoms[residual[r]], atoms[residual[(r + 1) % m]]
            merged = (
                a.kind == "seg" and b.kind == "seg"
                and a.partner in pos and b.partner in pos
                and (pos[b.partner] + 1) % m == pos[a.partner]
                and pos[a.partner] != (r + 1) % m
            )
            if not merged:
                breaks.append(r)
        if not breaks:
            arcs.append(BoundarySegment(BoundaryPos(comp, atoms[residual[0]].start), L))
            continue
        for first, last in zip(breaks, breaks[1:] + [breaks[0] + m]):
            head = atoms[residual[(first + 1) % m]]
            end = atoms[residual[last % m]]
            length = (end.start + end.length - head.start) % L or L
            arcs.append(BoundarySegment(BoundaryPos(comp, head.start), length))
    return arcs


def maximal_unlinked_arc_count(scheme: FoldingScheme) -> int:
    return len(maximal_unlinked_arcs(scheme))


def euler_genus(scheme: FoldingScheme) -> int:
    """Genus of a single-disk scheme from V - E + F of the identified polygon."""
    if scheme.component_count != 1:
        raise ValueError("reduce to a single disk first")
    L = scheme.component_length(0)
    tol = scheme.tolerance
    values = []
    for p in scheme.pairings:
        for seg in p.segments():
            values += [seg.t0 % L, seg.t1 % L]
    for tail in scheme.tails:
        start = tail.interval_start(L)
        values += [start, (start + tail.cover) % L]
    keys = _snap(values, L, tol)
    uf = UnionFind(set(keys.values()))
    for p in scheme.pairings:
        a, b = p.seg_a, p.seg_b
        uf.union(keys[a.t0 % L], keys[b.t1 % L])
        uf.union(keys[a.t1 % L], keys[b.t0 % L])
    for tail in scheme.tails:
        start = tail.interval_start(L)
        uf.union(keys[start], keys[(start + tail.cover) % L])
    v = len(list(uf.to_sets()))
    chi = v - len(scheme.pairings) + 1
    if chi % 2:
        raise ValueError("odd Euler characteristic for an orientable gluing")
    return (2 - chi) // 2


def _snap(values, length, tol) -> Dict[object, int]:
    """Map boundary values to cluster ids; clusters join within tol, cyclically."""
    ordered = sorted(set(values))
    ids: Dict[object, int] = {}
    cluster = -1
    prev = None
    for v in ordered:
        if prev is None or v - prev > tol:
            cluster += 1
        ids[v] = cluster
        prev = v
    if tol and ordered and ordered[0] + length - ordered[-1] <= tol:
        last = ids[ordered[-1]]
        for v in ordered:
            if ids[v] == last:
                ids[v] = 0
    return ids


# --------------------------------------------------
# Spanning-tree reduction
# --------------------------------------------------
def _subtract(piece, a, l, length, tol):
    os, ln, ns = piece
    removed = [(a, min(a + l, length))]
    if a + l > length:
        removed.append((0 * a, a + l - length))
    parts = [(ns, ns + ln)]
    for r0, r1 in removed:
        nxt = []
        for x0, x1 in parts:
            if r1 <= x0 or r0 >= x1:
                nxt.append((x0, x1))
                continue
            if x0 < r0:
                nxt.append((x0, r0))
            if r1 < x1:
                nxt.append((r1, x1))
        parts = nxt
    return [(os + (x0 - ns), x1 - x0, x0) for x0, x1 in parts if x1 - x0 > tol]


def _arc_pieces(s0, ln, orig_length, new_start):
    s0 = s0 % orig_length
    if s0 + ln <= orig_length:
        return [(s0, ln, new_start)]
    first = orig_length - s0
    return [(s0, first, new_start), (0 * s0, ln - first, new_start + first)]


class _Coordinates:
    """Piecewise-translation map from original components to the glued disk."""

    def __init__(self, scheme: FoldingScheme, root: int):
        self.scheme = scheme
        self.length = scheme.component_length(root)
        self.pieces = {root: [(0 * self.length, self.length, 0 * self.length)]}

    def to_new(self, comp: int, t):
        orig = self.scheme.component_length(comp)
        tol = self.scheme.tolerance
        for closed in (False, True):
            for os, ln, ns in self.pieces[comp]:
                off = (t - os) % orig
                if off < ln or (closed and (off <= ln + tol or off >= orig - tol)):
                    if off >= orig - tol:
                        off = 0 * off
                    return (ns + off) % self.length
        raise ValueError(f"point {t} of component {comp} was glued away")

    def glue(self, disk_seg: BoundarySegment, new_seg: BoundarySegment):
        tol = self.scheme.tolerance
        l = disk_seg.length
        a = self.to_new(disk_seg.component, disk_seg.t0)
        cut = (a + l) % self.length
        pieces = {}
        for comp, plist in self.pieces.items():
            out = []
            for piece in plist:
                for os, ln, ns in _subtract(piece, a, l, self.length, tol):
                    out.append((os, ln, (ns - cut) % self.length))
            pieces[comp] = out
        lj = self.scheme.component_length(new_seg.component)
        pieces[new_seg.component] = _arc_pieces(new_seg.t0 + l, lj - l, lj, self.length - l)
        self.pieces = pieces
        self.length = self.length + lj - 2 * l


def spanning_tree_reduce(scheme: FoldingScheme) -> FoldingScheme:
    """Glue the components along one pairing per edge of a spanning tree of the pairing graph."""
    k = scheme.component_count
    if k <= 1:
        return scheme
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(k))
    for i, p in enumerate(scheme.pairings):
        graph.add_edge(p.seg_a.component, p.seg_b.component, key=i)
    if not nx.is_connected(graph):
        groups = [sorted(c) for c in nx.connected_components(graph)]
        raise DisconnectedUnion("pairing graph is disconnected", components=groups)

    coords = _Coordinates(scheme, 0)
    merged, used = {0}, set()
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in sorted(graph[u]):
            if v in merged:
                continue
            key = min(graph[u][v])
            p = scheme.pairings[key]
            disk_seg, new_seg = (p.seg_a, p.seg_b) if p.seg_a.component == u else (p.seg_b, p.seg_a)
            coords.glue(disk_seg, new_seg)
            merged.add(v)
            used.add(key)
            queue.append(v)

    def remap(seg):
        return BoundarySegment(BoundaryPos(0, coords.to_new(seg.component, seg.t0)), seg.length)

    pairings = [
        dataclasses.replace(p, seg_a=remap(p.seg_a), seg_b=remap(p.seg_b))
        for i, p in enumerate(scheme.pairings) if i not in used
    ]
    tails = []
    for tail in scheme.tails:
        L = scheme.component_length(tail.anchor.component)
        start = coords.to_new(tail.anchor.component, tail.interval_start(L))
        moved = copy.copy(tail)
        t = start if tail.direction == 1 else (start + tail.cover) % coords.length
        moved.anchor = BoundaryPos(0, t)
        tails.append(moved)
    logger.debug(f"🌳 glued {k} components along {len(used)} pairings; new boundary {coords.length}")
    return dataclasses.replace(
        scheme, polygons=(), pairings=tuple(pairings), tails=tuple(tails),
        boundary_lengths=(coords.length,), validated=False,
    )


def _restrict(scheme: FoldingScheme, comps: List[int]) -> FoldingScheme:
    index = {c: i for i, c in enumerate(comps)}

    def move(seg):
        return BoundarySegment(BoundaryPos(index[seg.component], seg.t0), seg.length)

    pairings = [
        dataclasses.replace(p, seg_a=move(p.seg_a), seg_b=move(p.seg_b))
        for p in scheme.pairings if p.seg_a.component in index
    ]
    tails = []
    for tail in scheme.tails:
        if tail.anchor.component in index:
            moved = copy.copy(tail)
            moved.anchor = BoundaryPos(index[tail.anchor.component], tail.anchor.t)
            tails.append(moved)
    polygons = tuple(scheme.polygons[c] for c in comps) if scheme.polygons else ()
    return dataclasses.replace(
        scheme, polygons=polygons, pairings=tuple(pairings), tails=tuple(tails),
        boundary_lengths=tuple(scheme.boundary_lengths[c] for c in comps),
    )


# --------------------------------------------------
# Classification
# --------------------------------------------------
def classify_topology(scheme: FoldingScheme) -> TopologyReport:
    if not scheme.validated:
        scheme = scheme_validate(scheme)
    if any(t.arrangement == "unspecified" for t in scheme.tails):
        return TopologyReport("Unknown", reason="a tail declares no arrangement; its linking cannot be decided")

    try:
        disk = spanning_tree_reduce(scheme)
    except DisconnectedUnion as e:
        parts = [classify_topology(_restrict(scheme, group)) for group in e.details["components"]]
        return _combine(parts, e.details["components"])

    if any(t.arrangement == "crossed" for t in disk.tails):
        counts = {str(d): maximal_unlinked_arc_count(truncate_tails(disk, d)) for d in EVIDENCE_DEPTHS}
        return TopologyReport(
            "NotCompactSurface",
            unlinked_arc_count="Unbounded",
            maximal_plain_arcs=maximal_plain_arcs(disk),
            reason="a crossed tail links infinitely many pairings",
            evidence={"unlinked_arcs_by_depth": counts},
        )

    arcs = maximal_plain_arcs(disk)
    L = disk.component_length(0)
    if len(arcs) == 1 and arcs[0].length == L:
        logger.info(f"✅ {scheme.name or 'scheme'}: plain, quotient is a sphere")
        return TopologyReport("PlainSphere", genus=[0], maximal_plain_arcs=arcs, unlinked_arc_count=0)

    count = maximal_unlinked_arc_count(disk)
    genus = euler_genus(disk)
    logger.info(f"✅ {scheme.name or 'scheme'}: genus {genus}, {count} maximal unlinked arcs")
    return TopologyReport("SurfaceGenus", genus=[genus], maximal_plain_arcs=arcs, unlinked_arc_count=count)


def _combine(parts: List[TopologyReport], groups) -> TopologyReport:
    kinds = {p.classification for p in parts}
    evidence = {"components": groups, "parts": [p.classification for p in parts]}
    if "Unknown" in kinds:
        return TopologyReport("Unknown", reason="a connected piece is undecidable", evidence=evidence)
    if "NotCompactSurface" in kinds:
        return TopologyReport("NotCompactSurface", unlinked_arc_count="Unbounded", evidence=evidence)
    genus = [g for p in parts for g in p.genus]
    counts = [p.unlinked_arc_count or 0 for p in parts]
    # parts number their components from 0 within each group
    arcs = [BoundarySegment(BoundaryPos(group[a.component], a.t0), a.length)
            for p, group in zip(parts, groups) for a in p.maximal_plain_arcs]
    if kinds == {"PlainSphere"}:
        return TopologyReport("PlainSphere", genus=genus, maximal_plain_arcs=arcs, unlinked_arc_count=0,
                              evidence=evidence)
    return TopologyReport("SurfaceGenus", genus=genus, maximal_plain_arcs=arcs,
                          unlinked_arc_count=sum(counts), evidence=evidence)
