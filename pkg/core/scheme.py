# core/scheme.py
"""
core/scheme.py
-------------------------------------------------
Paper-folding schemes: polygons plus a full, interior-disjoint collection
of segment pairings and infinite tail families.

A pairing identifies seg_a.t0 + s with seg_b.t0 + (length - s), so every
identification is length-preserving and orientation-reversing.
"""

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from core.errors import LengthMismatch, NotFull, OutOfRange, OverlappingInteriors
from core.geometry import BoundaryPos, BoundarySegment, Polygon
from core.log_utils import get_logger
from core.numeric import Number, is_exact
from core.settings import FLOAT_TOLERANCE
from core.tail_base import BaseTail

logger = get_logger("folding.scheme", "Scheme")


@dataclass(frozen=True)
class SegmentPairing:
    seg_a: BoundarySegment
    seg_b: BoundarySegment
    label: str = ""
    is_fold: bool = False

    @property
    def length(self) -> Number:
        return self.seg_a.length

    @property
    def component(self) -> int:
        return self.seg_a.component

    def segments(self) -> Tuple[BoundarySegment, BoundarySegment]:
        return self.seg_a, self.seg_b

    def to_dict(self) -> dict:
        def seg(s):
            return {"component": s.component, "start": s.t0, "length": s.length}
        return {"a": seg(self.seg_a), "b": seg(self.seg_b), "label": self.label, "is_fold": self.is_fold}


def make_pairing(start_a, start_b, length, component_a: int = 0, component_b: Optional[int] = None,
                 label: str = "") -> SegmentPairing:
    if component_b is None:
        component_b = component_a
    return SegmentPairing(
        BoundarySegment(BoundaryPos(component_a, start_a), length),
        BoundarySegment(BoundaryPos(component_b, start_b), length),
        label,
    )


@dataclass(frozen=True)
class FoldingScheme:
    """
    A multipolygon with its pairings and tails.

    Attributes:
        polygons: the pieces of paper; empty for reduced (abstract) disks
        pairings: finite part of the scheme
        tails: infinite families of folds
        boundary_lengths: length of each boundary component
        tolerance: 0 for exact schemes, otherwise the float comparison slack
    """

    polygons: Tuple[Polygon, ...] = ()
    pairings: Tuple[SegmentPairing, ...] = ()
    tails: Tuple[BaseTail, ...] = ()
    boundary_lengths: Tuple[Number, ...] = ()
    tolerance: Number = 0
    name: str = ""
    validated: bool = False

    @property
    def exact(self) -> bool:
        return self.tolerance == 0

    @property
    def component_count(self) -> int:
        return len(self.boundary_lengths)

    def component_length(self, c: int) -> Number:
        return self.boundary_lengths[c]

    @property
    def total_boundary_length(self) -> Number:
        return sum(self.boundary_lengths)

    @property
    def total_pairing_length(self) -> Number:
        return sum((p.length for p in self.pairings), 0)

    @property
    def total_tail_length(self) -> Number:
        return sum((t.total for t in self.tails), 0)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "mode": "exact" if self.exact else "float",
            "components": self.component_count,
            "boundary_length": self.total_boundary_length,
            "pairing_length": self.total_pairing_length,
            "tail_length": self.total_tail_length,
            "pairings": len(self.pairings),
            "tails": [t.to_dict() for t in self.tails],
        }


def make_scheme(polygons: Sequence[Polygon] = (), pairings: Iterable[SegmentPairing] = (),
                tails: Iterable[BaseTail] = (), boundary_lengths: Optional[Sequence[Number]] = None,
                name: str = "", tolerance: Optional[float] = None) -> FoldingScheme:
    polygons = tuple(polygons)
    if boundary_lengths is None:
        boundary_lengths = [p.boundary_length for p in polygons]
    lengths = tuple(boundary_lengths)
    if tolerance is None:
        exact = all(p.exact for p in polygons) and all(is_exact(x) for x in lengths)
        tolerance = 0 if exact else FLOAT_TOLERANCE
    elif tolerance == 0:
        # exact schemes carry an int zero
        tolerance = 0
    return FoldingScheme(polygons, tuple(pairings), tuple(tails), lengths, tolerance, name)


# --------------------------------------------------
# Circle helpers
# --------------------------------------------------
def arc_offset(start, t, length):
    return (t - start) % length


def in_arc(start, seg_length, t, length, tol=0, closed=True) -> bool:
    off = arc_offset(start, t, length)
    if closed:
        return off <= seg_length + tol or off >= length - tol
    return tol < off < seg_length - tol


def same_point(a, b, length, tol=0) -> bool:
    d = (a - b) % length
    return d <= tol or d >= length - tol


# --------------------------------------------------
# Validation
# --------------------------------------------------
def expand_finite_tails(scheme: FoldingScheme) -> FoldingScheme:
    """Turn finite tails into explicit fold pairings."""
    if not any(t.kind == "finite" for t in scheme.tails):
        return scheme
    pairings = list(scheme.pairings)
    tails = []
    for ti, tail in enumerate(scheme.tails):
        if tail.kind != "finite":
            tails.append(tail)
            continue
        L = scheme.component_length(tail.anchor.component)
        for n in range(tail.count):
            (ta, a), (tb, _) = tail.member_segments(n, L)
            pairings.append(make_pairing(ta, tb, a, tail.anchor.component, label=f"tail{ti}:{n}"))
    return dataclasses.replace(scheme, pairings=tuple(pairings), tails=tuple(tails))


def _intervals(scheme: FoldingScheme):
    """(component, start, length, owner) for every pairing segment and tail interval."""
    out = []
    for i, p in enumerate(scheme.pairings):
        for side, seg in (("a", p.seg_a), ("b", p.seg_b)):
            L = scheme.component_length(seg.component)
            out.append((seg.component, seg.t0 % L, seg.length, f"pairing{i}{side}"))
    for i, tail in enumerate(scheme.tails):
        L = scheme.component_length(tail.anchor.component)
        out.append((tail.anchor.component, tail.interval_start(L), tail.cover, f"tail{i}"))
    return out


def _is_fold(p: SegmentPairing, scheme: FoldingScheme) -> bool:
    if p.seg_a.component != p.seg_b.component:
        return False
    L = scheme.component_length(p.component)
    tol = scheme.tolerance
    return same_point(p.seg_a.t1, p.seg_b.t0, L, tol) or same_point(p.seg_b.t1, p.seg_a.t0, L, tol)


def scheme_validate(scheme: FoldingScheme) -> FoldingScheme:
    """Check lengths, interior-disjointness and fullness; annotate folds."""
    scheme = expand_finite_tails(scheme)
    tol = scheme.tolerance

    for i, p in enumerate(scheme.pairings):
        if p.seg_a.length <= 0 or p.seg_b.length <= 0:
            raise OutOfRange("pairing segment with non-positive length", pairing=i)
        diff = p.seg_a.length - p.seg_b.length
        if (diff != 0) if tol == 0 else abs(diff) > tol:
            raise LengthMismatch("segments of different length", pairing=i,
                                 a=p.seg_a.length, b=p.seg_b.length)
        for seg in p.segments():
            if not 0 <= seg.component < scheme.component_count:
                raise OutOfRange("segment on a missing component", pairing=i, component=seg.component)
    for i, tail in enumerate(scheme.tails):
        if not 0 <= tail.anchor.component < scheme.component_count:
            raise OutOfRange("tail on a missing component", tail=i)

    by_comp = {}
    for comp, start, length, owner in _intervals(scheme):
        by_comp.setdefault(comp, []).append((start, length, owner))
    for comp, items in by_comp.items():
        L = scheme.component_length(comp)
        items.sort(key=lambda x: x[0])
        for k, (start, length, owner) in enumerate(items):
            if length > L + tol:
                raise OverlappingInteriors("piece longer than its boundary", pair=[owner, owner])
            nxt_start, _, nxt_owner = items[(k + 1) % len(items)]
            if k + 1 == len(items):
                nxt_start = nxt_start + L
            if len(items) == 1:
                continue
            if start + length > nxt_start + tol:
                raise OverlappingInteriors("interiors overlap", pair=[owner, nxt_owner], component=comp)

    half = Fraction(0) if scheme.exact else 0.0
    half = sum(scheme.boundary_lengths, half) / 2
    deficit = half - scheme.total_pairing_length - scheme.total_tail_length
    slack = 0 if scheme.exact else tol * (1 + len(scheme.pairings) + len(scheme.tails))
    if abs(deficit) > slack:
        raise NotFull("pairings do not cover the boundary", deficit=deficit)

    pairings = tuple(dataclasses.replace(p, is_fold=_is_fold(p, scheme)) for p in scheme.pairings)
    logger.debug(f"✅ scheme {scheme.name or '<unnamed>'} validated: {len(pairings)} pairings, {len(scheme.tails)} tails")
    return dataclasses.replace(scheme, pairings=pairings, validated=True)


# --------------------------------------------------
# Pairing operations
# --------------------------------------------------
def pairs_linked(p1: SegmentPairing, p2: SegmentPairing, boundary_length: Optional[Number] = None) -> bool:
    """Cyclic interleaving of the two pairings' segments on one boundary circle."""
    if p1 == p2 or p1 is p2:
        return False
    comps = {p1.seg_a.component, p1.seg_b.component, p2.seg_a.component, p2.seg_b.component}
    if len(comps) != 1:
        return False
    m = [s.midpoint(boundary_length) for s in (p1.seg_a, p1.seg_b, p2.seg_a, p2.seg_b)]
    lo, hi = min(m[0], m[1]), max(m[0], m[1])
    inside = [lo < x < hi for x in m[2:]]
    return inside[0] != inside[1]


def split_pairing(pairing: SegmentPairing, s) -> Tuple[SegmentPairing, SegmentPairing]:
    """Two subpairings: the first s of seg_a and the rest."""
    if not 0 < s < pairing.length:
        raise OutOfRange("split point outside the pairing", s=s)
    a, b, n = pairing.seg_a, pairing.seg_b, pairing.length
    first = SegmentPairing(
        BoundarySegment(a.start, s),
        BoundarySegment(BoundaryPos(b.component, b.t0 + n - s), s),
        pairing.label + "/1" if pairing.label else "",
    )
    second = SegmentPairing(
        BoundarySegment(BoundaryPos(a.component, a.t0 + s), n - s),
        BoundarySegment(b.start, n - s),
        pairing.label + "/2" if pairing.label else "",
    )
    return first, second


def partner(scheme: FoldingScheme, pos: BoundaryPos) -> Optional[BoundaryPos]:
    """The point identified with pos by the pairing or tail fold containing it."""
    tol = scheme.tolerance
    L = scheme.component_length(pos.component)
    for p in scheme.pairings:
        for seg, other in ((p.seg_a, p.seg_b), (p.seg_b, p.seg_a)):
            if seg.component != pos.component or not in_arc(seg.t0, seg.length, pos.t, L, tol):
                continue
            s = arc_offset(seg.t0, pos.t, L)
            s = 0 * s if s > seg.length + tol else min(s, seg.length)
            Lo = scheme.component_length(other.component)
            return BoundaryPos(other.component, (other.t0 + seg.length - s) % Lo)
    for tail in scheme.tails:
        if tail.anchor.component != pos.component:
            continue
        off = tail.offset_of(pos.t, L)
        if off is None:
            continue
        hit = tail.locate(off)
        if hit is None:
            return pos
        n, _ = hit
        oa, ob, a = tail.member(n)
        if oa <= off <= oa + a:
            return BoundaryPos(pos.component, tail.t_of(ob + a - (off - oa), L))
        return BoundaryPos(pos.component, tail.t_of(oa + a - (off - ob), L))
    return None


def truncate_tails(scheme: FoldingScheme, depth: int) -> FoldingScheme:
    """
    Replace every tail by its first `depth` members and one closing fold
    over the remainder. Cantor-style tails keep floor(log2(depth+1)) whole
    levels and fold each surviving gap in half.
    """
    if not scheme.tails:
        return scheme
    pairings = list(scheme.pairings)
    for ti, tail in enumerate(scheme.tails):
        comp = tail.anchor.component
        L = scheme.component_length(comp)

        def add(oa, ob, a, label):
            (ta, la), (tb, _) = tail.segments_for(oa, ob, a, L)
            pairings.append(make_pairing(ta, tb, la, comp, label=label))

        if tail.arrangement == "cantor":
            levels = max(1, (depth + 1).bit_length() - 1)
            kept = 2 ** levels - 1
            for n in range(kept):
                add(*tail.member(n), f"tail{ti}:{n}")
            for n in range(kept, 2 * kept + 1):
                size = tail.subtree_cover(n)
                start = tail.heap_fold_offset(n) - tail.subtree_cover(2 * n + 1)
                add(start, start + size / 2, size / 2, f"tail{ti}:gap{n}")
            continue
        count = 2 * depth if tail.arrangement == "crossed" else depth
        for n in range(count):
            add(*tail.member(n), f"tail{ti}:{n}")
        rest_start = tail.fold_start(count)
        rest = tail.cover - rest_start
        if rest > 0:
            add(rest_start, rest_start + rest / 2, rest / 2, f"tail{ti}:rest")
    out = dataclasses.replace(scheme, pairings=tuple(pairings), tails=(), validated=False)
    logger.debug(f"✂️ truncated {len(scheme.tails)} tails at depth {depth}")
    return out


def scheme_pairing_segments(scheme: FoldingScheme) -> List[Tuple[int, BoundarySegment]]:
    return [(i, seg) for i, p in enumerate(scheme.pairings) for seg in p.segments()]
