# core/tail_base.py
"""
core/tail_base.py
-------------------------------------------------
Base class for infinite tail families of folds.

A tail covers one boundary interval of length 2*total, starting at `anchor`
and running in `direction` (+1 counterclockwise, -1 clockwise). Inside it
lie countably many members a_0 > a_1 > ... (each a fold of half-length a_n
unless the arrangement says otherwise). Positions inside the tail are
"offsets" in [0, 2*total] measured from the anchor along `direction`.
"""

import math
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

from core.geometry import BoundaryPos

ARRANGEMENTS = ("contiguous", "cantor", "crossed", "unspecified")

# distinct branch lengths enumerated before a range is treated as dense
ENUMERATION_LIMIT = 256
# heap depth cap when walking a cantor-style arrangement
HEAP_DEPTH = 200
# members past this index sit within float noise of the accumulation point
MEMBER_CAP = 1 << 12


class BaseTail(ABC):
    kind = "base"

    def __init__(self, total, anchor: BoundaryPos, direction: int = 1,
                 arrangement: str = "contiguous", isolated: bool = True):
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        if arrangement not in ARRANGEMENTS:
            raise ValueError(f"unknown arrangement {arrangement!r}")
        if total <= 0:
            raise ValueError("tail total must be positive")
        self.total = total
        self.anchor = anchor
        self.direction = direction
        self.arrangement = arrangement
        self.isolated = isolated

    # ---- lengths ----
    @abstractmethod
    def length(self, n: int):
        """a_n, n >= 0."""

    @abstractmethod
    def count_longer(self, r) -> int:
        """#{n : a_n > r} for r > 0."""

    @abstractmethod
    def remainder(self, k: int):
        """sum of a_n over n >= k."""

    @abstractmethod
    def lengths_between(self, lo, hi) -> Tuple[List, Optional[object]]:
        """
        Distinct member lengths in the open range (lo, hi), descending.
        Returns (lengths, dense_below): when more than ENUMERATION_LIMIT
        lengths exist, the list stops early and dense_below is the smallest
        length returned; (lo, dense_below) then holds infinitely or
        impractically many of them.
        """

    @abstractmethod
    def params(self) -> dict:
        """Kind-specific parameters for reports and scheme files."""

    def count_at_least(self, r) -> int:
        """#{n : a_n >= r}, the N(r) of the ball formulas."""
        if r <= 0:
            return math.inf
        k = self.count_longer(r)
        while self.length(k) == r:
            k += 1
        return k

    def mass_at_most(self, r):
        """sum of a_n over a_n <= r."""
        return self.remainder(self.count_longer(r))

    @property
    def cover(self):
        return 2 * self.total

    @property
    def longest(self):
        return self.length(0)

    # ---- placement on the boundary ----
    def interval_start(self, boundary_length):
        if self.direction == 1:
            return self.anchor.t % boundary_length
        return (self.anchor.t - self.cover) % boundary_length

    def offset_of(self, t, boundary_length):
        """Offset inside the tail of boundary parameter t, or None when t is outside."""
        if self.direction == 1:
            off = (t - self.anchor.t) % boundary_length
        else:
            off = (self.anchor.t - t) % boundary_length
        if off > self.cover:
            return None
        return off

    def t_of(self, offset, boundary_length):
        return (self.anchor.t + self.direction * offset) % boundary_length

    def fold_start(self, n: int):
        """Offset where member n begins (contiguous and crossed layouts)."""
        return 2 * (self.total - self.remainder(n))

    def member(self, n: int):
        """(offset_a, offset_b, length) of member n in tail offsets."""
        a = self.length(n)
        if self.arrangement == "cantor":
            o = self.heap_fold_offset(n)
            return o, o + a, a
        if self.arrangement == "crossed":
            j, second = divmod(n, 2)
            o = self.fold_start(2 * j)
            la, lb = self.length(2 * j), self.length(2 * j + 1)
            if second:
                return o + la, o + 2 * la + lb, lb
            return o, o + la + lb, la
        o = self.fold_start(n)
        return o, o + a, a

    def member_segments(self, n: int, boundary_length):
        """Member n as two boundary (start, length) pairs."""
        return self.segments_for(*self.member(n), boundary_length)

    def segments_for(self, oa, ob, a, boundary_length):
        # reversed direction flips each piece so the pairing stays orientation-reversing
        if self.direction == 1:
            return (self.t_of(oa, boundary_length), a), (self.t_of(ob, boundary_length), a)
        return (self.t_of(oa + a, boundary_length), a), (self.t_of(ob + a, boundary_length), a)

    # ---- cantor-style heap placement ----
    def subtree_cover(self, n: int):
        """Covered length of the heap subtree rooted at member n."""
        s = 0
        for k in range(64):
            first = (n + 1) * 2 ** k - 1
            last = (n + 2) * 2 ** k - 1
            term = self.remainder(first) - self.remainder(last)
            s += term
            if float(term) < 1e-18 * float(self.total):
                break
        return 2 * s

    def heap_fold_offset(self, n: int):
        path = []
        m = n
        while m > 0:
            parent = (m - 1) // 2
            path.append((parent, m == 2 * parent + 1))
            m = parent
        start = 0
        for parent, is_left in reversed(path):
            if not is_left:
                start = start + self.subtree_cover(2 * parent + 1) + 2 * self.length(parent)
        return start + self.subtree_cover(2 * n + 1)

    def locate(self, offset):
        """(member n, offset inside member) or None for accumulation points."""
        if self.arrangement == "cantor":
            return self._locate_heap(offset)
        if offset >= self.cover:
            return None
        lo, hi = 0, 1
        while self.fold_start(hi) <= offset:
            if float(self.cover - self.fold_start(hi)) <= 0.0:
                return None
            lo, hi = hi, hi * 2
            if hi > MEMBER_CAP:
                return None
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.fold_start(mid) <= offset:
                lo = mid
            else:
                hi = mid
        return lo, offset - self.fold_start(lo)

    def _locate_heap(self, offset):
        start, node = 0, 0
        for _ in range(HEAP_DEPTH):
            left = self.subtree_cover(2 * node + 1)
            if offset < start + left:
                node = 2 * node + 1
                continue
            fold = start + left
            if offset <= fold + 2 * self.length(node):
                return node, offset - fold
            start = fold + 2 * self.length(node)
            node = 2 * node + 2
        return None

    # ---- reporting ----
    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "total": self.total,
            "anchor": {"component": self.anchor.component, "t": self.anchor.t},
            "direction": self.direction,
            "arrangement": self.arrangement,
            "isolated": self.isolated,
        }
        out.update(self.params())
        return out

    def __repr__(self):
        return f"<{type(self).__name__} total={self.total} arrangement={self.arrangement}>"
