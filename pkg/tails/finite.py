# tails/finite.py
from fractions import Fraction

from core.numeric import is_exact
from core.tail_base import BaseTail


class FiniteTail(BaseTail):
    """
    A finite run of contiguous folds written in tail form.

    Validation expands it into explicit pairings; it never reaches the
    scar as an analytic star.
    """

    kind = "finite"

    def __init__(self, lengths, anchor, direction=1, arrangement="contiguous", isolated=True):
        if not lengths:
            raise ValueError("finite tail needs at least one fold")
        lengths = [Fraction(a) if is_exact(a) else float(a) for a in lengths]
        if any(a <= 0 for a in lengths):
            raise ValueError("fold lengths must be positive")
        super().__init__(sum(lengths), anchor, direction, "contiguous", isolated)
        self.lengths = lengths

    @property
    def count(self) -> int:
        return len(self.lengths)

    def length(self, n: int):
        return self.lengths[n] if n < len(self.lengths) else 0

    def remainder(self, k: int):
        return sum(self.lengths[k:])

    def count_longer(self, r) -> int:
        return sum(1 for a in self.lengths if a > r)

    def count_at_least(self, r) -> int:
        return sum(1 for a in self.lengths if a >= r)

    def mass_at_most(self, r):
        return sum(a for a in self.lengths if a <= r)

    def lengths_between(self, lo, hi):
        return sorted({a for a in self.lengths if lo < a < hi}, reverse=True), None

    def params(self) -> dict:
        return {"lengths": list(self.lengths)}
