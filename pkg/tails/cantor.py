# tails/cantor.py
from fractions import Fraction

from core.numeric import is_exact
from core.tail_base import ENUMERATION_LIMIT, BaseTail


class CantorTail(BaseTail):
    """
    Middle-thirds Cantor tail over an interval of length 2*total.

    Members are listed in heap order: level j holds 2^j folds of half-length
    total / 3^(j+1), one in the middle third of every interval that survives
    j rounds of deletion. With the default "cantor" arrangement every fold
    sits exactly in its middle third; the complement is the Cantor set.
    """

    kind = "cantor"

    def __init__(self, total, anchor, direction=1, arrangement="cantor", isolated=True):
        super().__init__(total, anchor, direction, arrangement, isolated)
        if is_exact(total):
            self.total = Fraction(total)

    @staticmethod
    def level(n: int) -> int:
        return (n + 1).bit_length() - 1

    def level_length(self, j: int):
        return self.total / 3 ** (j + 1)

    def length(self, n: int):
        return self.level_length(self.level(n))

    def remainder(self, k: int):
        j = self.level(k)
        left_in_level = 2 ** (j + 1) - 1 - k
        return left_in_level * self.level_length(j) + self.total * Fraction(2, 3) ** (j + 1)

    def _levels_longer(self, r) -> int:
        j = 0
        while self.level_length(j) > r:
            j += 1
        return j

    def count_longer(self, r) -> int:
        return 2 ** self._levels_longer(r) - 1

    def count_at_least(self, r) -> int:
        j = self._levels_longer(r)
        if self.level_length(j) == r:
            j += 1
        return 2 ** j - 1

    def lengths_between(self, lo, hi):
        out = []
        j = 0
        while self.level_length(j) >= hi:
            j += 1
        while self.level_length(j) > lo:
            if len(out) >= ENUMERATION_LIMIT:
                return out, out[-1]
            out.append(self.level_length(j))
            j += 1
        return out, None

    def subtree_cover(self, n: int):
        return 2 * self.total / 3 ** self.level(n)

    def params(self) -> dict:
        return {}
