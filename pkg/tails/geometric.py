# tails/geometric.py
import math
from fractions import Fraction

from core.numeric import is_exact
from core.tail_base import ENUMERATION_LIMIT, MEMBER_CAP, BaseTail


class GeometricTail(BaseTail):
    """
    Geometric tail:
      - Attributes:
          ratio: lambda > 1, a_n = a_0 / lambda^n
          total: sum of a_n (the tail covers 2*total of boundary)
      - Behavior:
          exact Fractions when ratio and total are rational; N(r), the
          remainder and every branch-length crossing have closed forms
    """

    kind = "geometric"

    def __init__(self, total, ratio, anchor, direction=1, arrangement="contiguous", isolated=True):
        super().__init__(total, anchor, direction, arrangement, isolated)
        if ratio <= 1:
            raise ValueError("geometric ratio must exceed 1")
        self.ratio = ratio
        self.exact = is_exact(ratio) and is_exact(total)
        if self.exact:
            self.ratio = Fraction(ratio)
            self.total = Fraction(total)
        self.a0 = self.total * (self.ratio - 1) / self.ratio

    def length(self, n: int):
        if self.exact and n <= MEMBER_CAP:
            return self.a0 / self.ratio ** n
        return float(self.a0) * float(self.ratio) ** (-n)

    def remainder(self, k: int):
        if self.exact and k <= MEMBER_CAP:
            return self.total / self.ratio ** k
        return float(self.total) * float(self.ratio) ** (-k)

    def count_longer(self, r) -> int:
        if r >= self.a0:
            return 0
        k = max(0, math.ceil(math.log(float(self.a0) / float(r)) / math.log(float(self.ratio))))
        while k > 0 and self.length(k - 1) <= r:
            k -= 1
        while self.length(k) > r:
            k += 1
        return k

    def lengths_between(self, lo, hi):
        n = self.count_at_least(hi) if hi <= self.a0 else 0
        out = []
        while True:
            a = self.length(n)
            if a <= lo or a == 0:
                return out, None
            if len(out) >= ENUMERATION_LIMIT:
                return out, out[-1]
            out.append(a)
            n += 1

    def params(self) -> dict:
        return {"ratio": self.ratio}

    def log_bound_constants(self):
        """(C1, C2) with N(s) <= log_lambda(a0/s) + 1 split into constant and ln(1/s) parts."""
        ln_l = math.log(float(self.ratio))
        lam = float(self.ratio)
        c1 = 3 * (math.log(float(self.a0)) / ln_l + 1) + 2 * lam / (lam - 1)
        c2 = 3 / ln_l
        return c1, c2
