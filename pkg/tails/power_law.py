# tails/power_law.py
import math

from scipy.special import zeta

from core.tail_base import ENUMERATION_LIMIT, BaseTail


class PowerLawTail(BaseTail):
    """
    Power-law tail a_n = c / (n+1)^k, k > 1, c = total / zeta(k).
    Float only; remainders come from the Hurwitz zeta function.
    """

    kind = "power_law"

    def __init__(self, total, exponent, anchor, direction=1, arrangement="contiguous", isolated=True):
        super().__init__(float(total), anchor, direction, arrangement, isolated)
        if exponent <= 1:
            raise ValueError("power-law exponent must exceed 1")
        self.exponent = float(exponent)
        self.scale = self.total / float(zeta(self.exponent, 1))

    def length(self, n: int) -> float:
        return self.scale / (n + 1) ** self.exponent

    def remainder(self, k: int) -> float:
        return self.scale * float(zeta(self.exponent, k + 1))

    def count_longer(self, r) -> int:
        r = float(r)
        if r >= self.scale:
            return 0
        k = max(0, math.ceil((self.scale / r) ** (1 / self.exponent)) - 1)
        while k > 0 and self.length(k - 1) <= r:
            k -= 1
        while self.length(k) > r:
            k += 1
        return k

    def lengths_between(self, lo, hi):
        n = self.count_at_least(hi) if hi <= self.scale else 0
        out = []
        while True:
            a = self.length(n)
            if a <= lo:
                return out, None
            if len(out) >= ENUMERATION_LIMIT:
                return out, out[-1]
            out.append(a)
            n += 1

    def params(self) -> dict:
        return {"exponent": self.exponent}
