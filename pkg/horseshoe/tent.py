# horseshoe/tent.py
"""
horseshoe/tent.py
-------------------------------------------------
Tent maps T_lambda on [0, 1] and their kneading data.

    T(x) = lambda*(x - 1) + 2   for x <= 1 - 1/lambda
    T(x) = lambda*(1 - x)       for x >= 1 - 1/lambda
"""

import math
from dataclasses import dataclass
from typing import List, Sequence

from core.errors import OutOfRange

# itinerary symbols within this distance of the turning point read as C
TURNING_TOLERANCE = 1e-10


@dataclass(frozen=True)
class TentMap:
    slope: float

    def __post_init__(self):
        if not math.sqrt(2) < self.slope <= 2:
            raise OutOfRange("tent slope outside (sqrt 2, 2]", slope=self.slope)

    @property
    def turning_point(self) -> float:
        return 1 - 1 / self.slope

    def __call__(self, x: float) -> float:
        if x <= self.turning_point:
            return self.slope * (x - 1) + 2
        return self.slope * (1 - x)

    def orbit(self, x: float, steps: int) -> List[float]:
        out = [x]
        for _ in range(steps):
            out.append(self(out[-1]))
        return out

    def symbol(self, x: float, tol: float = TURNING_TOLERANCE) -> str:
        c = self.turning_point
        if abs(x - c) <= tol:
            return "C"
        return "0" if x < c else "1"


def itinerary(tent: TentMap, x: float, horizon: int, tol: float = TURNING_TOLERANCE) -> str:
    """Symbols of x, T(x), ..., T^(horizon-1)(x)."""
    if horizon < 1:
        raise OutOfRange("horizon must be at least 1", horizon=horizon)
    return "".join(tent.symbol(y, tol) for y in tent.orbit(x, horizon - 1))


def kneading(slope: float, horizon: int) -> str:
    """Itinerary of 1, the kneading invariant of T_slope, up to `horizon` symbols."""
    return itinerary(TentMap(slope), 1.0, horizon)


def get_period_length(symbols: Sequence[str]) -> int:
    """Shortest period p with symbols[i] == symbols[i + p] throughout; len(symbols) if none."""
    n = len(symbols)
    for p in range(1, n // 2 + 1):
        if all(symbols[i] == symbols[i + p] for i in range(n - p)):
            return p
    return n


def nbt_kneading_word(n: int) -> str:
    """The period of (1 0^(n-1) 1 C)."""
    return "1" + "0" * (n - 1) + "1C"
