# horseshoe/tight.py
"""
horseshoe/tight.py
-------------------------------------------------
The tight horseshoe: the unit square with its right and top sides folded
in half and geometric fold tails (lengths 1/4, 1/8, ...) on the bottom and
left sides, accumulating at (0, 0). All corners are one scar point, the
centre of an infinity-od with two branches of each length 1/2^i, i >= 1.

Boundary parameter runs counterclockwise from (0, 0):
bottom [0, 1], right [1, 2], top [2, 3], left [3, 4].
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from core.errors import OutOfRange, PointOutside
from core.geometry import BoundaryPos, Point, Polygon, polygon_validate
from core.scheme import FoldingScheme, make_pairing, make_scheme
from tails import GeometricTail

SIDE_LABELS = ["bottom", "right", "top", "left"]
TAIL_TOTAL = Fraction(1, 2)
TAIL_RATIO = Fraction(2)


@dataclass
class TightHorseshoeScheme:
    polygon: Polygon
    scheme: FoldingScheme

    @property
    def corner(self) -> BoundaryPos:
        return BoundaryPos(0, Fraction(0))

    def F(self, x, y) -> Tuple[object, object]:
        return F_map(x, y)


def tight_horseshoe_scheme() -> TightHorseshoeScheme:
    square = polygon_validate([Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)], SIDE_LABELS)
    half = Fraction(1, 2)
    pairings = [
        make_pairing(Fraction(1), Fraction(3, 2), half, label="right"),
        make_pairing(Fraction(2), Fraction(5, 2), half, label="top"),
    ]
    tails = [
        GeometricTail(TAIL_TOTAL, TAIL_RATIO, BoundaryPos(0, Fraction(1)), direction=-1),
        GeometricTail(TAIL_TOTAL, TAIL_RATIO, BoundaryPos(0, Fraction(3)), direction=1),
    ]
    scheme = make_scheme([square], pairings, tails, name="tight_horseshoe")
    return TightHorseshoeScheme(square, scheme)


def F_map(x, y) -> Tuple[object, object]:
    """The horseshoe map of the square, exact on Fractions."""
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise PointOutside("point outside the unit square", point=[x, y])
    if x <= Fraction(1, 2):
        return 2 * x, y / 2
    return 2 * (1 - x), 1 - y / 2


def F_limits(y) -> Tuple[Tuple[object, object], Tuple[object, object]]:
    """Left and right limits of F at (1/2, y); they differ, and lie on the folded right side."""
    if not 0 <= y <= 1:
        raise PointOutside("point outside the unit square", point=[Fraction(1, 2), y])
    return (Fraction(1), y / 2), (Fraction(1), 1 - y / 2)


# --------------------------------------------------
# The infinity-od at the corner
# --------------------------------------------------
def long_branch_levels(r) -> int:
    """k = #{i >= 1 : 2^-i >= r}."""
    if r <= 0:
        raise OutOfRange("radius must be positive", r=r)
    k = 0
    while Fraction(1, 2 ** (k + 1)) >= r:
        k += 1
    return k


def infinity_od_measure(r) -> Tuple[object, int]:
    """
    (m, n) of the ball of radius r about the centre: m = 4kr + 4/2^k, n = 2k.
    Exact for rational r.
    """
    k = long_branch_levels(r)
    return 4 * k * r + Fraction(4, 2 ** k), 2 * k


__all__ = ["TightHorseshoeScheme", "tight_horseshoe_scheme", "F_map", "F_limits",
           "infinity_od_measure", "long_branch_levels"]
