# horseshoe/test_tight.py
from fractions import Fraction

import pytest

from core.errors import OutOfRange, PointOutside
from core.scheme import scheme_validate
from core.topology import classify_topology
from horseshoe.tight import F_limits, F_map, infinity_od_measure, long_branch_levels

HALF = Fraction(1, 2)


def test_tight_scheme_is_a_plain_sphere(tight):
    scheme = scheme_validate(tight.scheme)
    assert {p.label: p.is_fold for p in scheme.pairings} == {"right": True, "top": True}
    assert classify_topology(scheme).classification == "PlainSphere"


@pytest.mark.parametrize("point,image", [
    ((Fraction(1, 4), Fraction(1, 2)), (HALF, Fraction(1, 4))),
    ((Fraction(3, 4), Fraction(1, 2)), (HALF, Fraction(3, 4))),
    ((0, 0), (0, 0)),
    ((1, 1), (0, HALF)),
])
def test_F_map_values(point, image):
    assert F_map(*point) == image


def test_F_is_discontinuous_across_the_middle():
    left, right = F_limits(HALF)
    assert left == (1, Fraction(1, 4))
    assert right == (1, Fraction(3, 4))
    assert F_map(HALF, HALF) == left
    with pytest.raises(PointOutside):
        F_map(Fraction(3, 2), 0)
    with pytest.raises(PointOutside):
        F_limits(2)


def test_folded_right_side_identifies_the_limits(tight):
    # (1, y/2) and (1, 1 - y/2) sit at t = 1 + y/2 and 2 - y/2: partners in the right fold
    right = tight.scheme.pairings[0]
    y = Fraction(1, 3)
    assert right.seg_a.t0 + right.seg_b.t0 + right.length == 1 + y / 2 + 2 - y / 2


@pytest.mark.parametrize("r,k", [(HALF, 1), (Fraction(1, 3), 1), (Fraction(1, 4), 2), (Fraction(1, 100), 6)])
def test_long_branch_levels(r, k):
    assert long_branch_levels(r) == k


def test_infinity_od_measure():
    assert infinity_od_measure(Fraction(1, 8)) == (2, 6)
    assert infinity_od_measure(Fraction(3, 16)) == (Fraction(5, 2), 4)
    with pytest.raises(OutOfRange):
        infinity_od_measure(0)
