# core/test_collar.py
import math
from fractions import Fraction

import numpy as np
import pytest

from core.collar import (
    Collar,
    ball_in_disk_check,
    build_collar,
    choose_collar_height,
    collar_locate,
    collar_violations,
    is_collar_height,
    lifted_path_length,
    random_collar_path,
    retracted_path_length,
    trapezoids,
)
from core.errors import InvalidHeight, OutOfRange, PointOutside
from core.geometry import Point, polygon_validate
from core.modulus import constants_from
from horseshoe.nbt import build_Pn

EIGHTH = Fraction(1, 8)


def test_square_trapezoids(unit_square):
    traps = trapezoids(unit_square, EIGHTH)
    assert len(traps) == 4
    assert all(tr.top == pytest.approx(0.75) for tr in traps)
    assert all(tr.ratio == pytest.approx(0.75) for tr in traps)
    assert np.allclose(traps[0].corners[2], (0.875, 0.125))


def test_collar_heights_on_square(unit_square):
    assert is_collar_height(unit_square, EIGHTH)
    assert not is_collar_height(unit_square, Fraction(1, 2))
    assert not is_collar_height(unit_square, 0)
    assert collar_violations(unit_square, Fraction(1, 2))
    h = choose_collar_height(unit_square)
    assert h in (Fraction(1, 4), EIGHTH)
    assert is_collar_height(unit_square, h)


def test_build_collar_rejects_bad_heights(unit_square):
    with pytest.raises(InvalidHeight) as err:
        build_collar(unit_square, Fraction(1, 2))
    assert err.value.details["reasons"]
    with pytest.raises(InvalidHeight):
        build_collar(unit_square, 0)


def test_gamma_on_the_bottom_side(unit_square):
    collar = build_collar(unit_square, EIGHTH)
    assert np.allclose(collar.gamma(Fraction(1, 2), 0), (0.5, 0.0))
    assert np.allclose(collar.gamma(Fraction(1, 2), EIGHTH), (0.5, 0.125))
    # vertical leaves at the corners run along the bisectors
    assert np.allclose(collar.gamma(0, EIGHTH), (0.125, 0.125))
    assert collar.leaf_length(0) == pytest.approx(math.sqrt(2) / 8)
    with pytest.raises(OutOfRange):
        collar.gamma(0, Fraction(1, 4))


@pytest.mark.parametrize("t,h", [(0.3, 0.05), (1.6, 0.1), (3.9, 0.01), (2.5, 0.0)])
def test_locate_inverts_gamma(unit_square, t, h):
    collar = Collar(unit_square, EIGHTH)
    got_t, got_h = collar_locate(collar, collar.gamma(Fraction(t), Fraction(h)))
    assert got_t == pytest.approx(t, abs=1e-9)
    assert got_h == pytest.approx(h, abs=1e-9)


def test_locate_outside_collar(unit_square):
    collar = Collar(unit_square, EIGHTH)
    with pytest.raises(PointOutside):
        collar.locate((0.5, 0.5))


def test_path_lengths(unit_square):
    collar = Collar(unit_square, EIGHTH)
    assert lifted_path_length([(0, 0), (3, 4)]) == pytest.approx(5.0)
    # a vertical leaf retracts to a single point
    leaf = [collar.gamma(Fraction(1, 2), 0), collar.gamma(Fraction(1, 2), EIGHTH)]
    assert retracted_path_length(collar, leaf) == pytest.approx(0.0, abs=1e-9)
    along = [collar.gamma(Fraction(1, 4), Fraction(1, 20)), collar.gamma(Fraction(3, 4), Fraction(1, 20))]
    assert retracted_path_length(collar, along) == pytest.approx(0.5, abs=1e-9)


def test_balls_stay_in_scar_disks(unit_square, rng):
    collar = Collar(unit_square, EIGHTH)
    report = ball_in_disk_check(collar, constants_from(EIGHTH, Fraction(1, 24), 4), rng, samples=50)
    assert report["checked"] > 0
    assert report["violations"] == []


def test_to_dict_shape(unit_square):
    d = Collar(unit_square, EIGHTH).to_dict()
    assert d["hbar"] == EIGHTH
    assert len(d["trapezoids"]) == 4
    assert np.allclose(d["trapezoids"][0]["corners"][0], [0, 0])


@pytest.mark.parametrize("which,hbar", [("square", EIGHTH), ("P5", Fraction(1, 24))])
def test_retraction_is_lipschitz_on_random_paths(unit_square, rng, which, hbar):
    polygon = unit_square if which == "square" else build_Pn(5).polygon
    collar = build_collar(polygon, hbar)
    bound = float(polygon.boundary_length / hbar)
    checked = 0
    for _ in range(100):
        points = random_collar_path(collar, rng)
        try:
            swept = retracted_path_length(collar, points)
        except PointOutside:
            # a chord cut across an inner corner of the collar
            continue
        checked += 1
        assert swept <= bound * lifted_path_length(points) + 1e-9
    assert checked >= 50


def test_exact_trapezoids_keep_tiny_sides():
    eps = Fraction(1, 2 ** 80)
    # unit square with a notch of depth eps in the top side
    notched = polygon_validate([Point(0, 0), Point(1, 0), Point(1, 1), Point(Fraction(1, 2), 1),
                                Point(Fraction(1, 2), 1 - eps), Point(0, 1 - eps)])
    traps = trapezoids(notched, Fraction(1, 16))
    step = traps[3]
    assert step.base == eps
    assert step.top == eps
    assert step.shape_at(step.points[0]).is_valid
    assert is_collar_height(notched, Fraction(1, 16))
