# core/test_geometry.py
import math
from fractions import Fraction

import pytest

from core.errors import DegenerateVertex, DifferentComponents, NotCounterclockwise, OutOfRange, PointOutside, SelfIntersecting
from core.geometry import (
    BoundaryPos,
    Point,
    boundary_distance,
    boundary_locate,
    boundary_param,
    boundary_point,
    intrinsic_distance,
    polygon_area,
    polygon_validate,
)
from horseshoe.nbt import build_Pn

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


def test_unit_square_lengths_and_angles(unit_square):
    assert unit_square.boundary_length == 4
    assert unit_square.exact
    assert all(x == 1 for x in unit_square.side_lengths)
    assert all(math.isclose(th, math.pi / 4) for th in unit_square.semi_angles)
    assert unit_square.offsets == (0, 1, 2, 3)


def test_clockwise_triangle_rejected():
    with pytest.raises(NotCounterclockwise):
        polygon_validate([(0, 0), (0, 1), (1, 0)])


def test_bowtie_rejected():
    with pytest.raises(SelfIntersecting):
        polygon_validate([(0, 0), (1, 1), (1, 0), (0, 1)])


def test_degenerate_vertices_rejected():
    with pytest.raises(DegenerateVertex):
        polygon_validate([(0, 0), (1, 0), (2, 0), (1, 1)])
    with pytest.raises(DegenerateVertex):
        polygon_validate([(0, 0), (1, 0), (1, 0), (0, 1)])


def test_irrational_side_falls_back_to_float():
    tri = polygon_validate([(0, 0), (1, 0), (0, 1)])
    assert tri.side_lengths[0] == 1
    assert math.isclose(tri.side_lengths[1], math.sqrt(2))


def test_p4_has_twelve_sides():
    pn = build_Pn(4)
    assert pn.polygon.size == 12
    assert not pn.polygon.exact


def test_boundary_point_walks_counterclockwise(unit_square):
    assert boundary_point(unit_square, BoundaryPos(0, Fraction(0))) == Point(0, 0)
    assert boundary_point(unit_square, BoundaryPos(0, Fraction(1))) == Point(1, 0)
    assert boundary_point(unit_square, BoundaryPos(0, Fraction(5, 2))) == Point(Fraction(1, 2), 1)
    with pytest.raises(OutOfRange):
        boundary_point(unit_square, BoundaryPos(0, Fraction(4)))


def test_boundary_point_lies_on_its_side(unit_square):
    for k in range(16):
        t = Fraction(k, 4)
        p = boundary_point(unit_square, BoundaryPos(0, t))
        a, b = unit_square.side(int(t))
        # collinear with the side and inside its box
        assert (b.x - a.x) * (p.y - a.y) == (b.y - a.y) * (p.x - a.x)
        assert min(a.x, b.x) <= p.x <= max(a.x, b.x)


def test_boundary_distance_wraps(unit_square):
    d = lambda s, t: boundary_distance(unit_square, BoundaryPos(0, s), BoundaryPos(0, t))  # noqa: E731
    assert d(Fraction(0), Fraction(3)) == 1
    assert d(Fraction(1, 2), Fraction(1, 2)) == 0
    assert d(Fraction(1, 4), Fraction(9, 4)) == 2
    with pytest.raises(DifferentComponents):
        boundary_distance(unit_square, BoundaryPos(0, 0), BoundaryPos(1, 0))


def test_boundary_distance_is_a_metric(unit_square, rng):
    ts = [Fraction(int(rng.integers(0, 400)), 100) for _ in range(30)]
    pos = [BoundaryPos(0, t) for t in ts]
    for a in pos[:10]:
        for b in pos[10:20]:
            assert boundary_distance(unit_square, a, b) == boundary_distance(unit_square, b, a)
            for c in pos[20:]:
                assert boundary_distance(unit_square, a, c) <= (
                    boundary_distance(unit_square, a, b) + boundary_distance(unit_square, b, c))


def test_intrinsic_distance_convex(unit_square):
    p, q = Point(Fraction(1, 10), Fraction(1, 5)), Point(Fraction(9, 10), Fraction(7, 10))
    assert math.isclose(intrinsic_distance(unit_square, p, q), math.dist(p.as_tuple(), q.as_tuple()))
    assert intrinsic_distance(unit_square, p, p) == 0.0


def test_intrinsic_distance_bends_at_reflex_vertex():
    hexagon = polygon_validate(L_SHAPE)
    assert hexagon.reflex_vertices == (3,)
    d = intrinsic_distance(hexagon, Point(Fraction(3, 2), Fraction(1, 2)), Point(Fraction(1, 2), Fraction(3, 2)))
    assert d == pytest.approx(math.sqrt(2), abs=1e-9)
    d = intrinsic_distance(hexagon, Point(2, 1), Point(1, 2))
    assert d == pytest.approx(2.0, abs=1e-9)
    assert d > math.dist((2, 1), (1, 2))


def test_intrinsic_distance_outside_point():
    hexagon = polygon_validate(L_SHAPE)
    with pytest.raises(PointOutside):
        intrinsic_distance(hexagon, Point(Fraction(3, 2), Fraction(3, 2)), Point(0, 0))


def test_area(unit_square):
    assert polygon_area(unit_square) == 1
    assert polygon_area(polygon_validate(L_SHAPE)) == 3


def test_boundary_locate_and_param(unit_square):
    side, offset = boundary_locate(unit_square, BoundaryPos(0, Fraction(5, 2)))
    assert (side, offset) == (2, Fraction(1, 2))
    assert boundary_param(unit_square, side, offset) == Fraction(5, 2)
    assert boundary_param(unit_square, 3, 1) == 0
    with pytest.raises(OutOfRange):
        boundary_locate(unit_square, BoundaryPos(0, 4))
    with pytest.raises(OutOfRange):
        boundary_param(unit_square, 0, 2)
