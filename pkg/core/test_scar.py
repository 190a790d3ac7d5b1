# core/test_scar.py
import math
from fractions import Fraction

import pytest

from core.errors import OutOfRange, RefusedInconclusive
from core.geometry import BoundaryPos
from core.oracle import ChainOracle, random_plain_scheme
from core.scar import (
    PLANAR,
    REGULAR,
    SINGULAR,
    ScarGraph,
    ScarPoint,
    build_scar_graph,
    circle_points,
    injectivity_radius,
    is_dendrite_ball,
    scar_distance,
    scar_export,
    scar_isomorphic,
)
from core.scheme_file import load_scheme_file


def at(t) -> BoundaryPos:
    return BoundaryPos(0, Fraction(t))


def random_boundary_point(rng, L) -> BoundaryPos:
    return BoundaryPos(0, L * Fraction(int(rng.integers(0, 997)), 997))


def test_figure1_scar_is_a_tree(figure1):
    scar = build_scar_graph(figure1)
    assert scar.is_tree()
    assert scar.injectivity_radius == math.inf
    assert sorted(e.length for e in scar.edges.values()) == [Fraction(1, 2), 1]
    assert scar.total_measure == 4
    [star] = scar.stars
    assert scar.vertices[star.center].kind == SINGULAR
    assert scar.star_branch_length(0, 0) == Fraction(1, 4)
    assert scar.star_branch_length(0, 3) == Fraction(1, 32)


def test_figure2_scar_matches_figure1(figure1, figure2):
    a, b = build_scar_graph(figure1), build_scar_graph(figure2)
    assert scar_isomorphic(a, b)
    assert [a.star_branch_length(0, n) for n in range(8)] == [b.star_branch_length(0, n) for n in range(8)]


def test_folded_square_is_a_four_star(scheme_path):
    scar = build_scar_graph(load_scheme_file(scheme_path("folded_square")))
    assert scar.total_measure == 4
    assert len(scar.edges) == 4
    assert {e.length for e in scar.edges.values()} == {Fraction(1, 2)}
    hubs = [v for v in scar.vertices.values() if v.valence == 4]
    assert len(hubs) == 1
    assert hubs[0].kind == REGULAR


def test_tight_horseshoe_branch_tips(tight):
    scar = build_scar_graph(tight.scheme)
    p, q = scar.locate(at(Fraction(3, 2))), scar.locate(at(Fraction(5, 2)))
    assert scar_distance(scar, p, q) == 1
    corner = scar.locate(tight.corner)
    assert corner.kind == "vertex"
    assert scar.vertices[corner.vertex].kind == SINGULAR
    assert len(scar.stars) == 2


def test_locate_and_same_edge_distance(figure1):
    scar = build_scar_graph(figure1)
    p, q = scar.locate(at(Fraction(5, 4))), scar.locate(at(Fraction(7, 4)))
    assert p.kind == q.kind == "edge"
    assert scar_distance(scar, p, q) == Fraction(1, 2)
    assert scar_distance(scar, p, p) == 0
    # partners land on the same scar point
    assert scar.locate(at(Fraction(15, 4))) == p
    with pytest.raises(OutOfRange):
        scar.locate(at(4))


def test_points_inside_the_tail_land_on_branches(figure1):
    scar = build_scar_graph(figure1)
    q = scar.locate(at(Fraction(1, 8)))
    assert q == ScarPoint("star", star=0, branch=0, offset=Fraction(1, 8))
    assert scar.locate(at(Fraction(3, 8))) == q
    center = scar.vertex_point(scar.stars[0].center)
    assert scar_distance(scar, center, q) == Fraction(1, 8)


def test_injectivity_radii(scheme_path):
    scar = build_scar_graph(load_scheme_file(scheme_path("torus")))
    assert injectivity_radius(scar) == Fraction(1, 2)
    triangle = ScarGraph.from_edges([("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
    assert triangle.injectivity_radius == Fraction(3, 2)


def test_dendrite_balls(scheme_path, figure1):
    scar = build_scar_graph(load_scheme_file(scheme_path("torus")))
    [vid] = scar.vertices
    q = scar.vertex_point(vid)
    assert is_dendrite_ball(scar, q, Fraction(1, 4))
    assert not is_dendrite_ball(scar, q, Fraction(1, 2))
    tree = build_scar_graph(figure1)
    assert is_dendrite_ball(tree, tree.vertex_point(tree.stars[0].center), 10)


def test_circle_points_mid_edge(figure1):
    scar = build_scar_graph(figure1)
    q = scar.locate(at(Fraction(3, 2)))
    points = circle_points(scar, q, Fraction(1, 4))
    assert len(points) == 2
    assert all("edge" in p for p in points)


def test_from_edges_kinds():
    g = ScarGraph.from_edges([("a", "b", 1), ("b", "c", 2)])
    assert g.vertices["b"].kind == PLANAR
    assert g.vertices["a"].kind == REGULAR
    assert g.total_measure == 6


def test_unspecified_arrangement_refused(make_figure):
    with pytest.raises(RefusedInconclusive):
        build_scar_graph(make_figure("unspecified"))


def test_crossed_tail_marks_non_isolated_point(make_figure):
    scar = build_scar_graph(make_figure("crossed"))
    assert not scar.stars
    assert any(not v.isolated and v.kind == SINGULAR for v in scar.vertices.values())


def test_scar_distance_matches_chain_oracle(rng):
    eps = Fraction(1, 10000)
    for _ in range(50):
        scheme = random_plain_scheme(rng)
        scar = build_scar_graph(scheme)
        L = scheme.component_length(0)
        pairs = [(random_boundary_point(rng, L), random_boundary_point(rng, L)) for _ in range(20)]
        expected = ChainOracle(scheme, eps).distances(pairs)
        for (x, y), oracle in zip(pairs, expected):
            d = float(scar_distance(scar, scar.locate(x), scar.locate(y)))
            assert abs(d - oracle) <= 2 * float(eps)


def test_scar_export(figure1):
    data = scar_export(build_scar_graph(figure1))
    assert data["tree"] is True
    assert data["total_measure"] == 4
    assert sorted(e["length"] for e in data["edges"]) == [Fraction(1, 2), 1]
    [star] = data["tail_stars"]
    assert star["kind"] == "geometric"
    assert star["longest_branch"] == Fraction(1, 4)
