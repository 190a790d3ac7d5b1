# core/test_topology.py
from fractions import Fraction

from core.geometry import BoundaryPos, Point, polygon_validate
from core.scheme import make_pairing, make_scheme, scheme_validate, split_pairing
from core.scheme_file import load_scheme_file
from core.topology import (
    classify_topology,
    euler_genus,
    maximal_plain_arcs,
    maximal_unlinked_arc_count,
    maximal_unlinked_arcs,
    spanning_tree_reduce,
)

Q = Fraction(3, 4)


def torus(square):
    return make_scheme([square], [make_pairing(Fraction(0), Fraction(2), Fraction(1)),
                                  make_pairing(Fraction(1), Fraction(3), Fraction(1))], name="torus")


def folded_bottom_torus(square):
    """Bottom folded in half; the other three sides cut in four and glued crosswise."""
    cuts = [1 + Q * k for k in range(4)]
    pairings = [
        make_pairing(Fraction(0), Fraction(1, 2), Fraction(1, 2), label="bottom"),
        make_pairing(cuts[0], cuts[2], Q, label="x"),
        make_pairing(cuts[1], cuts[3], Q, label="y"),
    ]
    return make_scheme([square], pairings)


def test_figures_are_plain_spheres(figure1, figure2):
    for scheme in (figure1, figure2):
        report = classify_topology(scheme)
        assert report.classification == "PlainSphere"
        assert report.genus == [0]
        [arc] = report.maximal_plain_arcs
        assert arc.length == 4


def test_torus(unit_square):
    scheme = scheme_validate(torus(unit_square))
    assert maximal_plain_arcs(scheme) == []
    assert euler_genus(scheme) == 1
    report = classify_topology(scheme)
    assert report.classification == "SurfaceGenus"
    assert report.genus == [1]
    assert report.unlinked_arc_count >= 1


def test_plain_arc_next_to_a_handle(unit_square):
    scheme = scheme_validate(folded_bottom_torus(unit_square))
    [arc] = maximal_plain_arcs(scheme)
    assert arc.t0 == 0 and arc.length == 1
    report = classify_topology(scheme)
    assert report.classification == "SurfaceGenus"
    assert report.genus == [1]


def test_crossed_tail_is_not_compact(scheme_path):
    report = classify_topology(load_scheme_file(scheme_path("crossed")))
    assert report.classification == "NotCompactSurface"
    assert report.unlinked_arc_count == "Unbounded"
    counts = report.evidence["unlinked_arcs_by_depth"]
    values = [counts[k] for k in sorted(counts, key=int)]
    assert values == sorted(values)
    assert values[-1] > values[0]


def test_unspecified_arrangement_is_unknown(make_figure):
    report = classify_topology(make_figure("unspecified"))
    assert report.classification == "Unknown"
    assert report.reason


def test_two_squares_reduce_to_one_disk(scheme_path):
    scheme = scheme_validate(load_scheme_file(scheme_path("two_squares")))
    disk = spanning_tree_reduce(scheme)
    assert disk.component_count == 1
    assert disk.component_length(0) == 6
    assert len(disk.pairings) == len(scheme.pairings) - 1
    assert classify_topology(scheme).classification == "PlainSphere"


def test_chain_of_three_squares(unit_square):
    squares = [unit_square] + [
        polygon_validate([Point(x, 0), Point(x + 1, 0), Point(x + 1, 1), Point(x, 1)]) for x in (2, 4)
    ]
    half = Fraction(1, 2)
    pairings = [
        make_pairing(Fraction(1), Fraction(3), Fraction(1), 0, 1),
        make_pairing(Fraction(1), Fraction(3), Fraction(1), 1, 2),
    ]
    for c in range(3):
        for start in (0, 2):
            pairings.append(make_pairing(Fraction(start), Fraction(start) + half, half, c))
    pairings.append(make_pairing(Fraction(3), Fraction(7, 2), half, 0))
    pairings.append(make_pairing(Fraction(1), Fraction(3, 2), half, 2))
    scheme = scheme_validate(make_scheme(squares, pairings))
    disk = spanning_tree_reduce(scheme)
    assert disk.component_count == 1
    assert len(disk.pairings) == len(pairings) - 2
    assert classify_topology(scheme).classification == "PlainSphere"


def test_disconnected_union_is_classified_per_piece(unit_square):
    moved = polygon_validate([Point(3, 0), Point(4, 0), Point(4, 1), Point(3, 1)])
    pairings = [
        make_pairing(Fraction(0), Fraction(2), Fraction(1), 0),
        make_pairing(Fraction(1), Fraction(3), Fraction(1), 0),
    ]
    half = Fraction(1, 2)
    pairings += [make_pairing(Fraction(k), Fraction(k) + half, half, 1) for k in range(4)]
    report = classify_topology(make_scheme([unit_square, moved], pairings))
    assert report.classification == "SurfaceGenus"
    assert sorted(report.genus) == [0, 1]


def test_unlinked_count_of_plain_scheme_is_zero(figure1):
    assert maximal_unlinked_arc_count(scheme_validate(figure1)) == 0


def test_torus_sides_are_unlinked_arcs(unit_square):
    arcs = maximal_unlinked_arcs(scheme_validate(torus(unit_square)))
    assert sorted(arc.t0 for arc in arcs) == [0, 1, 2, 3]
    assert all(arc.length == 1 for arc in arcs)


def test_exact_split_torus_keeps_its_genus(unit_square):
    sides, other = torus(unit_square).pairings
    first, rest = split_pairing(other, Fraction(2, 9))
    middle, last = split_pairing(rest, Fraction(4, 9))
    assert (middle.seg_a.t0, middle.seg_b.t0) == (Fraction(11, 9), Fraction(10, 3))
    scheme = scheme_validate(make_scheme([unit_square], [sides, first, middle, last]))
    assert scheme.tolerance == 0
    report = classify_topology(scheme)
    assert report.classification == "SurfaceGenus"
    assert report.genus == [1]


def test_random_subdivision_keeps_the_genus(unit_square, rng):
    for _ in range(10):
        pairings = list(torus(unit_square).pairings)
        for _ in range(int(rng.integers(1, 6))):
            k = int(rng.integers(len(pairings)))
            p = pairings.pop(k)
            s = p.length * Fraction(int(rng.integers(1, 12)), 12)
            pairings[k:k] = split_pairing(p, s)
        scheme = scheme_validate(make_scheme([unit_square], pairings))
        assert euler_genus(scheme) == 1
        assert classify_topology(scheme).genus == [1]


def test_plain_arc_keeps_its_component_in_a_union(unit_square):
    moved = polygon_validate([Point(3, 0), Point(4, 0), Point(4, 1), Point(3, 1)])
    half = Fraction(1, 2)
    pairings = [
        make_pairing(Fraction(0), Fraction(2), Fraction(1), 0),
        make_pairing(Fraction(1), Fraction(3), Fraction(1), 0),
    ]
    pairings += [make_pairing(Fraction(k), Fraction(k) + half, half, 1) for k in range(4)]
    report = classify_topology(make_scheme([unit_square, moved], pairings))
    [arc] = report.maximal_plain_arcs
    assert arc.component == 1
    assert arc.length == 4
