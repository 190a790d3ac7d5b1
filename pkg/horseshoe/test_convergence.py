# horseshoe/test_convergence.py
import pytest

from core.errors import OutOfRange
from horseshoe.convergence import (
    boundary_hausdorff,
    convergence_report,
    find_n0,
    gap_levels,
    map_gap,
    relation_gap,
    relation_points,
    sigma_eps_contained,
    vertical_side_gaps,
)
from horseshoe.nbt import build_Pn, pn_exact_polygon

EPS = 0.05


def test_gap_levels():
    assert gap_levels(3) == [3]
    assert gap_levels(10) == [3, 4, 8, 10]


@pytest.mark.parametrize("contained,n0", [
    ({3: False, 4: True, 5: True}, 4),
    ({3: True, 4: False, 5: True}, 5),
    ({3: True, 4: True}, 3),
    ({3: False, 4: False}, None),
])
def test_find_n0(contained, n0):
    assert find_n0(contained) == n0


def test_boundaries_approach_the_square():
    small, large = boundary_hausdorff(build_Pn(3).polygon), boundary_hausdorff(build_Pn(12).polygon)
    assert large.value < small.value
    assert large.value < 0.1
    assert large.error > 0


def test_boundary_distance_keeps_shrinking():
    assert boundary_hausdorff(pn_exact_polygon(32)).value < boundary_hausdorff(pn_exact_polygon(8)).value


def test_inner_square_containment():
    assert not sigma_eps_contained(build_Pn(3).polygon, EPS)
    assert sigma_eps_contained(build_Pn(14).polygon, EPS)
    with pytest.raises(OutOfRange):
        sigma_eps_contained(build_Pn(3).polygon, 0.5)


def test_inner_square_stays_inside_up_to_64():
    contained = {n: sigma_eps_contained(pn_exact_polygon(n), EPS) for n in range(3, 65)}
    n0 = find_n0(contained)
    assert n0 is not None and n0 <= 14
    assert not contained[3]


def test_vertical_sides_approach_their_limits():
    gaps3, gaps10 = vertical_side_gaps(build_Pn(3).polygon), vertical_side_gaps(build_Pn(10).polygon)
    assert set(gaps10) == {"V0", "V1", "V2", "V3"}
    assert gaps10["V0"] < gaps3["V0"]
    assert max(gaps10.values()) < 0.05


def test_map_gap_shrinks(rng):
    assert map_gap(12, EPS, rng) < 0.01
    assert map_gap(12, EPS, rng) < map_gap(3, EPS, rng)


def test_relation_samples_include_the_diagonal(tight):
    pts = relation_points(tight.scheme, 0.1)
    assert pts.shape[1] == 4
    diagonal = (pts[:, 0] == pts[:, 2]) & (pts[:, 1] == pts[:, 3])
    assert diagonal.sum() >= 40


def test_relation_gap_shrinks():
    far, near = relation_gap(3, EPS), relation_gap(12, EPS)
    assert near.value < far.value
    assert near.to_dict()["gap"] == near.value
    with pytest.raises(OutOfRange):
        relation_gap(3, 0.0)


def test_convergence_report_finds_n0():
    report = convergence_report(14, EPS, seed=3)
    assert len(report.rows) == 12
    assert report.n0 is not None and report.n0 <= 14
    assert all(row["contains_sigma_eps"] for row in report.rows if row["n"] >= report.n0)
    assert [r["n"] for r in report.relation] == gap_levels(14)
    with pytest.raises(OutOfRange):
        convergence_report(2, EPS)


def test_convergence_report_past_the_float_range():
    report = convergence_report(36, EPS, seed=5)
    assert [row["n"] for row in report.rows] == list(range(3, 37))
    assert report.rows[-1]["hausdorff"] < report.rows[5]["hausdorff"]
    # relations are sampled on float schemes only
    assert [r["n"] for r in report.relation] == [3, 4, 8, 16]
