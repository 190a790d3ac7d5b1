# core/test_criterion.py
import math
from fractions import Fraction

import pytest
from scipy.integrate import quad

from core.criterion import (
    DEFAULT_M,
    DIVERGENT,
    INCONCLUSIVE,
    REFUSED,
    annulus_modulus_lower_bound,
    criterion_report,
    default_rbar,
    divergence_test,
    example_bound,
    goodness,
    goodness_integral,
    goodness_profile,
    goodness_table,
    solve_radius,
    uniform_I_floor,
)
from core.errors import NoFloorFound, OutOfRange, RefusedNonIsolated
from core.geometry import BoundaryPos
from core.scar import build_scar_graph
from core.scheme_file import load_scheme_file

QUARTER = Fraction(1, 4)


def scar_of(scheme_path, name):
    return build_scar_graph(load_scheme_file(scheme_path(name)))


@pytest.fixture
def planar_gp(figure1):
    scar = build_scar_graph(figure1)
    return goodness_profile(scar, scar.locate(BoundaryPos(0, Fraction(3, 2))), QUARTER)


@pytest.fixture
def tight_gp(tight):
    scar = build_scar_graph(tight.scheme)
    return goodness_profile(scar, scar.locate(tight.corner), Fraction(1, 2))


def test_default_rbar(figure1, scheme_path):
    assert default_rbar(build_scar_graph(figure1)) == Fraction(4, 96)
    assert default_rbar(scar_of(scheme_path, "torus")) == Fraction(4, 96)


@pytest.mark.parametrize("r", [Fraction(1, 10), Fraction(1, 1000), 0.2])
def test_planar_goodness(planar_gp, r):
    assert goodness(planar_gp, r) == pytest.approx(DEFAULT_M / (6 * float(r)))


def test_goodness_outside_range(planar_gp):
    with pytest.raises(OutOfRange):
        goodness(planar_gp, QUARTER)
    with pytest.raises(OutOfRange):
        goodness(planar_gp, 0)


def test_planar_integral_is_logarithmic(planar_gp):
    r1, r2 = Fraction(1, 1000), Fraction(1, 5)
    expected = DEFAULT_M / 6 * math.log(float(r2 / r1))
    assert goodness_integral(planar_gp, r1, r2) == pytest.approx(expected, rel=1e-12)
    assert goodness_integral(planar_gp, r1, r1) == 0.0
    assert planar_gp.integral_from(r1) == pytest.approx(DEFAULT_M / 6 * math.log(250), rel=1e-12)


def test_integral_matches_quadrature(tight_gp):
    lo, hi = Fraction(1, 64), Fraction(1, 4)
    exact = goodness_integral(tight_gp, lo, hi)
    numeric, _ = quad(lambda r: goodness(tight_gp, r), float(lo), float(hi),
                      points=[1 / 32, 1 / 16, 1 / 8], limit=200)
    assert exact == pytest.approx(numeric, rel=1e-7)
    assert tight_gp.integral_from(lo) == pytest.approx(goodness_integral(tight_gp, lo, Fraction(1, 2)), rel=1e-12)


def test_goodness_table_rows(tight_gp):
    rows = goodness_table(tight_gp, [Fraction(1, 8), Fraction(3, 16)])
    assert rows[0]["m"] == 2 and rows[0]["n"] == 6
    assert not rows[0]["planar"] and rows[1]["planar"]
    assert rows[0]["I"] > rows[1]["I"] > 0


def test_annulus_bound_nudges_non_planar_radius(tight_gp):
    bound = annulus_modulus_lower_bound(tight_gp, Fraction(1, 8), QUARTER)
    assert bound.shift_r > 0 and bound.shift_s > 0
    assert bound.value > 0
    assert bound.to_dict()["label"].startswith("lower bound")
    with pytest.raises(OutOfRange):
        annulus_modulus_lower_bound(tight_gp, QUARTER, Fraction(1, 8))


def test_verdicts(figure1, scheme_path):
    verdicts = criterion_report(build_scar_graph(figure1))
    assert verdicts and all(v.verdict == DIVERGENT for v in verdicts)
    for name in ("power_law", "cantor"):
        assert {v.verdict for v in criterion_report(scar_of(scheme_path, name))} == {INCONCLUSIVE}
    assert REFUSED in {v.verdict for v in criterion_report(scar_of(scheme_path, "crossed"))}


def test_finite_valence_and_planar_points_diverge(scheme_path, figure1):
    scar = scar_of(scheme_path, "folded_square")
    [hub] = [vid for vid, v in scar.vertices.items() if v.valence == 4]
    verdict = divergence_test(scar, scar.vertex_point(hub))
    assert verdict.verdict == DIVERGENT
    assert verdict.bound == {"k": 4}
    tree = build_scar_graph(figure1)
    assert divergence_test(tree, tree.locate(BoundaryPos(0, Fraction(3, 2)))).verdict == DIVERGENT


def test_geometric_example_bound(figure1):
    tail = figure1.tails[0]
    bound = example_bound(tail)
    assert bound["kind"] == "geometric"
    assert bound["tail_sum_factor"] == pytest.approx(2.0)
    assert bound["C2"] == pytest.approx(3 / math.log(2))


def test_solve_radius_planar(planar_gp):
    log_r = solve_radius(planar_gp, 1.0)
    assert log_r == pytest.approx(math.log(0.25) - 30.0)


def test_solve_radius_at_star_center(tight_gp):
    K = 0.03
    r = math.exp(solve_radius(tight_gp, K))
    assert 0 < r < 0.5
    assert goodness_integral(tight_gp, Fraction(r), Fraction(1, 2)) == pytest.approx(K, rel=1e-9)


def test_star_center_radius_shrinks_with_K(tight_gp):
    assert solve_radius(tight_gp, 0.06) < solve_radius(tight_gp, 0.03) < 0


@pytest.mark.parametrize("K", [20.0, 40.0, 1000.0])
def test_star_center_radius_out_of_double_range(tight_gp, K):
    assert tight_gp.M == DEFAULT_M
    with pytest.raises(NoFloorFound) as err:
        solve_radius(tight_gp, K)
    assert err.value.details["log_growth"] > 700


def test_uniform_floor(figure1, scheme_path):
    floor = uniform_I_floor(build_scar_graph(figure1), 0.05, pitch=Fraction(1, 64))
    assert 0 < floor.eta < float(Fraction(4, 96))
    assert floor.samples > 10
    with pytest.raises(RefusedNonIsolated):
        uniform_I_floor(scar_of(scheme_path, "crossed"), 0.05)
    with pytest.raises(NoFloorFound):
        uniform_I_floor(scar_of(scheme_path, "power_law"), 0.05)
