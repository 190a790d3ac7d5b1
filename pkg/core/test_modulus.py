# core/test_modulus.py
import math
from fractions import Fraction

import pytest

from core.criterion import goodness_profile
from core.errors import OutOfRange, RefusedInconclusive, RefusedNonIsolated, TooFar
from core.geometry import BoundaryPos
from core.modulus import (
    ModulusProfile,
    compute_constants,
    constants_from,
    global_modulus,
    local_modulus_bound,
    modulus_table,
    planar_r0,
    rho,
)
from core.scar import build_scar_graph
from core.scheme_file import load_scheme_file

RBAR = Fraction(1, 24)


@pytest.fixture
def family():
    return constants_from(RBAR, RBAR, 4)


@pytest.fixture
def figure1_profile(figure1, family):
    return ModulusProfile(family, build_scar_graph(figure1), pitch=Fraction(1, 8))


def test_family_constants(family):
    assert family.delta == Fraction(1, 4608)
    assert family.A == 96
    assert family.M == Fraction(1, 5)
    assert family.R == 192
    assert family.log_kappa == pytest.approx(math.log(2) + 589824)
    assert family.kappa == math.inf


def test_constants_mix_heights():
    pc = constants_from(Fraction(1, 8), Fraction(1, 24), 4)
    assert pc.delta == Fraction(1, 1536)
    assert pc.M == Fraction(1, 15)
    assert pc.R == 64


def test_compute_constants_for_square(unit_square):
    pc = compute_constants(unit_square)
    assert pc.hbar == pc.rbar
    assert pc.diameter == pytest.approx(math.sqrt(2), abs=0.01)
    assert pc.log_kappa_diameter < pc.log_kappa


def test_local_bound_at_planar_point(figure1, family):
    scar = build_scar_graph(figure1)
    q = scar.locate(BoundaryPos(0, Fraction(3, 2)))
    gp = goodness_profile(scar, q, family.rbar, float(family.M))
    assert planar_r0(gp) == RBAR / 2
    d = Fraction(1, 10000)
    bound = local_modulus_bound(family, gp, q, d)
    integral = 0.2 / 6 * math.log(float(RBAR / 2) / float(96 * d))
    assert bound.log_value == pytest.approx(math.log(4) - 2 * math.pi * integral)
    assert bound.value < 4
    with pytest.raises(TooFar):
        local_modulus_bound(family, gp, q, Fraction(1, 1000))


def test_local_bound_refuses_inconclusive_point(scheme_path, family):
    scar = build_scar_graph(load_scheme_file(scheme_path("power_law")))
    center = scar.vertex_point(scar.stars[0].center)
    gp = goodness_profile(scar, center, family.rbar, float(family.M))
    with pytest.raises(RefusedInconclusive):
        local_modulus_bound(family, gp, center, Fraction(1, 10000))


def test_rho_branches(figure1_profile, family):
    mp = figure1_profile
    q = mp.scar.vertex_point(mp.scar.stars[0].center)
    t = family.delta / 4
    assert mp.log_rho(q, 0, 0) == -math.inf
    # below the height the bound is linear in t
    h = family.delta / 2
    assert mp.log_rho(q, h, t / 2) == pytest.approx(mp.log_rho(q, h, t) - math.log(2))
    assert rho(mp, q, 0, t) <= 8 * 192
    with pytest.raises(OutOfRange):
        mp.log_rho(q, 0, family.delta)


def test_global_modulus_is_dominated_by_kappa_t(figure1_profile, family):
    t = family.delta / 2
    gm = global_modulus(figure1_profile, t)
    assert gm.label == "sampled supremum"
    assert gm.samples == len(figure1_profile.samples())
    assert gm.log_rho_bar == gm.log_kappa_t == pytest.approx(family.log_kappa + math.log(float(t)))
    assert gm.log_rho_hat < gm.log_kappa_t


def test_modulus_table_decreases(figure1_profile):
    rows = modulus_table(figure1_profile, levels=3)
    assert len(rows) == 3
    logs = [row["log_rho_bar"] for row in rows]
    assert logs[0] > logs[1] > logs[2]
    assert [row["t"] for row in rows] == sorted((row["t"] for row in rows), reverse=True)


def test_crossed_scheme_has_no_modulus(scheme_path, family):
    scar = build_scar_graph(load_scheme_file(scheme_path("crossed")))
    with pytest.raises(RefusedNonIsolated):
        ModulusProfile(family, scar, pitch=Fraction(1, 8)).global_modulus(family.delta / 2)
