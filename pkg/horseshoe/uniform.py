# horseshoe/uniform.py
"""
horseshoe/uniform.py
-------------------------------------------------
A modulus of continuity shared by every P_n.

All members use hbar = rbar = 1/24 and |dP_n| = 4, so the constants are
fixed (delta = 1/4608, A = 96, M = 1/5, R = 192) and the goodness integral
on G_n is bounded below by

    I(t) = (ln 2 / 12) * integral_t^rbar ds / (s ln(8 / (s - t)))

which gives rho_bar(t) = max(16R exp(-2 pi M I(2At)), kappa t).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from core.ball import ball_profile
from core.criterion import goodness_profile
from core.errors import BoundViolated, OutOfRange
from core.log_utils import get_logger
from core.modulus import ModulusProfile, PolygonConstants, constants_from
from core.numeric import safe_exp
from core.settings import QUAD_LIMIT
from horseshoe.gn_model import build_gn_model

logger = get_logger("folding.uniform", "Uniform")

FAMILY_HBAR = Fraction(1, 24)
FAMILY_RBAR = Fraction(1, 24)
FAMILY_LENGTH = 4

BOUND_SLACK = 1e-9
RBAR = float(FAMILY_RBAR)


@lru_cache(maxsize=1)
def family_constants() -> PolygonConstants:
    return constants_from(FAMILY_HBAR, FAMILY_RBAR, FAMILY_LENGTH)


# --------------------------------------------------
# I(t)
# --------------------------------------------------
def script_I_with_error(t) -> Tuple[float, float]:
    """(value, absolute quadrature error) of I(t), 0 < t < 1/24."""
    t = float(t)
    if not 0 < t < RBAR:
        raise OutOfRange("t outside (0, rbar)", t=t, rbar=RBAR)
    top = RBAR - t

    # w = s - t; the integrand vanishes as w -> 0
    def f(w):
        if w <= 0:
            return 0.0
        return 1.0 / ((w + t) * math.log(8.0 / w))

    near = min(t, top)
    total, err = quad(f, 0.0, near, limit=QUAD_LIMIT)
    if top > near:
        v, e = quad(lambda u: f(math.exp(u)) * math.exp(u), math.log(near), math.log(top), limit=QUAD_LIMIT)
        total += v
        err += e
    scale = math.log(2) / 12
    return scale * total, scale * err


def script_I(t) -> float:
    return script_I_with_error(t)[0]


# --------------------------------------------------
# rho_bar
# --------------------------------------------------
@dataclass
class UniformRho:
    t: float
    log_decay: float
    log_kappa_t: float

    @property
    def log_value(self) -> float:
        return max(self.log_decay, self.log_kappa_t)

    @property
    def value(self) -> float:
        return safe_exp(self.log_value)

    @property
    def branch(self) -> str:
        return "kappa_t" if self.log_kappa_t >= self.log_decay else "decay"

    def to_dict(self) -> dict:
        return {"t": self.t, "log_rho_bar": self.log_value, "rho_bar": self.value,
                "log_decay": self.log_decay, "log_kappa_t": self.log_kappa_t, "branch": self.branch}


def uniform_rho_bar_log(t) -> UniformRho:
    pc = family_constants()
    if not 0 < t < pc.delta:
        raise OutOfRange("t outside (0, delta)", t=t, delta=pc.delta)
    x = float(2 * pc.A * t)
    log_decay = math.log(16 * float(pc.R)) - 2 * math.pi * float(pc.M) * script_I(x)
    return UniformRho(float(t), log_decay, pc.log_kappa + math.log(float(t)))


def uniform_rho_bar(t) -> float:
    return uniform_rho_bar_log(t).value


def uniform_table(levels: int = 20) -> List[dict]:
    """rho_bar on t = delta / 2^k, k = 1..levels."""
    delta = family_constants().delta
    return [uniform_rho_bar_log(delta / 2 ** k).to_dict() for k in range(1, levels + 1)]


# --------------------------------------------------
# Bounds on G_n
# --------------------------------------------------
@dataclass
class GnBoundReport:
    n: int
    center_rows: List[dict] = field(default_factory=list)
    integral_rows: List[dict] = field(default_factory=list)
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"n": self.n, "ok": self.ok, "center": self.center_rows,
                "integral": self.integral_rows, "violations": self.violations}


def log_grid(lo: float, hi: float, count: int) -> List[float]:
    """`count` points log-spaced strictly inside (lo, hi)."""
    return [float(x) for x in np.geomspace(lo, hi, count + 2)[1:-1]]


def _distance_case(D: float, t: float) -> str:
    if D <= t:
        return "inside"
    if D <= RBAR:
        return "annulus"
    return "far"


def check_gn_bounds(n: int, radii: Optional[Sequence[float]] = None, ts: Optional[Sequence[float]] = None,
                    strict: bool = True) -> GnBoundReport:
    """
    Centre bounds m(q0;r) <= 8r log2(8/r), n(q0;r) <= 4 log2(4/r) on `radii`,
    and the integral floor I(q,t) >= I(t) at points of every ray and side
    branch of G_n at distances 0, t/2, t, (t+rbar)/2, rbar, 2 rbar from q0.
    """
    radii = log_grid(1e-6, RBAR, 64) if radii is None else list(radii)
    ts = log_grid(1e-6, RBAR, 8) if ts is None else list(ts)
    for r in list(radii) + list(ts):
        if not 0 < r < RBAR:
            raise OutOfRange("grid point outside (0, rbar)", value=r)
    model = build_gn_model(n)
    report = GnBoundReport(n)

    center = ball_profile(model.scar, model.center, RBAR)
    for r in radii:
        m, k = float(center.m(r)), center.n(r)
        m_bound, n_bound = 8 * r * math.log2(8 / r), 4 * math.log2(4 / r)
        row = {"r": r, "m": m, "m_bound": m_bound, "n": k, "n_bound": n_bound}
        report.center_rows.append(row)
        if m > m_bound + BOUND_SLACK or k > n_bound:
            report.violations.append({"check": "center", **row})

    directions = model.directions()
    for t in ts:
        floor = script_I(t)
        for D in (0.0, t / 2, t, (t + RBAR) / 2, RBAR, 2 * RBAR):
            for label, path in directions:
                q = model.walk(path, D)
                value = goodness_profile(model.scar, q, RBAR, 1.0).integral_from(t)
                row = {"t": t, "direction": label, "D": D, "case": _distance_case(D, t), "I": value, "floor": floor}
                report.integral_rows.append(row)
                if value < floor - BOUND_SLACK:
                    report.violations.append({"check": "integral", **row})

    if report.violations:
        logger.error(f"❌ G{n}: {len(report.violations)} bound violations")
        if strict:
            raise BoundViolated(f"G{n} bounds violated", n=n, first=report.violations[0])
    else:
        logger.info(f"✅ G{n}: centre and integral bounds hold on {len(radii)} radii, {len(ts)} t values")
    return report


@dataclass
class DominationReport:
    n: int
    rows: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["dominated"] for r in self.rows)

    def to_dict(self) -> dict:
        return {"n": self.n, "ok": self.ok, "rows": self.rows}


def check_uniform_domination(n: int, ts: Sequence[float], pitch=None, strict: bool = True) -> DominationReport:
    """rho_bar(t) >= 2 rho(q, h_q, t) for sampled q on G_n and collar heights h_q."""
    mp = ModulusProfile(family_constants(), build_gn_model(n).scar, pitch=pitch)
    report = DominationReport(n)
    for t in ts:
        bound = uniform_rho_bar_log(t)
        sampled = mp.global_modulus(t)
        dominated = sampled.log_rho_hat <= bound.log_value + BOUND_SLACK
        report.rows.append({"t": float(t), "log_two_rho": sampled.log_rho_hat,
                            "log_rho_bar": bound.log_value, "samples": sampled.samples, "dominated": dominated})
    if not report.ok and strict:
        raise BoundViolated(f"rho_bar does not dominate on G{n}", n=n)
    return report


__all__ = ["FAMILY_HBAR", "FAMILY_RBAR", "FAMILY_LENGTH", "family_constants", "script_I",
           "script_I_with_error", "UniformRho", "uniform_rho_bar", "uniform_rho_bar_log", "uniform_table",
           "GnBoundReport", "check_gn_bounds", "DominationReport", "check_uniform_domination", "log_grid"]
