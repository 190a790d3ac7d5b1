# core/modulus.py
"""
core/modulus.py
-------------------------------------------------
Polygon constants and the moduli of continuity built from them.

Every modulus is evaluated in the log domain: kappa = 2 exp(32 L / delta)
overflows a double for all but toy polygons, so values are reported as
(log value, value or +inf).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from shapely.geometry import Polygon as ShapelyPolygon

from core.collar import choose_collar_height
from core.criterion import (
    DIVERGENT,
    REFUSED,
    GoodnessProfile,
    divergence_test,
    goodness_profile,
    sample_points,
    singular_points,
)
from core.errors import OutOfRange, RefusedInconclusive, RefusedNonIsolated, TooFar
from core.geometry import Point, Polygon, intrinsic_distance, polygon_validate
from core.log_utils import get_logger
from core.numeric import is_exact, safe_exp
from core.scar import ScarGraph, ScarPoint
from core.settings import SAMPLE_DIVISOR

logger = get_logger("folding.modulus", "Modulus")

# vertex count below which the diameter form of kappa is computed
DIAMETER_VERTEX_CAP = 64


@dataclass(frozen=True)
class PolygonConstants:
    """
    Attributes:
        hbar: collar height
        rbar: min(hbar, injectivity radius)
        boundary_length: |dP|
        delta: (1/4) min(hbar, rbar, 2 hbar rbar / |dP|)
        A: rbar / (2 delta)
        M: (1/5) min(rbar/hbar, hbar/rbar)
        R: 8 / hbar
        log_kappa: ln 2 + 32 |dP| / delta
    """

    hbar: object
    rbar: object
    boundary_length: object
    delta: object
    A: object
    M: object
    R: object
    log_kappa: float
    log_kappa_diameter: Optional[float] = None
    diameter: Optional[float] = None

    @property
    def kappa(self) -> float:
        return safe_exp(self.log_kappa)

    def to_dict(self) -> dict:
        return {
            "hbar": self.hbar, "rbar": self.rbar, "boundary_length": self.boundary_length,
            "delta": self.delta, "A": self.A, "M": self.M, "R": self.R,
            "log_kappa": self.log_kappa, "kappa": self.kappa,
            "log_kappa_diameter": self.log_kappa_diameter, "diameter": self.diameter,
        }


def constants_from(hbar, rbar, boundary_length) -> PolygonConstants:
    if all(is_exact(x) for x in (hbar, rbar, boundary_length)):
        hbar, rbar, boundary_length = Fraction(hbar), Fraction(rbar), Fraction(boundary_length)
    delta = min(hbar, rbar, 2 * hbar * rbar / boundary_length) / 4
    A = rbar / (2 * delta)
    M = min(rbar / hbar, hbar / rbar) / 5
    R = 8 / hbar
    log_kappa = math.log(2) + 32 * float(boundary_length) / float(delta)
    return PolygonConstants(hbar, rbar, boundary_length, delta, A, M, R, log_kappa)


def _inner_diameter(polygon: Polygon, inset) -> Optional[float]:
    """Intrinsic diameter of the polygon shrunk by `inset`, over its vertices."""
    if polygon.size > DIAMETER_VERTEX_CAP:
        return None
    inner = polygon.shape.buffer(-float(inset), join_style="mitre")
    if inner.is_empty or not isinstance(inner, ShapelyPolygon):
        return None
    coords = list(inner.exterior.coords)[:-1]
    if not inner.exterior.is_ccw:
        coords.reverse()
    try:
        shrunk = polygon_validate([Point(float(x), float(y)) for x, y in coords])
    except Exception as e:  # noqa: BLE001 - shapely output may carry collinear vertices
        logger.debug(f"⚠️ inner polygon rejected: {e}")
        return None
    best = 0.0
    vs = shrunk.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            best = max(best, intrinsic_distance(shrunk, vs[i], vs[j]))
    return best


def compute_constants(polygon: Polygon, scar: Optional[ScarGraph] = None, hbar=None, rbar=None,
                      boundary_length=None) -> PolygonConstants:
    hbar = choose_collar_height(polygon) if hbar is None else hbar
    if rbar is None:
        inj = scar.injectivity_radius if scar is not None else math.inf
        rbar = min(hbar, inj)
    L = polygon.boundary_length if boundary_length is None else boundary_length
    pc = constants_from(hbar, rbar, L)
    diam = _inner_diameter(polygon, pc.delta / 2)
    if diam is not None:
        pc = PolygonConstants(pc.hbar, pc.rbar, pc.boundary_length, pc.delta, pc.A, pc.M, pc.R,
                              pc.log_kappa, math.log(2) + 16 * diam / float(pc.delta), diam)
    logger.info(f"✅ constants: hbar={pc.hbar}, rbar={pc.rbar}, delta={pc.delta}, A={pc.A}")
    return pc


# --------------------------------------------------
# Local bound
# --------------------------------------------------
@dataclass
class LocalBound:
    value: float
    log_value: float
    r0: object
    d: object

    def to_dict(self) -> dict:
        return {"value": self.value, "log_value": self.log_value, "r0": self.r0, "d": self.d}


def _require_divergent(g: ScarGraph, q: ScarPoint) -> None:
    if q.kind != "vertex":
        return
    verdict = divergence_test(g, q)
    if verdict.verdict == REFUSED:
        raise RefusedNonIsolated("non-isolated singularity", vertex=q.vertex)
    if verdict.verdict != DIVERGENT:
        raise RefusedInconclusive("criterion inconclusive at this point", vertex=q.vertex)


def planar_r0(gp: GoodnessProfile):
    """Largest planar radius <= rbar / 2."""
    r0, _ = gp.profile.nudge(gp.rbar / 2, upward=False)
    return r0


def local_modulus_bound(pc: PolygonConstants, gp: GoodnessProfile, q: ScarPoint, d) -> LocalBound:
    _require_divergent(gp.profile.graph, q)
    limit = min(pc.delta, pc.rbar / pc.A)
    if not 0 < d <= limit:
        raise TooFar("d outside (0, min(delta, rbar/A)]", d=d, limit=limit)
    r0 = planar_r0(gp)
    x = pc.A * d
    integral = gp.integral_from(x) - gp.integral_from(r0) if x < r0 else 0.0
    log_value = math.log(4) - 2 * math.pi * integral
    return LocalBound(safe_exp(log_value), log_value, r0, d)


# --------------------------------------------------
# rho and the global modulus
# --------------------------------------------------
@dataclass
class GlobalModulus:
    t: float
    log_rho_hat: float
    log_kappa_t: float
    log_rho_bar: float
    pitch: float
    samples: int
    label: str = "sampled supremum"

    @property
    def value(self) -> float:
        return safe_exp(self.log_rho_bar)

    def to_dict(self) -> dict:
        return {"t": self.t, "log_rho_hat": self.log_rho_hat, "rho_hat": safe_exp(self.log_rho_hat),
                "log_kappa_t": self.log_kappa_t, "kappa_t": safe_exp(self.log_kappa_t),
                "log_rho_bar": self.log_rho_bar, "rho_bar": self.value,
                "pitch": self.pitch, "samples": self.samples, "label": self.label}


class ModulusProfile:
    """
    rho(q, h_q, t) for points of the thin collar and the global modulus.

      - Attributes:
          constants: PolygonConstants
          scar: the scar the retraction lands in
          pitch: sampling pitch along edges and branches for the supremum
      - Behavior:
          goodness profiles are built once per scar point and cached
    """

    HEIGHT_FRACTIONS = (0, Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), 1)

    def __init__(self, constants: PolygonConstants, scar: ScarGraph, pitch=None):
        self.constants = constants
        self.scar = scar
        self.pitch = constants.rbar / SAMPLE_DIVISOR if pitch is None else pitch
        self._profiles: Dict[ScarPoint, GoodnessProfile] = {}
        self._samples: Optional[List[ScarPoint]] = None

    def profile(self, q: ScarPoint) -> GoodnessProfile:
        if q not in self._profiles:
            self._profiles[q] = goodness_profile(self.scar, q, self.constants.rbar, float(self.constants.M))
        return self._profiles[q]

    def mu(self, h_q, t):
        return self.constants.A * (t + h_q)

    def log_rho(self, q: ScarPoint, h_q, t) -> float:
        pc = self.constants
        if t == 0:
            return -math.inf
        if not 0 < t < pc.delta or not 0 <= h_q <= pc.delta:
            raise OutOfRange("need 0 <= t < delta and 0 <= h_q <= delta", t=t, h_q=h_q)
        gp = self.profile(q)
        log_8r = math.log(8 * float(pc.R))
        if t <= h_q:
            integral = gp.integral_from(self.mu(h_q, h_q))
            return log_8r + math.log(float(t) / float(h_q)) - 2 * math.pi * integral
        return log_8r - 2 * math.pi * gp.integral_from(self.mu(h_q, t))

    def rho(self, q: ScarPoint, h_q, t) -> float:
        return safe_exp(self.log_rho(q, h_q, t))

    def samples(self) -> List[ScarPoint]:
        if self._samples is None:
            self._samples = sample_points(self.scar, self.pitch)
        return self._samples

    def check_singularities(self) -> None:
        for vid in singular_points(self.scar):
            _require_divergent(self.scar, ScarPoint("vertex", vertex=vid))

    def global_modulus(self, t) -> GlobalModulus:
        self.check_singularities()
        pc = self.constants
        heights = [pc.delta * f for f in self.HEIGHT_FRACTIONS]
        best = -math.inf
        for q in self.samples():
            for h in heights:
                best = max(best, self.log_rho(q, h, t))
        log_hat = math.log(2) + best
        log_kt = pc.log_kappa + math.log(float(t))
        return GlobalModulus(float(t), log_hat, log_kt, max(log_hat, log_kt), float(self.pitch), len(self.samples()))


def rho(mp: ModulusProfile, q: ScarPoint, h_q, t) -> float:
    return mp.rho(q, h_q, t)


def global_modulus(mp: ModulusProfile, t) -> GlobalModulus:
    return mp.global_modulus(t)


def modulus_table(mp: ModulusProfile, levels: int = 20) -> List[dict]:
    """Rows on the geometric grid t = delta / 2^k, k = 1..levels."""
    rows = []
    for k in range(1, levels + 1):
        t = mp.constants.delta / 2 ** k
        rows.append(mp.global_modulus(t).to_dict())
    logger.info(f"🔁 modulus table with {levels} rows")
    return rows
