# core/criterion.py
"""
core/criterion.py
-------------------------------------------------
Goodness function iota(q;r) = M / (m(q;r) + r*n(q;r)), its integrals, the
annulus-modulus lower bound, and the divergence test at singular points.
"""

import bisect
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from scipy.integrate import quad
from scipy.optimize import brentq

from core.ball import BallProfile, Piece, ball_profile
from core.errors import NoFloorFound, OutOfRange, RefusedNonIsolated
from core.log_utils import get_logger
from core.scar import SINGULAR, ScarGraph, ScarPoint
from core.settings import QUAD_LIMIT, RBAR_DIVISOR, SAMPLE_DIVISOR

logger = get_logger("folding.criterion", "Criterion")

DIVERGENT = "Divergent"
INCONCLUSIVE = "Inconclusive"
REFUSED = "RefusedNonIsolated"

DEFAULT_M = 0.2
# base * e^growth in the star-center bound must stay a finite double
LOG_FLOAT_MAX = math.log(sys.float_info.max)


def default_rbar(g: ScarGraph):
    """min(injectivity radius, total measure / RBAR_DIVISOR)."""
    return min(g.injectivity_radius, g.total_measure / RBAR_DIVISOR)


@dataclass
class GoodnessProfile:
    M: float
    profile: BallProfile
    rbar: object
    _table: Optional[tuple] = field(default=None, repr=False)

    @property
    def center(self) -> ScarPoint:
        return self.profile.center

    def integral_from(self, x) -> float:
        """I(q, x) from a cached table of whole-piece integrals."""
        if x >= self.rbar:
            return 0.0
        if self._table is None:
            pieces = self.profile.pieces(0, self.rbar)
            values = []
            for p in pieces:
                if p.dense and p.lo == 0:
                    values.append(math.inf)
                elif p.dense:
                    values.append(_quad_log(lambda s: _iota(self, s), p.lo, p.hi)[0])
                else:
                    values.append(_piece_integral(self.M, p, p.lo, p.hi))
            suffix = [0.0] * (len(pieces) + 1)
            for k in range(len(pieces) - 1, -1, -1):
                suffix[k] = suffix[k + 1] + values[k]
            self._table = ([p.lo for p in pieces], pieces, suffix)
        los, pieces, suffix = self._table
        k = max(0, bisect.bisect_right(los, x) - 1)
        p = pieces[k]
        if p.dense:
            part = _quad_log(lambda s: _iota(self, s), x, p.hi)[0]
        else:
            part = _piece_integral(self.M, p, x, p.hi)
        return suffix[k + 1] + part


def goodness_profile(g: ScarGraph, q: ScarPoint, rbar=None, M: Optional[float] = None) -> GoodnessProfile:
    rbar = default_rbar(g) if rbar is None else rbar
    return GoodnessProfile(DEFAULT_M if M is None else float(M), ball_profile(g, q, rbar), rbar)


def goodness(gp: GoodnessProfile, r) -> float:
    if not 0 < r < gp.rbar:
        raise OutOfRange("radius outside (0, rbar)", r=r, rbar=gp.rbar)
    return _iota(gp, r)


def _iota(gp: GoodnessProfile, r) -> float:
    n = gp.profile.n_right(r)
    if n == math.inf:
        return 0.0
    return gp.M / float(gp.profile.m(r) + r * n)


def _piece_integral(M: float, piece: Piece, lo, hi) -> float:
    a, beta = float(piece.a), float(piece.b + piece.c)
    lo, hi = float(lo), float(hi)
    if a + beta * lo <= 0:
        return math.inf
    if beta == 0:
        return M * (hi - lo) / a
    return M / beta * math.log((a + beta * hi) / (a + beta * lo))


def _quad_log(f, lo, hi) -> Tuple[float, float]:
    """Integral of f over [lo, hi] computed in u = ln s, split at decades."""
    u0, u1 = math.log(float(lo)), math.log(float(hi))
    steps = max(1, int((u1 - u0) / math.log(10)) + 1)
    total, err = 0.0, 0.0
    for k in range(steps):
        a = u0 + (u1 - u0) * k / steps
        b = u0 + (u1 - u0) * (k + 1) / steps
        v, e = quad(lambda u: f(math.exp(u)) * math.exp(u), a, b, limit=QUAD_LIMIT)
        total += v
        err += e
    return total, err


def goodness_integral_with_error(gp: GoodnessProfile, r1, r2) -> Tuple[float, float]:
    if r1 == r2:
        return 0.0, 0.0
    if not 0 < r1 < r2 or r2 > gp.rbar:
        raise OutOfRange("need 0 < r1 <= r2 <= rbar", r1=r1, r2=r2, rbar=gp.rbar)
    total, err = 0.0, 0.0
    for piece in gp.profile.pieces(r1, r2):
        if piece.dense:
            v, e = _quad_log(lambda s: _iota(gp, s), piece.lo, piece.hi)
            total += v
            err += e
        else:
            total += _piece_integral(gp.M, piece, piece.lo, piece.hi)
    return total, err


def goodness_integral(gp: GoodnessProfile, r1, r2) -> float:
    return goodness_integral_with_error(gp, r1, r2)[0]


@dataclass
class AnnulusBound:
    value: float
    r: object
    s: object
    shift_r: object = 0
    shift_s: object = 0

    def to_dict(self) -> dict:
        return {"lower_bound": self.value, "r": self.r, "s": self.s,
                "perturbation": {"r": self.shift_r, "s": self.shift_s},
                "label": "lower bound on the conformal modulus of the annulus"}


def annulus_modulus_lower_bound(gp: GoodnessProfile, r, s) -> AnnulusBound:
    if not 0 < r <= s or s > gp.rbar:
        raise OutOfRange("need 0 < r <= s <= rbar", r=r, s=s)
    r2, dr = gp.profile.nudge(r, upward=True)
    s2, ds = gp.profile.nudge(s, upward=True)
    s2 = min(s2, gp.rbar)
    if dr or ds:
        logger.info(f"⚠️ annulus radii perturbed to planar values by {float(dr):.3g}, {float(ds):.3g}")
    value = goodness_integral(gp, r2, s2) if r2 < s2 else 0.0
    return AnnulusBound(value, r2, s2, dr, ds)


def goodness_table(gp: GoodnessProfile, radii) -> List[dict]:
    rows = []
    for r in radii:
        n = gp.profile.n_right(r)
        rows.append({
            "r": r,
            "m": gp.profile.m(r),
            "n": gp.profile.n(r),
            "iota": _iota(gp, r),
            "I": goodness_integral(gp, r, gp.rbar),
            "planar": gp.profile.is_planar(r),
            "n_right": n,
        })
    return rows


# --------------------------------------------------
# Divergence verdicts
# --------------------------------------------------
@dataclass
class DivergenceVerdict:
    verdict: str
    rationale: str
    center: object = None
    tails: List[dict] = field(default_factory=list)
    bound: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"center": self.center, "verdict": self.verdict, "rationale": self.rationale,
                "tails": self.tails, "bound": self.bound}


def example_bound(tail) -> dict:
    """Explicit majorant or minorant of m(q;r) near an infinity-od center."""
    if tail.kind == "geometric":
        lam = float(tail.ratio)
        c1, c2 = tail.log_bound_constants()
        return {
            "kind": "geometric",
            "majorant": "m(q;r) <= 2r(log_lambda(a0/r) + 1) + 2r*lambda/(lambda-1)",
            "a0": tail.a0,
            "ratio": tail.ratio,
            "tail_sum_factor": lam / (lam - 1),
            "C1": c1,
            "C2": c2,
            "rate": "I(q,t) grows like ln ln(1/t) / C2",
        }
    if tail.kind == "power_law":
        k = tail.exponent
        return {
            "kind": "power_law",
            "minorant": "m(q;r) >= C r^(1 - 1/k)",
            "exponent": 1 - 1 / k,
            "integral": "finite: the criterion gives no information",
        }
    if tail.kind == "cantor":
        return {
            "kind": "cantor",
            "minorant": "a_n >= (1/6) n^(-ln3/ln2), so m(q;r) >= C r^(1 - ln2/ln3)",
            "exponent": 1 - math.log(2) / math.log(3),
            "integral": "finite: the criterion gives no information",
        }
    return {"kind": tail.kind}


def _tails_at(g: ScarGraph, vid) -> list:
    return [s.tail for s in g.stars if s.center == vid]


def divergence_test(g: ScarGraph, q: ScarPoint) -> DivergenceVerdict:
    if q.kind != "vertex":
        return DivergenceVerdict(DIVERGENT, "planar point: m = 4r, n = 2, integral of dr/(6r) diverges",
                                 center=q.to_dict(), bound={"k": 2})
    v = g.vertices[q.vertex]
    tails = _tails_at(g, q.vertex)
    described = [t.to_dict() for t in tails]
    if not v.isolated or any(not t.isolated for t in tails):
        return DivergenceVerdict(REFUSED, "non-isolated singularity; no verdict is given there",
                                 center=q.vertex, tails=described)
    if not tails:
        k = v.valence
        return DivergenceVerdict(DIVERGENT, f"finite valence {k}: m = 2kr, n = k, integral of dr/(3kr) diverges",
                                 center=q.vertex, bound={"k": k})
    kinds = {t.kind for t in tails}
    bounds = [example_bound(t) for t in tails]
    if kinds == {"geometric"}:
        return DivergenceVerdict(DIVERGENT, "geometric fold lengths: m(q;r) <= C r ln(1/r), integral diverges",
                                 center=q.vertex, tails=described, bound={"tails": bounds})
    return DivergenceVerdict(INCONCLUSIVE, f"{'/'.join(sorted(kinds - {'geometric'}))} fold lengths: "
                             "integral of dr/m(q;r) converges, the criterion cannot decide",
                             center=q.vertex, tails=described, bound={"tails": bounds})


def singular_points(g: ScarGraph) -> List[object]:
    return [vid for vid, v in g.vertices.items() if v.kind == SINGULAR]


def criterion_report(g: ScarGraph) -> List[DivergenceVerdict]:
    out = []
    for vid in singular_points(g):
        verdict = divergence_test(g, ScarPoint("vertex", vertex=vid))
        logger.info(f"{'✅' if verdict.verdict == DIVERGENT else '⚠️'} vertex {vid}: {verdict.verdict}")
        out.append(verdict)
    return out


# --------------------------------------------------
# Uniform floor
# --------------------------------------------------
@dataclass
class FloorResult:
    eta: float
    log_eta: float
    K: float
    samples: int
    worst: dict

    def to_dict(self) -> dict:
        return {"eta": self.eta, "log_eta": self.log_eta, "K": self.K, "samples": self.samples, "worst": self.worst}


def sample_points(g: ScarGraph, pitch) -> List[ScarPoint]:
    """Vertices, edge midpoints and grids of the given pitch on edges and star branches."""
    points = [ScarPoint("vertex", vertex=vid) for vid in g.vertices]
    for e in g.edges.values():
        points.append(ScarPoint("edge", edge=e.id, offset=e.length / 2))
        steps = int(e.length / pitch)
        for k in range(1, steps):
            off = e.length * k / steps
            if off != e.length / 2:
                points.append(ScarPoint("edge", edge=e.id, offset=off))
    for si, star in enumerate(g.stars):
        n = 0
        while True:
            a = star.tail.length(n)
            if a < pitch:
                break
            steps = int(a / pitch)
            for k in range(1, steps + 1):
                points.append(ScarPoint("star", star=si, branch=n, offset=a * k / steps))
            n += 1
    return points


def _center_log_bound(gp: GoodnessProfile, s0, need: float) -> Optional[float]:
    """log r with the analytic star bound giving integral `need` over [r, s0]; None if unavailable."""
    prof = gp.profile
    stars = [s for s in prof.stars if s.dc == 0]
    if not stars or any(s.tail.kind != "geometric" for s in stars):
        return None
    c1 = c2 = 0.0
    for s in stars:
        a, b = s.tail.log_bound_constants()
        c1 += a
        c2 += b
    c1 += 3 * sum(1 for t in prof.edges if t.du == 0)
    base = c1 + c2 * math.log(1 / float(s0))
    growth = c2 * need / gp.M
    if base > 0 and growth + math.log(base) >= LOG_FLOAT_MAX:
        raise NoFloorFound("star-center radius below the double range", need=need, log_growth=growth)
    return -((base * math.exp(growth) - c1) / c2)


def solve_radius(gp: GoodnessProfile, K: float) -> float:
    """log of the radius r with I(q, r) = K."""
    pieces = gp.profile.pieces(0, gp.rbar)
    acc = 0.0
    for piece in reversed(pieces):
        need = K - acc
        if piece.dense and piece.lo == 0:
            got = _center_log_bound(gp, piece.hi, need)
            if got is None:
                raise NoFloorFound("no divergent bound at the star center")
            return got
        lo = piece.lo if piece.lo > 0 else 0.0
        if piece.dense:
            value, _ = _quad_log(lambda s: _iota(gp, s), lo, piece.hi)
            if value >= need:
                target = acc + value - K
                r = brentq(lambda x: _quad_log(lambda s: _iota(gp, s), lo, x)[0] - target,
                           float(lo), float(piece.hi))
                return math.log(r)
            acc += value
            continue
        a, beta, hi = float(piece.a), float(piece.b + piece.c), float(piece.hi)
        if lo == 0 and a == 0:
            return math.log(hi) - beta * need / gp.M
        value = _piece_integral(gp.M, piece, lo, hi)
        if value >= need:
            if beta == 0:
                return math.log(hi - need * a / gp.M)
            return math.log(((a + beta * hi) * math.exp(-beta * need / gp.M) - a) / beta)
        acc += value
    raise NoFloorFound("integral stays below K on (0, rbar)", K=K)


def uniform_I_floor(g: ScarGraph, K: float, rbar=None, M: Optional[float] = None, pitch=None) -> FloorResult:
    for vid in singular_points(g):
        verdict = divergence_test(g, ScarPoint("vertex", vertex=vid))
        if verdict.verdict == REFUSED:
            raise RefusedNonIsolated("non-isolated singularity", vertex=vid)
        if verdict.verdict != DIVERGENT:
            raise NoFloorFound("a singularity is not divergent", vertex=vid, verdict=verdict.verdict)
    rbar = default_rbar(g) if rbar is None else rbar
    pitch = rbar / SAMPLE_DIVISOR if pitch is None else pitch
    points = sample_points(g, pitch)
    worst_log, worst = math.inf, None
    for q in points:
        log_r = solve_radius(goodness_profile(g, q, rbar, M), K)
        if log_r < worst_log:
            worst_log, worst = log_r, q
    log_eta = worst_log - math.log(2)
    eta = math.exp(log_eta) if log_eta > -745 else 0.0
    logger.info(f"✅ uniform floor for K={K}: log eta = {log_eta:.6g} over {len(points)} samples")
    return FloorResult(eta, log_eta, K, len(points), worst.to_dict() if worst else {})
