# cli/commands.py
"""
cli/commands.py
-------------------------------------------------
Command dispatch for the folding toolkit.

    validate  <scheme>            scheme_validate; exit 1 when the scheme is invalid
    classify  <scheme>            topology of the quotient
    scar      <scheme>            scar graph, plus (r, m, n) tables at --query points
    criterion <scheme>            divergence verdicts at every singular point
    modulus   <scheme>            polygon constants and the global modulus table
    horseshoe --n k               P_k, its analytic scar, bounds and lambda certificate
    converge  --max-n k --eps e   convergence of P_n to the tight horseshoe
    uniform   --k k               the family-wide modulus rho_bar on t = delta / 2^j

A <scheme> is a file path or a library name. Exit codes: 0 success,
1 validation or verdict failure, 2 parse error, 3 refusal.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from core.ball import ball_profile
from core.collar import is_collar_height
from core.criterion import DIVERGENT, REFUSED, criterion_report, goodness_profile, goodness_table
from core.errors import FoldingError, InvalidHeight, OutOfRange, ParseError, Refusal
from core.geometry import BoundaryPos
from core.log_utils import get_logger
from core.modulus import ModulusProfile, compute_constants, modulus_table
from core.numeric import parse_number
from core.persistence import SchemeLibrary
from core.scar import build_scar_graph, scar_export
from core.scheme import FoldingScheme, scheme_validate
from core.scheme_file import emit_scheme_text
from core.topology import classify_topology
from cli.reports import ReportBundle, dump_json, error_report
from cli.svg import polygon_svg, scar_svg
from horseshoe.convergence import convergence_report
from horseshoe.gn_model import build_gn_model
from horseshoe.nbt import (
    build_Pn,
    fn_side_images,
    lambda_bracket,
    lambda_root_count,
    pn_exact_polygon,
    q0_identity_gap,
    vertical_projections,
)
from horseshoe.uniform import FAMILY_HBAR, RBAR, check_gn_bounds, family_constants, log_grid, uniform_table

logger = get_logger("folding.cli", "CLI")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_REFUSED = 3

FORMATS = ("json", "csv", "svg", "all")


# --------------------------------------------------
# Helpers
# --------------------------------------------------
def load_scheme(arg: str, library: Optional[SchemeLibrary] = None) -> FoldingScheme:
    return (library or SchemeLibrary()).load(arg)


def parse_query(text: str, exact: bool = True) -> BoundaryPos:
    """'component:t' or 't'."""
    comp, _, t = text.rpartition(":")
    try:
        return BoundaryPos(int(comp) if comp else 0, parse_number(t, exact))
    except ValueError as e:
        raise ParseError(f"bad query {text!r}: expected component:t", query=text) from e


def _radii(top, grid: int) -> list:
    return [top * j / grid for j in range(1, grid + 1)]


# --------------------------------------------------
# Commands
# --------------------------------------------------
def cmd_validate(path: str) -> ReportBundle:
    scheme = scheme_validate(load_scheme(path))
    logger.info(f"✅ {scheme.name or path}: valid")
    return ReportBundle("validate", {"ok": True, "scheme": scheme.summary()})


def cmd_classify(path: str) -> ReportBundle:
    report = classify_topology(load_scheme(path))
    return ReportBundle("classify", {"ok": True, "topology": report.to_dict()})


def cmd_scar(path: str, queries: List[str] = (), grid: int = 8) -> ReportBundle:
    scheme = load_scheme(path)
    scar = build_scar_graph(scheme)
    top = min(scar.injectivity_radius, scheme.total_boundary_length / 8)
    rows = []
    for text in queries:
        pos = parse_query(text, scheme.exact)
        q = scar.locate(pos)
        profile = ball_profile(scar, q, top)
        for row in profile.table(_radii(top, grid)):
            rows.append({"query": text, **row})
    bundle = ReportBundle("scar", {"ok": True, "scar": scar_export(scar), "balls": rows})
    if rows:
        bundle.tables["balls"] = rows
    bundle.figures["scar"] = scar_svg(scar)
    if scheme.polygons:
        bundle.figures["polygon"] = polygon_svg(scheme.polygons[0], scheme)
    return bundle


def cmd_criterion(path: str, queries: List[str] = (), grid: int = 8) -> ReportBundle:
    scheme = load_scheme(path)
    scar = build_scar_graph(scheme)
    verdicts = criterion_report(scar)
    rows = []
    for text in queries:
        q = scar.locate(parse_query(text, scheme.exact))
        gp = goodness_profile(scar, q)
        for row in goodness_table(gp, _radii(gp.rbar, grid + 1)[:-1]):
            rows.append({"query": text, **row})
    kinds = {v.verdict for v in verdicts}
    code = EXIT_REFUSED if REFUSED in kinds else (EXIT_FAILED if kinds - {DIVERGENT} else EXIT_OK)
    bundle = ReportBundle("criterion", {"ok": code == EXIT_OK, "verdicts": [v.to_dict() for v in verdicts],
                                        "goodness": rows}, exit_code=code)
    if rows:
        bundle.tables["goodness"] = rows
    return bundle


def cmd_modulus(path: str, grid: int = 20, hbar: Optional[str] = None, rbar: Optional[str] = None) -> ReportBundle:
    scheme = load_scheme(path)
    if len(scheme.polygons) != 1:
        raise OutOfRange("the modulus needs exactly one polygon", polygons=len(scheme.polygons))
    polygon = scheme.polygons[0]
    scar = build_scar_graph(scheme)
    h = parse_number(hbar, True) if hbar is not None else None
    r = parse_number(rbar, True) if rbar is not None else None
    if h is not None and not is_collar_height(polygon, h):
        raise InvalidHeight("hbar fails the collar predicate", hbar=h)
    constants = compute_constants(polygon, scar, hbar=h, rbar=r)
    mp = ModulusProfile(constants, scar)
    mp.check_singularities()
    rows = modulus_table(mp, levels=grid)
    return ReportBundle("modulus", {"ok": True, "constants": constants.to_dict(), "modulus": rows},
                        tables={"modulus": rows})


def cmd_horseshoe(n: int, grid: int = 64, library: Optional[SchemeLibrary] = None,
                  save: bool = True) -> ReportBundle:
    pn = build_Pn(n)
    model = build_gn_model(n)
    bounds = check_gn_bounds(n, radii=log_grid(1e-6, RBAR, grid), strict=False)
    collared = is_collar_height(pn_exact_polygon(n), FAMILY_HBAR)
    lo, hi = lambda_bracket(n)
    certificate = {"lambda": pn.params.lam, "bracket": [str(lo), str(hi)],
                   "residual": pn.params.residual, "roots_in_interval": lambda_root_count(n)}
    data = {
        "ok": bounds.ok and collared,
        "params": pn.params.to_dict(),
        "family_collar": {"hbar": FAMILY_HBAR, "ok": collared},
        "lambda_certificate": certificate,
        "sides": {k: {"start": v[0], "length": v[1]} for k, v in pn.sides.items()},
        "orbit_points": [p.t for p in pn.orbit_points],
        "q0_identity_gap": q0_identity_gap(pn),
        "vertical_projections": vertical_projections(pn.params),
        "fn_side_images": fn_side_images(pn),
        "scar_model": {"total_measure": model.scar.total_measure, "vertices": len(model.scar.vertices),
                       "edges": len(model.scar.edges)},
        "bounds": {"ok": bounds.ok, "violations": bounds.violations},
    }
    bundle = ReportBundle(f"P{n}", data, exit_code=EXIT_OK if data["ok"] else EXIT_FAILED)
    bundle.tables["center_bounds"] = bounds.center_rows
    bundle.tables["integral_bounds"] = bounds.integral_rows
    bundle.figures["polygon"] = polygon_svg(pn.polygon, pn.scheme)
    bundle.figures["scar"] = scar_svg(model.scar)
    bundle.extras[f"P{n}_scheme.json"] = emit_scheme_text(pn.scheme)
    if save:
        data["saved"] = (library or SchemeLibrary()).save(pn.scheme, f"P{n}")
    return bundle


def cmd_converge(max_n: int, eps: float, seed: int = 0) -> ReportBundle:
    report = convergence_report(max_n, eps, seed)
    data = report.to_dict()
    data["ok"] = report.n0 is not None
    return ReportBundle("converge", data, tables={"rows": report.rows, "relation": report.relation},
                        exit_code=EXIT_OK if data["ok"] else EXIT_FAILED)


def cmd_uniform(k: int = 20) -> ReportBundle:
    rows = uniform_table(k)
    return ReportBundle("uniform", {"ok": True, "constants": family_constants().to_dict(), "rho_bar": rows},
                        tables={"rho_bar": rows})


# --------------------------------------------------
# Entry point
# --------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="folding", description="Paper-folding schemes: scars, criteria, moduli.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json", help="stdout rendering or files to write")
    common.add_argument("--out", default=None, help="directory for the report bundle")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled computations")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "classify"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("scheme")
    for name in ("scar", "criterion"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("scheme")
        p.add_argument("--query", action="append", default=[], help="boundary point component:t")
        p.add_argument("--grid", type=int, default=8)
    p = sub.add_parser("modulus", parents=[common])
    p.add_argument("scheme")
    p.add_argument("--grid", type=int, default=20, help="rows t = delta / 2^k, k = 1..grid")
    p.add_argument("--hbar", default=None)
    p.add_argument("--rbar", default=None)
    p = sub.add_parser("horseshoe", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=int, default=64, help="radii for the centre bounds")
    p = sub.add_parser("converge", parents=[common])
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--eps", type=float, default=0.05)
    p = sub.add_parser("uniform", parents=[common])
    p.add_argument("--k", type=int, default=20)
    return parser


def _dispatch(args) -> ReportBundle:
    if args.command == "validate":
        return cmd_validate(args.scheme)
    if args.command == "classify":
        return cmd_classify(args.scheme)
    if args.command == "scar":
        return cmd_scar(args.scheme, args.query, args.grid)
    if args.command == "criterion":
        return cmd_criterion(args.scheme, args.query, args.grid)
    if args.command == "modulus":
        return cmd_modulus(args.scheme, args.grid, args.hbar, args.rbar)
    if args.command == "horseshoe":
        return cmd_horseshoe(args.n, args.grid, save=args.out is None)
    if args.command == "converge":
        return cmd_converge(args.max_n, args.eps, args.seed)
    return cmd_uniform(args.k)


def _set_verbose():
    for name in list(logging.root.manager.loggerDict):
        if name.startswith("folding"):
            logging.getLogger(name).setLevel(logging.DEBUG)


def exit_code_for(err: FoldingError) -> int:
    if isinstance(err, Refusal):
        return EXIT_REFUSED
    if isinstance(err, ParseError):
        return EXIT_PARSE
    return EXIT_FAILED


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.verbose:
        _set_verbose()
    try:
        bundle = _dispatch(args)
    except FoldingError as e:
        logger.error(f"❌ {args.command}: {e}")
        stdout.write(dump_json(error_report(e)))
        return exit_code_for(e)
    if args.out:
        bundle.write(os.path.abspath(args.out), args.format)
    else:
        stdout.write(bundle.render(args.format))
    return bundle.exit_code


__all__ = ["main", "build_parser", "cmd_validate", "cmd_classify", "cmd_scar", "cmd_criterion",
           "cmd_modulus", "cmd_horseshoe", "cmd_converge", "cmd_uniform", "parse_query", "exit_code_for"]
