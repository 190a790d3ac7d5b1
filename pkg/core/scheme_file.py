# core/scheme_file.py
"""
core/scheme_file.py
-------------------------------------------------
JSON scheme files.

    {
      "version": 1,
      "name": "figure1",
      "mode": "exact",                      # or "float"
      "polygons": [{"vertices": [["0", "0"], ["1", "0"], ...], "labels": [...]}],
      "boundary_lengths": ["4"],            # only for polygon-free (abstract) schemes
      "pairings": [{"a": {"component": 0, "start": "1/4"},
                    "b": {"component": 0, "start": "1/2"},
                    "length": "1/4", "label": "p0"}],
      "tails": [{"kind": "geometric", "total": "1/2", "ratio": "2",
                 "anchor": {"component": 0, "t": "0"}, "direction": 1,
                 "arrangement": "contiguous", "isolated": true}]
    }

Numbers are strings ("p/q", integers, decimals) so exact predicates never see
a float unless the file declares "mode": "float".
"""

import json
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from core.errors import ParseError
from core.geometry import Point, polygon_validate
from core.log_utils import get_logger
from core.numeric import format_number, parse_number
from core.scheme import FoldingScheme, make_pairing, make_scheme
from tails import TAIL_MAP, build_tail

logger = get_logger("folding.scheme_file", "SchemeFile")

FORMAT_VERSION = 1

Scalar = Union[str, int, float]


def _check_number(v: Scalar) -> Scalar:
    if isinstance(v, bool):
        raise ValueError("booleans are not numbers")
    parse_number(v, exact=False)
    return v


NumberText = Annotated[Scalar, AfterValidator(_check_number)]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PositionModel(_Model):
    component: int = 0
    t: NumberText


class SegmentModel(_Model):
    component: int = 0
    start: NumberText


class PairingModel(_Model):
    a: SegmentModel
    b: SegmentModel
    length: NumberText
    label: str = ""


class TailModel(_Model):
    kind: str
    anchor: PositionModel
    total: Optional[Scalar] = None
    ratio: Optional[Scalar] = None
    exponent: Optional[Scalar] = None
    lengths: Optional[List[Scalar]] = None
    direction: Literal[1, -1] = 1
    arrangement: Literal["contiguous", "cantor", "crossed", "unspecified"] = "contiguous"
    isolated: bool = True

    @field_validator("kind")
    @classmethod
    def known_kind(cls, v: str) -> str:
        if v not in TAIL_MAP:
            raise ValueError(f"unknown tail kind {v!r}; expected one of {sorted(TAIL_MAP)}")
        return v

    @model_validator(mode="after")
    def kind_parameters(self):
        required = {"geometric": ("total", "ratio"), "power_law": ("total", "exponent"),
                    "cantor": ("total",), "finite": ("lengths",)}[self.kind]
        for name in required:
            if getattr(self, name) is None:
                raise ValueError(f"{self.kind} tail needs '{name}'")
        for name in ("total", "ratio", "exponent"):
            if getattr(self, name) is not None:
                _check_number(getattr(self, name))
        for v in self.lengths or ():
            _check_number(v)
        return self


class PolygonModel(_Model):
    vertices: List[Tuple[Scalar, Scalar]]
    labels: Optional[List[str]] = None

    @field_validator("vertices")
    @classmethod
    def at_least_3_vertices(cls, v):
        if len(v) < 3:
            raise ValueError("polygon must have at least 3 vertices")
        for x, y in v:
            _check_number(x)
            _check_number(y)
        return v


class SchemeFile(_Model):
    version: int = FORMAT_VERSION
    name: str = ""
    mode: Literal["exact", "float"] = "exact"
    tolerance: Optional[float] = None
    polygons: List[PolygonModel] = []
    boundary_lengths: Optional[List[Scalar]] = None
    pairings: List[PairingModel] = []
    tails: List[TailModel] = []

    @field_validator("version")
    @classmethod
    def supported_version(cls, v: int) -> int:
        if v != FORMAT_VERSION:
            raise ValueError(f"unsupported version {v}")
        return v

    @model_validator(mode="after")
    def has_boundary(self):
        if not self.polygons and not self.boundary_lengths:
            raise ValueError("either polygons or boundary_lengths is required")
        if self.polygons and self.boundary_lengths:
            raise ValueError("boundary_lengths is only for polygon-free schemes")
        return self

    # ---- conversion ----
    def to_scheme(self) -> FoldingScheme:
        exact = self.mode == "exact"

        def num(v):
            return parse_number(v, exact)

        polygons = [
            polygon_validate([Point(num(x), num(y)) for x, y in p.vertices], p.labels)
            for p in self.polygons
        ]
        pairings = [
            make_pairing(num(p.a.start), num(p.b.start), num(p.length), p.a.component, p.b.component, p.label)
            for p in self.pairings
        ]
        tails = []
        for i, t in enumerate(self.tails):
            try:
                tails.append(build_tail(t.model_dump(exclude_none=True), exact))
            except ValueError as e:
                raise ParseError(str(e), location=f"tails.{i}") from e
        lengths = [num(x) for x in self.boundary_lengths] if self.boundary_lengths else None
        tolerance = self.tolerance if self.tolerance is not None else (0 if exact else None)
        return make_scheme(polygons, pairings, tails, lengths, name=self.name, tolerance=tolerance)


# --------------------------------------------------
# Reading
# --------------------------------------------------
def _location(err: dict) -> str:
    return ".".join(str(x) for x in err.get("loc", ())) or "<root>"


def parse_scheme_text(text: str, source: str = "<string>") -> FoldingScheme:
    """Parse scheme file text; no validation beyond the file model and polygon checks."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        model = SchemeFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise ParseError(f"{source}: {first['msg']}", location=_location(first),
                         problems=len(e.errors())) from e
    scheme = model.to_scheme()
    logger.debug(f"✅ parsed {source}: {len(scheme.pairings)} pairings, {len(scheme.tails)} tails")
    return scheme


def load_scheme_file(path: str) -> FoldingScheme:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", path=path) from e
    return parse_scheme_text(text, source=path)


# --------------------------------------------------
# Writing
# --------------------------------------------------
def scheme_to_dict(scheme: FoldingScheme) -> dict:
    """File form of a scheme; parse(emit(s)) rebuilds the same pairings and tails."""
    fmt = format_number
    out = {"version": FORMAT_VERSION, "name": scheme.name, "mode": "exact" if scheme.exact else "float"}
    if not scheme.exact:
        out["tolerance"] = scheme.tolerance
    if scheme.polygons:
        out["polygons"] = []
        for p in scheme.polygons:
            item = {"vertices": [[fmt(v.x), fmt(v.y)] for v in p.vertices]}
            if p.labels:
                item["labels"] = list(p.labels)
            out["polygons"].append(item)
    else:
        out["boundary_lengths"] = [fmt(x) for x in scheme.boundary_lengths]
    out["pairings"] = [
        {"a": {"component": p.seg_a.component, "start": fmt(p.seg_a.t0)},
         "b": {"component": p.seg_b.component, "start": fmt(p.seg_b.t0)},
         "length": fmt(p.length), "label": p.label}
        for p in scheme.pairings
    ]
    tails = []
    for tail in scheme.tails:
        d = tail.to_dict()
        item = {"kind": d["kind"], "anchor": {"component": d["anchor"]["component"], "t": fmt(d["anchor"]["t"])},
                "direction": d["direction"], "arrangement": d["arrangement"], "isolated": d["isolated"]}
        if d["kind"] == "finite":
            item["lengths"] = [fmt(a) for a in d["lengths"]]
        else:
            item["total"] = fmt(d["total"])
        for key in ("ratio", "exponent"):
            if key in d:
                item[key] = fmt(d[key])
        tails.append(item)
    out["tails"] = tails
    return out


def emit_scheme_text(scheme: FoldingScheme) -> str:
    return json.dumps(scheme_to_dict(scheme), indent=2) + "\n"


def write_scheme_file(scheme: FoldingScheme, path: str) -> str:
    with open(path, "w", encoding="utf-8") as f:
        f.write(emit_scheme_text(scheme))
    logger.info(f"✅ scheme written to {path}")
    return path


__all__ = ["SchemeFile", "parse_scheme_text", "load_scheme_file", "scheme_to_dict",
           "emit_scheme_text", "write_scheme_file"]
