# core/errors.py
"""
core/errors.py
-------------------------------------------------
Error hierarchy for the folding toolkit.

Every error carries a stable snake_case `code` which the CLI writes into
reports as {"ok": false, "error": code}, plus a `details` dict.
"""

from typing import Any, Dict, Optional


class FoldingError(Exception):
    code = "folding_error"

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.code)
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        out = {"ok": False, "error": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


# ---- geometry ----
class SelfIntersecting(FoldingError):
    code = "self_intersecting"


class NotCounterclockwise(FoldingError):
    code = "not_counterclockwise"


class DegenerateVertex(FoldingError):
    code = "degenerate_vertex"


class OutOfRange(FoldingError):
    code = "out_of_range"


class DifferentComponents(FoldingError):
    code = "different_components"


class PointOutside(FoldingError):
    code = "point_outside"


# ---- scheme ----
class NotFull(FoldingError):
    code = "not_full"

    def __init__(self, message: str = "", deficit: Any = None, **details: Any):
        super().__init__(message, deficit=deficit, **details)
        self.deficit = deficit


class OverlappingInteriors(FoldingError):
    code = "overlapping_interiors"


class LengthMismatch(FoldingError):
    code = "length_mismatch"


class DisconnectedUnion(FoldingError):
    code = "disconnected_union"


# ---- scar ----
class NonTilingGaps(FoldingError):
    code = "non_tiling_gaps"


class BeyondInjectivityRadius(FoldingError):
    code = "beyond_injectivity_radius"


# ---- criterion ----
class NoFloorFound(FoldingError):
    code = "no_floor_found"


# ---- collar ----
class NoValidHeight(FoldingError):
    code = "no_valid_height"


class InvalidHeight(FoldingError):
    code = "invalid_height"


class TooFar(FoldingError):
    code = "too_far"


# ---- refusals ----
class Refusal(FoldingError):
    code = "refused"


class RefusedNonIsolated(Refusal):
    code = "refused_non_isolated"


class RefusedInconclusive(Refusal):
    code = "refused_inconclusive"


# ---- horseshoe ----
class BoundViolated(FoldingError):
    code = "bound_violated"


# ---- cli ----
class ParseError(FoldingError):
    code = "parse_error"

    def __init__(self, message: str = "", line: Optional[int] = None, column: Optional[int] = None, **details: Any):
        super().__init__(message, line=line, column=column, **details)
        self.line = line
        self.column = column


class SchemeNotFound(FoldingError):
    code = "scheme_not_found"
