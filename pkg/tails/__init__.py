# tails/__init__.py
from core.geometry import BoundaryPos
from core.numeric import parse_number
from tails.cantor import CantorTail
from tails.finite import FiniteTail
from tails.geometric import GeometricTail
from tails.power_law import PowerLawTail

TAIL_MAP = {
    "geometric": GeometricTail,
    "power_law": PowerLawTail,
    "cantor": CantorTail,
    "finite": FiniteTail,
}


def build_tail(item: dict, exact: bool = True):
    """Instantiate a tail from its scheme-file description."""
    kind = item.get("kind")
    cls = TAIL_MAP.get(kind)
    if cls is None:
        raise ValueError(f"unknown tail kind {kind!r}")
    anchor = item.get("anchor", {})
    pos = BoundaryPos(int(anchor.get("component", 0)), parse_number(anchor.get("t", 0), exact))
    common = {
        "anchor": pos,
        "direction": int(item.get("direction", 1)),
        "isolated": bool(item.get("isolated", True)),
    }
    if item.get("arrangement"):
        common["arrangement"] = item["arrangement"]
    if kind == "finite":
        return cls([parse_number(a, exact) for a in item["lengths"]], **common)
    total = parse_number(item["total"], exact)
    if kind == "geometric":
        return cls(total, parse_number(item["ratio"], exact), **common)
    if kind == "power_law":
        return cls(total, parse_number(item["exponent"], False), **common)
    return cls(total, **common)


__all__ = ["TAIL_MAP", "build_tail", "GeometricTail", "PowerLawTail", "CantorTail", "FiniteTail"]
