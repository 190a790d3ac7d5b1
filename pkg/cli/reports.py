# cli/reports.py
"""
cli/reports.py
-------------------------------------------------
Report bundles: one JSON document plus optional CSV tables and SVG figures.

Floats are always written with 17 significant digits and Fractions as
"p/q" strings, so identical runs produce byte-identical files.
"""

import csv
import io
import json
import math
import numbers
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from core.log_utils import get_logger
from core.numeric import fmt17

logger = get_logger("folding.reports", "Reports")


def plain(value):
    """JSON-ready copy of a report value: Fractions as strings, tuples as lists, odd keys as strings."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if hasattr(value, "to_dict"):
        return plain(value.to_dict())
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return value


def _emit(value, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return json.dumps(fmt17(value))
        return fmt17(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_emit(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{pad}{_emit(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    return json.dumps(str(value))


def dump_json(value, indent: int = 2) -> str:
    return _emit(plain(value), indent, 0) + "\n"


def _cell(value) -> str:
    value = plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt17(value)
    if isinstance(value, (dict, list)):
        return dump_json(value, indent=0).replace("\n", "")
    return "" if value is None else str(value)


def dump_csv(rows: List[dict]) -> str:
    if not rows:
        return ""
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


@dataclass
class ReportBundle:
    """
    Attributes:
        name: file stem for everything the bundle writes
        data: the JSON report
        tables: CSV tables by name
        figures: SVG documents by name
        extras: other files by file name, always written with the report
        exit_code: process exit code the command asks for
    """

    name: str
    data: dict
    tables: Dict[str, List[dict]] = field(default_factory=dict)
    figures: Dict[str, str] = field(default_factory=dict)
    extras: Dict[str, str] = field(default_factory=dict)
    exit_code: int = 0

    def json_text(self) -> str:
        return dump_json(self.data)

    def render(self, fmt: str = "json") -> str:
        """Single-document rendering for stdout."""
        if fmt == "csv":
            return "".join(f"# {name}\n{dump_csv(rows)}" for name, rows in self.tables.items())
        if fmt == "svg":
            return next(iter(self.figures.values()), "")
        return self.json_text()

    def write(self, out_dir: str, fmt: str = "json") -> List[str]:
        """Write the JSON report, and the tables or figures `fmt` asks for, into out_dir."""
        os.makedirs(out_dir, exist_ok=True)
        written = []

        def put(filename: str, text: str):
            path = os.path.join(out_dir, filename)
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
            written.append(path)

        put(f"{self.name}.json", self.json_text())
        for filename, text in self.extras.items():
            put(filename, text)
        if fmt in ("csv", "all"):
            for name, rows in self.tables.items():
                put(f"{self.name}_{name}.csv", dump_csv(rows))
        if fmt in ("svg", "all"):
            for name, svg in self.figures.items():
                put(f"{self.name}_{name}.svg", svg)
        logger.info(f"✅ wrote {len(written)} file(s) to {out_dir}")
        return written


def error_report(err) -> dict:
    return plain(err.to_dict())
