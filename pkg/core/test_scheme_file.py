# core/test_scheme_file.py
import json
from fractions import Fraction

import pytest

from core.errors import ParseError
from core.scheme import scheme_validate
from core.scheme_file import emit_scheme_text, load_scheme_file, parse_scheme_text, write_scheme_file

BUNDLED = ["figure1", "figure2", "cantor", "power_law", "crossed", "torus",
           "tight_horseshoe", "folded_square", "two_squares"]

SQUARE = {"vertices": [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]}


def scheme_json(**overrides) -> str:
    doc = {"version": 1, "name": "t", "polygons": [SQUARE],
           "pairings": [{"a": {"start": "0"}, "b": {"start": "2"}, "length": "1"},
                        {"a": {"start": "1"}, "b": {"start": "3"}, "length": "1"}]}
    doc.update(overrides)
    return json.dumps(doc)


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_schemes_validate(scheme_path, name):
    scheme = scheme_validate(load_scheme_file(scheme_path(name)))
    assert scheme.name == name
    assert scheme.exact == (name != "power_law")


def test_minimal_scheme_parses():
    scheme = parse_scheme_text(scheme_json())
    assert scheme.exact
    assert scheme.component_length(0) == 4
    assert [p.length for p in scheme.pairings] == [1, 1]


def test_polygon_free_scheme():
    text = scheme_json(polygons=[], boundary_lengths=["4"])
    scheme = parse_scheme_text(text)
    assert scheme.polygons == ()
    assert scheme.component_length(0) == 4


def test_json_error_carries_line_and_column():
    with pytest.raises(ParseError) as err:
        parse_scheme_text('{\n  "version": 1,\n  "name": \n}')
    assert err.value.line == 4
    assert err.value.column == 1


@pytest.mark.parametrize("overrides,where", [
    ({"bogus": 1}, "bogus"),
    ({"version": 2}, "version"),
    ({"tails": [{"kind": "spiral", "anchor": {"t": "0"}}]}, "tails.0.kind"),
    ({"pairings": [{"a": {"start": "x"}, "b": {"start": "0"}, "length": "1"}]}, "pairings.0.a.start"),
])
def test_model_errors_name_the_field(overrides, where):
    with pytest.raises(ParseError) as err:
        parse_scheme_text(scheme_json(**overrides))
    assert err.value.details["location"] == where
    assert err.value.to_dict()["error"] == "parse_error"


def test_tail_without_parameters_rejected():
    tails = [{"kind": "geometric", "total": "1/2", "anchor": {"t": "0"}}]
    with pytest.raises(ParseError):
        parse_scheme_text(scheme_json(tails=tails))


def test_boundary_needed():
    with pytest.raises(ParseError):
        parse_scheme_text(scheme_json(polygons=[]))


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_scheme_file(str(tmp_path / "absent.json"))


def test_emitted_tight_horseshoe_reads_back(tight, tmp_path):
    path = write_scheme_file(tight.scheme, str(tmp_path / "tight.json"))
    again = load_scheme_file(path)
    assert again.pairings == tight.scheme.pairings
    assert [t.to_dict() for t in again.tails] == [t.to_dict() for t in tight.scheme.tails]
    assert again.tails[0].direction == -1
    assert json.loads(emit_scheme_text(again))["tails"][0]["total"] == "1/2"


def test_float_mode_keeps_tolerance(scheme_path):
    scheme = load_scheme_file(scheme_path("power_law"))
    assert scheme.tolerance > 0
    assert isinstance(scheme.component_length(0), float)
    doc = json.loads(emit_scheme_text(scheme))
    assert doc["mode"] == "float"
    assert parse_scheme_text(emit_scheme_text(scheme)).tolerance == scheme.tolerance


def test_exact_numbers_stay_fractions(figure1):
    text = emit_scheme_text(figure1)
    assert '"5/2"' in text
    assert parse_scheme_text(text).pairings[1].seg_b.t0 == Fraction(5, 2)
