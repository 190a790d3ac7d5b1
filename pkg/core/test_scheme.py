# core/test_scheme.py
from fractions import Fraction

import pytest

from core.errors import LengthMismatch, NotFull, OverlappingInteriors
from core.geometry import BoundaryPos, BoundarySegment
from core.scheme import (
    SegmentPairing,
    make_pairing,
    make_scheme,
    pairs_linked,
    partner,
    scheme_validate,
    split_pairing,
    truncate_tails,
)
from tails import CantorTail, FiniteTail

HALF = Fraction(1, 2)


def test_figure1_validates(figure1):
    scheme = scheme_validate(figure1)
    assert scheme.validated
    assert scheme.exact
    folds = {p.label: p.is_fold for p in scheme.pairings}
    assert folds == {"sides": False, "top": True}


def test_halved_tail_reports_deficit(make_figure):
    with pytest.raises(NotFull) as err:
        scheme_validate(make_figure(total=Fraction(1, 4)))
    assert err.value.deficit == Fraction(1, 4)


def test_overlapping_pairings(unit_square):
    pairings = [
        make_pairing(Fraction(0), Fraction(2), Fraction(1)),
        make_pairing(HALF, Fraction(3), Fraction(1)),
    ]
    with pytest.raises(OverlappingInteriors):
        scheme_validate(make_scheme([unit_square], pairings))


def test_length_mismatch(unit_square):
    bad = SegmentPairing(BoundarySegment(BoundaryPos(0, Fraction(0)), Fraction(2)),
                         BoundarySegment(BoundaryPos(0, Fraction(2)), Fraction(1)))
    with pytest.raises(LengthMismatch):
        scheme_validate(make_scheme([unit_square], [bad]))


def test_fold_and_vertical_pairing_unlinked(figure1):
    sides, top = figure1.pairings
    assert not pairs_linked(sides, top, 4)
    assert not pairs_linked(sides, sides, 4)


def test_torus_pairings_linked():
    a = make_pairing(Fraction(0), Fraction(2), Fraction(1))
    b = make_pairing(Fraction(1), Fraction(3), Fraction(1))
    assert pairs_linked(a, b, 4)


def test_different_components_never_linked():
    a = make_pairing(Fraction(0), Fraction(2), Fraction(1), 0, 1)
    b = make_pairing(Fraction(1), Fraction(3), Fraction(1))
    assert not pairs_linked(a, b)


def test_partner_reverses_orientation(figure1):
    scheme = scheme_validate(figure1)
    # (1, 1/4) on the right side sits opposite (0, 1/4) on the left
    assert partner(scheme, BoundaryPos(0, Fraction(5, 4))) == BoundaryPos(0, Fraction(15, 4))
    assert partner(scheme, BoundaryPos(0, Fraction(9, 4))) == BoundaryPos(0, Fraction(11, 4))
    # first tail fold covers [0, 1/2] with a0 = 1/4
    assert partner(scheme, BoundaryPos(0, Fraction(1, 8))) == BoundaryPos(0, Fraction(3, 8))


def test_split_pairing_keeps_identification():
    p = make_pairing(Fraction(1), Fraction(3), Fraction(1), label="sides")
    first, second = split_pairing(p, Fraction(1, 4))
    assert first.length + second.length == 1
    assert first.seg_b.t0 == Fraction(15, 4)
    assert second.seg_a.t0 == Fraction(5, 4)
    assert second.seg_b.t0 == Fraction(3)


def test_finite_tail_expands_into_folds(unit_square):
    tail = FiniteTail([HALF, Fraction(1, 4), Fraction(1, 4)], BoundaryPos(0, Fraction(0)))
    pairings = [make_pairing(Fraction(2), Fraction(3), Fraction(1))]
    scheme = scheme_validate(make_scheme([unit_square], pairings, [tail]))
    assert not scheme.tails
    assert len(scheme.pairings) == 4
    assert all(p.is_fold for p in scheme.pairings)


def test_truncate_contiguous_tail(figure1):
    cut = scheme_validate(truncate_tails(figure1, 4))
    assert not cut.tails
    # 4 members plus the closing fold
    assert len(cut.pairings) == 2 + 5
    assert cut.total_pairing_length == 2


def test_truncate_cantor_tail(unit_square):
    pairings = [make_pairing(Fraction(1), Fraction(3), Fraction(1)), make_pairing(Fraction(2), Fraction(5, 2), HALF)]
    scheme = make_scheme([unit_square], pairings, [CantorTail(HALF, BoundaryPos(0, Fraction(0)))])
    cut = scheme_validate(truncate_tails(scheme, 3))
    # two whole levels (3 folds) and a fold over each of the 4 gaps
    assert len(cut.pairings) == 2 + 3 + 4


def test_summary_lengths(figure1):
    s = figure1.summary()
    assert s["boundary_length"] == 4
    assert s["pairing_length"] + s["tail_length"] == 2
