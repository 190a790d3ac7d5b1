# horseshoe/test_tent.py
import pytest

from core.errors import OutOfRange
from horseshoe.nbt import lambda_n
from horseshoe.tent import TentMap, get_period_length, itinerary, kneading, nbt_kneading_word


def test_slope_range():
    with pytest.raises(OutOfRange):
        TentMap(1.4)
    with pytest.raises(OutOfRange):
        TentMap(2.1)
    assert TentMap(2.0).turning_point == 0.5


def test_full_tent():
    tent = TentMap(2.0)
    assert tent(1.0) == 0.0
    assert tent(0.0) == 0.0
    assert tent(0.5) == 1.0
    assert tent.orbit(0.25, 3) == [0.25, 0.5, 1.0, 0.0]
    assert itinerary(tent, 0.25, 4) == "0C10"


def test_itinerary_needs_a_symbol():
    with pytest.raises(OutOfRange):
        itinerary(TentMap(2.0), 0.3, 0)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_family_kneading(n):
    word = nbt_kneading_word(n)
    assert kneading(lambda_n(n), n + 2) == word
    assert len(word) == n + 2


@pytest.mark.parametrize("symbols,period", [
    ("1001C1001C", 5),
    ("1111", 1),
    ("10", 2),
    ("abc", 3),
    ("0101010", 2),
])
def test_period_length(symbols, period):
    assert get_period_length(symbols) == period
