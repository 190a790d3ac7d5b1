import os
import sys
from fractions import Fraction

import numpy as np
import pytest

PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from core.geometry import BoundaryPos, Point, polygon_validate  # noqa: E402
from core.scheme import make_pairing, make_scheme  # noqa: E402
from horseshoe.tight import tight_horseshoe_scheme  # noqa: E402
from tails import GeometricTail  # noqa: E402

SCHEME_DATA = os.path.join(PROJECT_ROOT, "data", "schemes")


@pytest.fixture
def unit_square():
    return polygon_validate([Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)],
                            ["bottom", "right", "top", "left"])


def figure_scheme(square, arrangement="contiguous", total=Fraction(1, 2)):
    """Sides paired, top folded in half, geometric tail (ratio 2) on the bottom."""
    pairings = [
        make_pairing(Fraction(1), Fraction(3), Fraction(1), label="sides"),
        make_pairing(Fraction(2), Fraction(5, 2), Fraction(1, 2), label="top"),
    ]
    tail = GeometricTail(total, Fraction(2), BoundaryPos(0, Fraction(0)), arrangement=arrangement)
    return make_scheme([square], pairings, [tail], name=f"figure-{arrangement}")


@pytest.fixture
def figure1(unit_square):
    return figure_scheme(unit_square)


@pytest.fixture
def figure2(unit_square):
    return figure_scheme(unit_square, "cantor")


@pytest.fixture
def tight():
    return tight_horseshoe_scheme()


@pytest.fixture
def rng():
    return np.random.default_rng(20251018)


@pytest.fixture
def scheme_path():
    def path(name: str) -> str:
        return os.path.join(SCHEME_DATA, f"{name}.json")
    return path


@pytest.fixture
def make_figure(unit_square):
    def build(arrangement="contiguous", total=Fraction(1, 2)):
        return figure_scheme(unit_square, arrangement, total)
    return build
