# core/test_oracle.py
from fractions import Fraction

import numpy as np
import pytest

from core.geometry import BoundaryPos
from core.oracle import ChainOracle, _dyck_word, chain_distance_bruteforce, random_plain_scheme
from core.scheme_file import load_scheme_file
from core.topology import classify_topology

EPS = Fraction(1, 100)


def at(t) -> BoundaryPos:
    return BoundaryPos(0, Fraction(t))


def test_folded_square_distances(scheme_path):
    oracle = ChainOracle(load_scheme_file(scheme_path("folded_square")), EPS)
    assert oracle.distance(at(0), at(Fraction(1, 2))) == pytest.approx(0.5)
    assert oracle.distance(at(Fraction(1, 4)), at(Fraction(3, 4))) == pytest.approx(0.0)
    assert oracle.distance(at(0), at(0)) == 0


def test_torus_corners_are_one_point(scheme_path):
    scheme = load_scheme_file(scheme_path("torus"))
    for t in (1, 2, 3):
        assert chain_distance_bruteforce(scheme, at(0), at(t), EPS) == pytest.approx(0.0)
    assert chain_distance_bruteforce(scheme, at(0), at(Fraction(1, 2)), EPS) == pytest.approx(0.5)


def test_tails_are_truncated(figure1):
    oracle = ChainOracle(figure1, EPS)
    assert not oracle.scheme.tails
    assert oracle.distance(at(Fraction(1, 8)), at(Fraction(3, 8))) == pytest.approx(0.0)


def test_dyck_words_balance(rng):
    for k in range(1, 7):
        word = _dyck_word(rng, k)
        assert len(word) == 2 * k
        assert min(np.cumsum(word)) >= 0
        assert sum(word) == 0


def test_random_plain_schemes_are_spheres(rng):
    for _ in range(10):
        scheme = random_plain_scheme(rng, max_pairings=5)
        assert scheme.validated
        assert 1 <= len(scheme.pairings) <= 5
        assert classify_topology(scheme).classification == "PlainSphere"


def test_random_plain_scheme_is_seeded():
    a = random_plain_scheme(np.random.default_rng(7))
    b = random_plain_scheme(np.random.default_rng(7))
    assert a.pairings == b.pairings


def test_batched_distances_agree_with_single_queries(scheme_path):
    oracle = ChainOracle(load_scheme_file(scheme_path("folded_square")), EPS)
    pairs = [(at(0), at(Fraction(1, 2))), (at(Fraction(1, 4)), at(Fraction(3, 4))), (at(0), at(0))]
    assert oracle.distances(pairs) == pytest.approx([oracle.distance(x, y) for x, y in pairs])
