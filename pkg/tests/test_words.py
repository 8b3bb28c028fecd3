"""Words, orbits, the path metric, and the shared word pool."""

import math
import random

import pytest

from presslab.systems import parse_system
from presslab.words import (
    Word,
    WordPool,
    all_words,
    consecutive_sum,
    constant_rule,
    dn_distance,
    explicit_rule,
    orbit,
    periodic_rule,
    word_count,
)
from presslab.potentials import constant_potential, random_potential


def test_word_basics():
    w = Word((1, 2, 1))
    assert len(w) == 3
    assert list(w) == [1, 2, 1]
    with pytest.raises(ValueError):
        Word((0, 1))
    with pytest.raises(ValueError):
        Word(())


def test_orbit_doubling():
    db = parse_system("cantor:2,2")
    pts = orbit(db, 0.3, Word((1, 1, 1)))
    assert pts[0] == pytest.approx(0.3)
    assert pts[1] == pytest.approx(0.6)
    assert pts[2] == pytest.approx(0.2)
    assert pts[3] == pytest.approx(0.4)
    # orbit includes the starting point and the full-word endpoint
    assert len(pts) == 4


def test_dn_distance_includes_endpoint():
    db = parse_system("cantor:2,2")
    d = dn_distance(db, 0.3, 0.32, Word((1, 1)))
    # separations 0.02, 0.04, 0.08 along the orbit; max is at the endpoint
    assert d == pytest.approx(0.08, abs=1e-12)


def test_dn_distance_circle_wraps():
    db = parse_system("cantor:2,2")
    d = dn_distance(db, 0.01, 0.99, Word((1,)))
    assert d <= 0.04 + 1e-12


def test_word_count_and_enumeration():
    assert word_count(2, 5) == 32
    assert word_count(3, 3) == 27
    ws = list(all_words(2, 3))
    assert len(ws) == 8
    assert len({w.symbols for w in ws}) == 8


def test_rules():
    assert constant_rule(2).word_at(3).symbols == (2, 2, 2)
    assert periodic_rule((1, 2)).word_at(5).symbols == (1, 2, 1, 2, 1)
    assert explicit_rule((2, 1, 2)).word_at(2).symbols == (2, 1)
    with pytest.raises(ValueError):
        explicit_rule((2, 1)).word_at(3)


def test_pool_contains_constants_and_period_two():
    pool = WordPool(3, seed=0)
    ws = pool.words(4)
    symbols = {w.symbols for w in ws}
    for j in (1, 2, 3):
        assert (j, j, j, j) in symbols
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                assert (i, j, i, j) in symbols


def test_pool_deduplicates_and_is_seed_stable():
    pool = WordPool(2, seed=5)
    ws = pool.words(3)
    assert len({w.symbols for w in ws}) == len(ws)
    # m=2, n=3 has only 8 words so the pool saturates
    assert len(ws) == 8
    again = WordPool(2, seed=5).words(3)
    assert [w.symbols for w in again] == [w.symbols for w in ws]
    other = WordPool(2, seed=6).words(12)
    assert [w.symbols for w in other] != [w.symbols for w in
                                          WordPool(2, seed=5).words(12)]


def test_pool_random_count_is_a_knob():
    small = WordPool(4, seed=1, random_count=2)
    big = WordPool(4, seed=1, random_count=32)
    assert len(small.words(6)) < len(big.words(6))


def test_consecutive_sum_matches_manual_walk():
    diag = parse_system("diag:2,3|3,2")
    phi = constant_potential([0.5, -0.25])
    w = Word((1, 2, 1))
    total = consecutive_sum(diag, phi, (0.3, 0.4), w)
    assert total == pytest.approx(0.5 - 0.25 + 0.5, abs=1e-12)


def test_consecutive_sum_concatenation_additivity():
    """Sum along uv splits at the point the u-orbit reaches."""
    diag = parse_system("diag:2,3|3,2")
    phi = random_potential(2, seed=9)
    rng = random.Random(41)
    for _ in range(60):
        nu = rng.randint(1, 5)
        nv = rng.randint(1, 5)
        u = Word(tuple(rng.randint(1, 2) for _ in range(nu)))
        v = Word(tuple(rng.randint(1, 2) for _ in range(nv)))
        x = (rng.random(), rng.random())
        uv = Word(u.symbols + v.symbols)
        mid = orbit(diag, x, u)[-1]
        lhs = consecutive_sum(diag, phi, x, uv)
        rhs = consecutive_sum(diag, phi, x, u) + \
            consecutive_sum(diag, phi, mid, v)
        assert abs(lhs - rhs) <= 1e-12


def test_orbit_applies_leading_symbol_first():
    diag = parse_system("diag:2,3|3,2")
    pts = orbit(diag, (0.4, 0.9), Word((1, 2)))
    assert pts[1][0] == pytest.approx(0.8, abs=1e-12)
    assert pts[1][1] == pytest.approx(0.7, abs=1e-12)
    assert pts[2][0] == pytest.approx((0.8 * 3) % 1.0, abs=1e-12)
    assert pts[2][1] == pytest.approx((0.7 * 2) % 1.0, abs=1e-12)
