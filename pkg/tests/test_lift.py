"""Skew-product lift: orbits, cylinder covers, and the sandwich."""

import math

import pytest

from presslab.lift import (
    LiftPoint,
    check_lift_inequalities,
    cylinder_cover_log,
    lift_birkhoff_sum,
    lift_pressure_estimate,
    lifted_potential,
    skew_apply,
)
from presslab.potentials import constant_potential, zero_potential
from presslab.systems import parse_system
from presslab.words import Word, WordPool, consecutive_sum, orbit

DIAG = parse_system("diag:2,3|3,2")
ZERO2 = zero_potential(2)


def test_lift_point_validation():
    with pytest.raises(ValueError):
        LiftPoint((0, 1), 0.3)
    with pytest.raises(ValueError):
        LiftPoint((1.5,), 0.3)


def test_skew_apply_shifts_and_moves():
    pt = LiftPoint((1, 2), (0.3, 0.4))
    nxt = skew_apply(DIAG, pt)
    assert nxt.word_prefix == (2,)
    assert nxt.base[0] == pytest.approx(0.6, abs=1e-12)
    assert nxt.base[1] == pytest.approx(0.2, abs=1e-12)
    last = skew_apply(DIAG, nxt)
    assert last.word_prefix == ()
    with pytest.raises(ValueError):
        skew_apply(DIAG, last)


def test_lifted_potential_reads_leading_symbol():
    phi = constant_potential([0.5, -0.25])
    assert lifted_potential(phi, LiftPoint((1, 2), (0.3, 0.4))) == 0.5
    assert lifted_potential(phi, LiftPoint((2,), (0.3, 0.4))) == -0.25


def test_birkhoff_sum_matches_path_sum():
    phi = constant_potential([0.5, -0.25])
    pt = LiftPoint((1, 2), (0.3, 0.4))
    assert lift_birkhoff_sum(DIAG, phi, pt, 2) == pytest.approx(0.25,
                                                                abs=1e-12)
    w = Word((1, 2, 2, 1))
    pt2 = LiftPoint(w.symbols, (0.7, 0.1))
    assert lift_birkhoff_sum(DIAG, phi, pt2, 4) == pytest.approx(
        consecutive_sum(DIAG, phi, (0.7, 0.1), w), abs=1e-12)
    with pytest.raises(ValueError):
        lift_birkhoff_sum(DIAG, phi, pt, 3)


def test_cylinder_identity_with_explicit_costs():
    """Zero per-word cost collapses the product cover to the cylinder
    count m^n exactly."""
    for n in (3, 6, 9):
        log_cost, size, method, _ = cylinder_cover_log(
            DIAG, ZERO2, n, 0.125, pool=WordPool(2, seed=0),
            word_cost_fn=lambda w: 0.0)
        assert log_cost == pytest.approx(n * math.log(2), abs=1e-12)
        assert size == 2 ** n
        assert method == "Enumerated"


def test_lift_estimate_diag_golden():
    est = lift_pressure_estimate(DIAG, ZERO2, 9, 0.125,
                                 pool=WordPool(2, seed=0), seed=0)
    assert est.lower == pytest.approx(math.log(12), abs=1e-9)
    assert est.upper == pytest.approx(2.792972063370198, abs=1e-9)
    assert est.method == "AnalyticBox"


def test_lift_on_single_generator_adds_nothing():
    """log m vanishes at m=1, so the lift reproduces the base free
    pressure interval."""
    single = parse_system("toral:0,1,1,2")
    zero1 = zero_potential(1)
    pool = WordPool(1, seed=0)
    est = lift_pressure_estimate(single, zero1, 32, 0.125, pool=pool,
                                 seed=0)
    h = math.log(1.0 + math.sqrt(2.0))
    assert est.lower <= h + 0.1
    assert est.upper >= h - 0.1


def test_lift_doubling_pair_brackets_log4():
    db = parse_system("cantor:2,2|2,2")
    est = lift_pressure_estimate(db, zero_potential(2), 8, 0.125,
                                 pool=WordPool(2, seed=0), seed=0)
    assert est.lower <= math.log(4.0) + 1e-9
    assert est.upper >= math.log(4.0) - 1e-9


def test_sandwich_checks_on_diag():
    rep = check_lift_inequalities(DIAG, ZERO2, 9, 0.125,
                                  pool=WordPool(2, seed=0), seed=0)
    assert rep.all_ok
    assert len(rep.checks) == 2
    labels = [c.label for c in rep.checks]
    assert "amalgamated lower + log m <= lift upper" in labels
    assert "lift lower <= condensed upper + log m" in labels
    assert rep.failed() == []


def test_monte_carlo_fallback_is_flagged():
    """Past the enumeration cap the word average is sampled, and the
    note says so instead of pretending the bound is certified."""
    est = lift_pressure_estimate(DIAG, ZERO2, 13, 0.125,
                                 pool=WordPool(2, seed=0), seed=0)
    if "monte carlo" in est.note:
        assert "uncertified" in est.note
    else:
        # constant classes keep the exact average available past the cap
        assert est.lower <= est.upper
