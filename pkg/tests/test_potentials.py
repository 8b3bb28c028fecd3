"""Multi-potential construction, parsing, and the class transforms."""

import math

import pytest

from presslab.errors import ParseError
from presslab.potentials import (
    MultiPotential,
    constant_potential,
    coordinate_potential,
    parse_potential,
    random_potential,
    zero_potential,
)


def test_zero_potential():
    phi = zero_potential(2)
    assert phi.m == 2
    assert phi.eval(1, 0.4) == 0.0
    assert phi.eval(2, (0.1, 0.2)) == 0.0
    assert phi.is_constant_class
    assert phi.constant_values == (0.0, 0.0)


def test_constant_potential_eval_ignores_the_point():
    phi = constant_potential([0.5, -0.25])
    assert phi.eval(1, 0.1) == 0.5
    assert phi.eval(1, (0.9, 0.9)) == 0.5
    assert phi.eval(2, 0.7) == -0.25
    assert phi.constant_values == (0.5, -0.25)


def test_component_index_is_one_based():
    phi = constant_potential([0.5, -0.25])
    with pytest.raises((IndexError, ValueError)):
        phi.eval(0, 0.3)
    with pytest.raises((IndexError, ValueError)):
        phi.eval(3, 0.3)


def test_coordinate_potential():
    phi = coordinate_potential(2)
    assert phi.eval(1, (0.25, 0.75)) == pytest.approx(0.25)
    assert phi.eval(2, 0.4) == pytest.approx(0.4)
    assert not phi.is_constant_class


def test_random_potential_is_seeded_and_smooth():
    phi = random_potential(2, seed=7)
    a = phi.eval(1, 0.3)
    assert a == pytest.approx(phi.eval(1, 0.3))
    assert a == pytest.approx(random_potential(2, seed=7).eval(1, 0.3))
    assert a != pytest.approx(random_potential(2, seed=8).eval(1, 0.3))
    # small move, small change: fourier sums with few harmonics
    assert abs(phi.eval(1, 0.3) - phi.eval(1, 0.3001)) < 0.02
    assert not phi.is_constant_class
    assert phi.constant_values is None


def test_random_potential_amplitude_bound():
    phi = random_potential(2, seed=3, amplitude=0.1)
    worst = max(abs(phi.eval(j, i / 200.0))
                for j in (1, 2) for i in range(200))
    assert worst <= 0.1 + 1e-9


def test_scale_shift_permute():
    phi = constant_potential([0.5, -0.25])
    assert phi.scale(2.0).constant_values == (1.0, -0.5)
    assert phi.shifted(0.1).constant_values == pytest.approx((0.6, -0.15))
    assert phi.permuted((2, 1)).constant_values == (-0.25, 0.5)
    # permuting twice restores the original
    rt = phi.permuted((2, 1)).permuted((2, 1))
    assert rt.constant_values == phi.constant_values


def test_permuted_rejects_non_permutations():
    phi = constant_potential([0.5, -0.25])
    with pytest.raises(ValueError):
        phi.permuted((1, 1))


def test_sup_bound_and_distance():
    phi = constant_potential([0.5, -0.25])
    psi = zero_potential(2)
    pts = [0.3, 0.7]
    assert phi.sup_bound(pts) == pytest.approx(0.5)
    assert phi.sup_distance(psi, pts) == pytest.approx(0.5)
    assert psi.sup_distance(psi, pts) == 0.0


def test_parse_forms():
    assert parse_potential("zero", 2).constant_values == (0.0, 0.0)
    assert parse_potential("constants:0.5,-0.25", 2).constant_values == \
        (0.5, -0.25)
    # one value broadcasts to every component
    assert parse_potential("constants:0.5", 3).constant_values == \
        (0.5, 0.5, 0.5)
    assert parse_potential("coordinate", 2).eval(1, (0.25, 0.0)) == \
        pytest.approx(0.25)
    pr = parse_potential("random:7,0.3", 2)
    assert pr.eval(1, 0.3) == pytest.approx(
        random_potential(2, seed=7, amplitude=0.3).eval(1, 0.3))


@pytest.mark.parametrize("bad", [
    "nosuch",
    "constants:",
    "constants:1,2,3",     # wrong arity for m=2
    "random:x",
    "random:",
])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_potential(bad, 2, line=9)
