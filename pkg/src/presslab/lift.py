"""Skew-product lift of a generator family over the full one-sided shift.

The lift steps (omega, x) to (shifted omega, f applied to x), where the
leading symbol of omega picks the generator f.  Its Bowen balls factor
exactly: the symbol coordinate contributes one n-cylinder per length-n
word, the base coordinate the trajectory ball along that word.  Product
cover costs are therefore sums over all length-n words of per-word base
costs, and the cylinder count enters the rate as exactly log(m).
"""

import math
import random
from dataclasses import dataclass

from .analytic import log_sum_exp
from .errors import DepthTooLarge
from .pressure import PressureEstimate, estimate_pressure, min_cover_cost, \
    packing_bound
from .words import Word, all_words, explicit_rule, word_count

MC_WORD_SAMPLE = 128

__all__ = [
    "LiftPoint", "skew_apply", "lifted_potential", "lift_birkhoff_sum",
    "cylinder_cover_log", "lift_pressure_estimate", "LiftCheck",
    "LiftReport", "check_lift_inequalities",
]


@dataclass(frozen=True)
class LiftPoint:
    """Point of the skew product: a finite symbol prefix standing in for
    an infinite sequence, plus a base point.

    The prefix must be at least as long as the number of steps taken."""

    word_prefix: tuple
    base: object

    def __post_init__(self):
        for s in self.word_prefix:
            if not isinstance(s, int) or s < 1:
                raise ValueError("symbols are 1-based positive integers")

    @property
    def steps_left(self):
        return len(self.word_prefix)


def skew_apply(system, point):
    """One step of the skew product: shift the symbols and move the base
    point by the generator the leading symbol selects."""
    if not point.word_prefix:
        raise ValueError("symbol prefix exhausted")
    j = point.word_prefix[0]
    if j > system.m:
        raise ValueError("symbol %d outside 1..%d" % (j, system.m))
    image = system.apply(j, point.base)
    if image is None:
        raise ValueError("base point leaves the domain")
    return LiftPoint(point.word_prefix[1:], image)


def lifted_potential(phi, point):
    """The observable a multi-potential induces on the lift: evaluate
    the component the leading symbol selects at the base point."""
    if not point.word_prefix:
        raise ValueError("symbol prefix exhausted")
    return phi.eval(point.word_prefix[0], point.base)


def lift_birkhoff_sum(system, phi, point, n):
    """n-step sum of the lifted observable along the skew orbit.

    Agrees with the path-dependent sum of phi along the prefix word."""
    if point.steps_left < n:
        raise ValueError("prefix shorter than the requested depth")
    total = 0.0
    cur = point
    for _ in range(n):
        total += lifted_potential(phi, cur)
        cur = skew_apply(system, cur)
    return total


def cylinder_cover_log(system, phi, n, epsilon, *, pool=None, seed=0,
                       engine="auto", word_cost_fn=None):
    """Log cost of the product cover: sum over all length-n words of the
    per-word base cover cost, one symbol cylinder each.

    word_cost_fn, when given, supplies the per-word log cost directly;
    the zero function collapses the sum to the cylinder count m^n.
    Returns (log_cost, size, method, note)."""
    if word_cost_fn is not None:
        words = all_words(system.m, n)
        return (log_sum_exp([word_cost_fn(w) for w in words]),
                word_count(system.m, n), "Enumerated", "explicit word costs")
    free = min_cover_cost(system, phi, "free", n, epsilon, pool=pool,
                          seed=seed, engine=engine)
    # the free kind reports the word-averaged cost, so the full sum over
    # cylinders is that average plus n log m
    return (free.log_cost + n * math.log(system.m), free.size, free.method,
            "per-cylinder base covers")


def _sampled_words(m, n, seed, count):
    rng = random.Random("lift:%d:%d" % (seed, n))
    return [Word(tuple(rng.randint(1, m) for _ in range(n)))
            for _ in range(count)]


def lift_pressure_estimate(system, phi, n, epsilon, *, pool=None, seed=0,
                           engine="auto"):
    """Bracket the lift pressure at one depth and radius.

    Both bounds are the base free-pressure bounds shifted by log m.
    When full word enumeration is out of reach the word average falls
    back to a seeded Monte Carlo sample of cylinders and the result is
    flagged as sampled rather than certified."""
    logm = math.log(system.m)
    note = "product of symbol cylinders and base balls"
    try:
        cover = min_cover_cost(system, phi, "free", n, epsilon, pool=pool,
                               seed=seed, engine=engine)
        pack = packing_bound(system, phi, "free", n, epsilon, pool=pool,
                             seed=seed, engine=engine)
        upper = logm + cover.log_cost / n
        lower = logm + pack.log_cost / n
        size = cover.size
        method = cover.method
    except DepthTooLarge:
        words = _sampled_words(system.m, n, seed, MC_WORD_SAMPLE)
        ups = []
        los = []
        for w in words:
            rule = explicit_rule(w.symbols)
            est = estimate_pressure(system, phi, "trajectory", n, epsilon,
                                    pool=pool, rule=rule, seed=seed,
                                    engine=engine)
            ups.append(n * est.upper)
            los.append(n * est.lower)
        upper = logm + (log_sum_exp(ups) - math.log(len(words))) / n
        lower = logm + (log_sum_exp(los) - math.log(len(words))) / n
        size = 0
        method = est.method
        note = ("monte carlo cylinder sample of %d words, uncertified"
                % len(words))
    if lower > upper:
        lower = upper
        note += "; lower clamped to upper"
    return PressureEstimate("lift", n, float(epsilon), lower, upper, size,
                            method, seed, note)


@dataclass(frozen=True)
class LiftCheck:
    label: str
    lhs: float
    rhs: float
    ok: bool


@dataclass(frozen=True)
class LiftReport:
    lift: PressureEstimate
    amalgamated: PressureEstimate
    condensed: PressureEstimate
    checks: tuple

    @property
    def all_ok(self):
        return all(c.ok for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.ok]


def check_lift_inequalities(system, phi, n, epsilon, *, pool=None, seed=0,
                            engine="auto", tolerance=1e-9):
    """Sandwich of the lift pressure between the amalgamated and upper
    condensed base pressures, each raised by the symbol term log m.

    The comparison is interval aware: the lift interval must not sit
    entirely below the shifted amalgamated interval nor entirely above
    the shifted condensed one, so estimate widths absorb finite-depth
    slack without weakening the inequality itself."""
    lift = lift_pressure_estimate(system, phi, n, epsilon, pool=pool,
                                  seed=seed, engine=engine)
    amalg = estimate_pressure(system, phi, "amalgamated", n, epsilon,
                              pool=pool, seed=seed, engine=engine)
    cond = estimate_pressure(system, phi, "condensed-upper", n, epsilon,
                             pool=pool, seed=seed, engine=engine)
    logm = math.log(system.m)
    checks = (
        LiftCheck("amalgamated lower + log m <= lift upper",
                  amalg.lower + logm, lift.upper,
                  amalg.lower + logm <= lift.upper + tolerance),
        LiftCheck("lift lower <= condensed upper + log m",
                  lift.lower, cond.upper + logm,
                  lift.lower <= cond.upper + logm + tolerance),
    )
    return LiftReport(lift, amalg, cond, checks)
