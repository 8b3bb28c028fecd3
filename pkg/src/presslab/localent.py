"""Pointwise entropies of measures from ball-mass decay rates.

A measure is either a density on a regular grid or a weighted sample.
Uniform grid densities additionally know the continuum measure they
discretize, so ball masses of the box, arc and union families come out
exactly; cell sums cannot follow balls that shrink geometrically in the
depth, and without the exact path every deep rate would be grid noise.
Decay rates are taken as sup and inf over a word pool plus the
exhaustive union ball, with the minimum over a depth range standing in
for the liminf.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import analytic
from .balls import BallSpec, ball_contains
from .errors import ParseError, UnderResolved
from .words import WordPool

__all__ = [
    "MeasureModel", "ProductMeasureModel", "LocalEntropyEstimate",
    "lebesgue_measure", "grid_measure", "empirical_measure",
    "dirac_measure", "parse_measure", "measure_from_csv", "ball_measure",
    "local_amalgamated_entropy", "shannon_entropy",
    "lebesgue_entropy_rate", "MarginalPointCheck", "MarginalBoundReport",
    "marginal_bound_check", "sample_points",
]

GRID = "grid"
EMPIRICAL = "empirical"


@dataclass(frozen=True)
class MeasureModel:
    """Probability measure: per-cell masses on a regular grid, or a
    weighted point sample.

    Grid cells are indexed row-major with centers at (i + 1/2) * delta;
    tori use a square grid, interval domains a one-dimensional one.
    uniform marks grid densities that discretize the uniform measure,
    unlocking exact ball masses for the analytic ball shapes."""

    kind: str
    resolution: int
    masses: tuple
    points: tuple
    weights: tuple
    dimensions: int
    uniform: bool = False

    def __post_init__(self):
        if self.kind not in (GRID, EMPIRICAL):
            raise ValueError("unknown measure kind %r" % self.kind)
        total = self.total_mass
        if abs(total - 1.0) > 1e-9:
            raise ValueError("measure mass %.12f is not 1" % total)
        if self.kind == GRID and any(v < 0.0 for v in self.masses):
            raise ValueError("negative cell mass")
        if self.kind == EMPIRICAL and any(w < 0.0 for w in self.weights):
            raise ValueError("negative sample weight")

    @property
    def total_mass(self):
        if self.kind == GRID:
            return float(sum(self.masses))
        return float(sum(self.weights))

    def cell_centers(self):
        g = self.resolution
        if self.dimensions == 2:
            return [((i + 0.5) / g, (j + 0.5) / g)
                    for i in range(g) for j in range(g)]
        return [(i + 0.5) / g for i in range(g)]


@dataclass(frozen=True)
class ProductMeasureModel:
    """Bernoulli weights on the symbols crossed with a base measure."""

    symbol_weights: tuple
    base: MeasureModel

    def __post_init__(self):
        if not self.symbol_weights:
            raise ValueError("empty symbol weight vector")
        if any(w < 0.0 for w in self.symbol_weights):
            raise ValueError("negative symbol weight")
        if abs(sum(self.symbol_weights) - 1.0) > 1e-9:
            raise ValueError("symbol weights must sum to 1")


def lebesgue_measure(system, resolution=64):
    """Uniform grid density on the system's domain."""
    if system.is_shift:
        raise ValueError("no uniform grid density on shift space")
    dims = 2 if system.is_toral else 1
    cells = resolution ** dims
    return MeasureModel(GRID, resolution, tuple([1.0 / cells] * cells),
                        (), (), dims, uniform=True)


def grid_measure(system, masses, resolution):
    dims = 2 if system.is_toral else 1
    masses = tuple(float(v) for v in masses)
    if len(masses) != resolution ** dims:
        raise ValueError("cell count does not match the resolution")
    return MeasureModel(GRID, resolution, masses, (), (), dims)


def empirical_measure(points, weights=None):
    points = tuple(points)
    if weights is None:
        weights = tuple([1.0 / len(points)] * len(points))
    return MeasureModel(EMPIRICAL, 0, (), points,
                        tuple(float(w) for w in weights),
                        2 if isinstance(points[0], tuple) else 1)


def dirac_measure(point):
    return empirical_measure((point,), (1.0,))


def parse_measure(spec, system, line=None, resolution=64):
    """Measure config values: lebesgue | dirac:x[,y]
    | bernoulli:p1,...,pm x lebesgue"""
    spec = spec.strip()
    if spec == "lebesgue":
        return lebesgue_measure(system, resolution)
    if spec.startswith("dirac:"):
        try:
            coords = [float(v) for v in spec[len("dirac:"):].split(",")]
        except ValueError:
            raise ParseError("bad dirac point in %r" % spec, line)
        if len(coords) == 1 and not system.is_toral:
            return dirac_measure(coords[0])
        if len(coords) == 2 and system.is_toral:
            return dirac_measure((coords[0], coords[1]))
        raise ParseError("dirac point dimension does not match the system",
                         line)
    if spec.startswith("bernoulli:"):
        body = spec[len("bernoulli:"):]
        parts = body.split("x")
        if len(parts) != 2 or parts[1].strip() != "lebesgue":
            raise ParseError("product measures are bernoulli:... x lebesgue",
                             line)
        try:
            probs = tuple(float(v) for v in parts[0].split(",") if v != "")
        except ValueError:
            raise ParseError("bad bernoulli weights in %r" % spec, line)
        if len(probs) != system.m:
            raise ParseError("need one weight per generator", line)
        return ProductMeasureModel(probs, lebesgue_measure(system,
                                                           resolution))
    raise ParseError("unknown measure %r" % spec, line)


def measure_from_csv(path, system, resolution):
    """Rows of cell_index,mass; unlisted cells get zero."""
    dims = 2 if system.is_toral else 1
    masses = [0.0] * resolution ** dims
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise ParseError("expected cell_index,mass", lineno)
            try:
                idx = int(parts[0])
                mass = float(parts[1])
            except ValueError:
                raise ParseError("bad cell row %r" % text, lineno)
            if not 0 <= idx < len(masses):
                raise ParseError("cell index out of range", lineno)
            masses[idx] = mass
    return grid_measure(system, masses, resolution)


# ---------------------------------------------------------------------------
# ball masses


def _uniform_exact_mass(measure, system, spec):
    """Exact mass of an analytic ball shape under the uniform measure,
    or None when no closed shape applies."""
    if system.is_toral and system.all_diagonal:
        entries = [g.diagonal_entries for g in system.generators]
        eps = Fraction(spec.epsilon).limit_denominator(10 ** 12)
        if spec.kind == "trajectory":
            px, py = 1, 1
            for j in spec.word:
                px *= entries[j - 1][0]
                py *= entries[j - 1][1]
            hx = min(eps / px, Fraction(1, 2))
            hy = min(eps / py, Fraction(1, 2))
            return float(4 * hx * hy)
        if spec.kind == "condensed":
            px = max(e[0] for e in entries) ** spec.depth
            py = max(e[1] for e in entries) ** spec.depth
            hx = min(eps / px, Fraction(1, 2))
            hy = min(eps / py, Fraction(1, 2))
            return float(4 * hx * hy)
        if spec.kind == "exhaustive":
            return float(analytic._star_area(entries, spec.depth, eps))
        return None
    if system.is_interval and system.wrap:
        # uniform-slope circle maps: every ball is an arc around the
        # center, words only set the contraction factor
        slopes = []
        for g in system.generators:
            if len(set(g.slopes)) != 1:
                return None
            slopes.append(g.slopes[0])
        if spec.kind == "trajectory":
            prod = 1.0
            for j in spec.word:
                prod *= slopes[j - 1]
        elif spec.kind == "condensed":
            prod = max(slopes) ** spec.depth
        elif spec.kind == "exhaustive":
            prod = min(slopes) ** spec.depth
        else:
            return None
        return min(2.0 * spec.epsilon / prod, 1.0)
    return None


def ball_measure(measure, system, spec):
    """Mass of one ball.  Grid densities demand resolution at least
    four cells per radius; empty balls return 0 and the caller maps
    them to an infinite rate with a flag."""
    if measure.kind == EMPIRICAL:
        total = 0.0
        for p, w in zip(measure.points, measure.weights):
            # a sample at the center sits in every ball kind at any
            # depth, no word enumeration needed
            if system.distance(p, spec.center) == 0.0:
                total += w
            elif ball_contains(system, spec, p):
                total += w
        return total
    delta = 1.0 / measure.resolution
    if delta > spec.epsilon / 4.0 + 1e-12:
        raise UnderResolved(
            "grid step %.5f exceeds a quarter radius" % delta)
    if measure.uniform:
        exact = _uniform_exact_mass(measure, system, spec)
        if exact is not None:
            return exact
    total = 0.0
    for idx, center in enumerate(measure.cell_centers()):
        if measure.masses[idx] > 0.0 and ball_contains(system, spec,
                                                       center):
            total += measure.masses[idx]
    return total


# ---------------------------------------------------------------------------
# local entropies


@dataclass(frozen=True)
class LocalEntropyEstimate:
    """Finite-scale local entropies at one point.

    sequence holds (n, exhaustive, lower, upper) rows over the depth
    range so the depth trend stays visible; flags mark zero-mass balls
    whose rates were taken as infinite."""

    h_upper_local: float
    h_lower_local: float
    h_exhaustive_local: float
    x: object
    n_range: tuple
    epsilon: float
    sequence: tuple = ()
    flags: tuple = ()

    def __post_init__(self):
        if self.h_exhaustive_local > self.h_lower_local + 1e-9:
            raise ValueError("exhaustive rate above the lower rate")
        if self.h_lower_local > self.h_upper_local + 1e-9:
            raise ValueError("lower rate above the upper rate")


def _rate(mass, n):
    if mass <= 0.0:
        return math.inf
    if mass >= 1.0:
        return 0.0
    return -math.log(mass) / n


def local_amalgamated_entropy(measure, system, x, epsilon, n_range, *,
                              pool=None, seed=0):
    """Ball-mass decay rates at x: sup and inf over pool words plus the
    exhaustive union ball, minimized over the depth range."""
    if pool is None:
        pool = WordPool(system.m, seed=seed)
    depths = sorted(set(int(n) for n in n_range))
    if not depths or depths[0] < 1:
        raise ValueError("depth range must contain positive depths")
    rows = []
    flags = []
    for n in depths:
        rates = []
        for word in pool.words(n):
            spec = BallSpec("trajectory", x, n, epsilon, word)
            rates.append(_rate(ball_measure(measure, system, spec), n))
        exh_spec = BallSpec("exhaustive", x, n, epsilon, None)
        exh = _rate(ball_measure(measure, system, exh_spec), n)
        lo = min(rates)
        up = max(rates)
        # the union ball dominates every word ball, so its rate can only
        # fall below the per-word ones; numerical floor keeps order
        exh = min(exh, lo)
        if math.isinf(up) or math.isinf(exh):
            flags.append("zero-mass ball at depth %d" % n)
        rows.append((n, exh, lo, up))
    return LocalEntropyEstimate(
        h_upper_local=min(r[3] for r in rows),
        h_lower_local=min(r[2] for r in rows),
        h_exhaustive_local=min(r[1] for r in rows),
        x=x, n_range=tuple(depths), epsilon=float(epsilon),
        sequence=tuple(rows), flags=tuple(flags))


# ---------------------------------------------------------------------------
# marginal bound


def shannon_entropy(weights):
    return -sum(p * math.log(p) for p in weights if p > 0.0)


def lebesgue_entropy_rate(system, symbol_weights):
    """Entropy rate of the uniform base measure under the weighted
    generator mix: the weighted mean of per-generator volume growth."""
    rate = 0.0
    for p, gen in zip(symbol_weights, system.generators):
        if p == 0.0:
            continue
        if system.is_toral:
            if not gen.is_diagonal:
                raise ValueError("analytic base rate needs diagonal "
                                 "generators")
            a, b = gen.diagonal_entries
            rate += p * (math.log(a) + math.log(b))
        elif system.is_interval:
            if len(set(gen.slopes)) != 1 or not system.wrap:
                raise ValueError("analytic base rate needs uniform-slope "
                                 "circle maps")
            rate += p * math.log(gen.slopes[0])
        else:
            raise ValueError("no analytic base rate for this domain")
    return rate


@dataclass(frozen=True)
class MarginalPointCheck:
    x: object
    h_plus: float
    h_lower: float
    tolerance: float
    ok: bool


@dataclass(frozen=True)
class MarginalBoundReport:
    bound: float
    h_product: float
    h_symbols: float
    checks: tuple

    @property
    def all_ok(self):
        return all(c.ok for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.ok]


def _generators_equal(system):
    first = system.generators[0]
    return all(g == first for g in system.generators[1:])


def _uniform_commuting(system, weights):
    uniform = all(abs(w - 1.0 / system.m) <= 1e-12 for w in weights)
    return uniform and system.is_toral and system.all_diagonal


def sample_points(measure, system, count, seed=0):
    """Draw points from the measure itself: grid cells by mass, samples
    by weight."""
    rng = random.Random("localent:%d" % seed)
    if measure.kind == EMPIRICAL:
        return [rng.choices(measure.points, measure.weights)[0]
                for _ in range(count)]
    centers = measure.cell_centers()
    return [rng.choices(centers, measure.masses)[0] for _ in range(count)]


def marginal_bound_check(product, system, sample_points_list, epsilon,
                         n_range, *, pool=None, seed=0):
    """Check that the base-marginal local entropies at sampled points
    stay below the product entropy minus the symbol entropy.

    Only the statistically self-consistent configurations are accepted:
    identical generators, or uniform symbol weights over commuting
    diagonal generators.  The tolerance at each point is the spread of
    its lower-rate sequence across the depth range, the honest
    finite-scale width."""
    weights = product.symbol_weights
    if len(weights) != system.m:
        raise ValueError("one symbol weight per generator required")
    if not (_generators_equal(system) or _uniform_commuting(system,
                                                            weights)):
        raise ValueError("rejected as non-ergodic: generators differ and "
                         "weights are not uniform over a commuting "
                         "diagonal family")
    h_symbols = shannon_entropy(weights)
    base_rate = lebesgue_entropy_rate(system, weights)
    h_product = h_symbols + base_rate
    bound = h_product - h_symbols
    checks = []
    for x in sample_points_list:
        est = local_amalgamated_entropy(product.base, system, x, epsilon,
                                        n_range, pool=pool, seed=seed)
        lows = [row[2] for row in est.sequence if not math.isinf(row[2])]
        spread = (max(lows) - min(lows)) if lows else 0.0
        tol = spread + 1e-9
        ok = (est.h_exhaustive_local <= est.h_lower_local + 1e-9
              and est.h_lower_local <= bound + tol)
        checks.append(MarginalPointCheck(x, est.h_exhaustive_local,
                                         est.h_lower_local, tol, ok))
    return MarginalBoundReport(bound, h_product, h_symbols, tuple(checks))
