"""Closed-form cover and packing counts.

Three engines, all exact up to integer rounding:

* diagonal toral: dynamical balls are axis boxes, covers are box tilings
  and packing counts come from the maximal-packing volume argument with
  the exact area of the union of the per-word boxes.
* general toral: the no-wrap ball is a centrally symmetric polygon cut
  out by the prefix matrices; covers tile the torus with an inscribed
  diamond lattice, packings use the polygon area at doubled radius.
* interval branch maps: cylinders of a word carry exact counts, the
  invariant core is refined to explicit blocks, and cover/packing numbers
  at a relative scale come from 1-d greedy sweeps over those blocks.

Everything here requires potentials whose consecutive sums factor over
symbols (constant components, or per-branch expansion components); the
caller falls back to the grid engine otherwise.

Wrap exactness guard: on the torus (and on circle interval maps) a
strict ball of radius rho equals its no-wrap model only when one applied
generator cannot stretch a displacement past the opposite side of the
fundamental domain, i.e. when rho <= 1/(L+1) for L the largest one-step
Lipschitz constant.  Packing counts insist on that guard at rho = 2*eps;
cover counts never need it because the no-wrap region is always
contained in the true ball.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AnalyticUnavailable, DepthTooLarge
from .words import ENUM_CAP, Word

LN2 = math.log(2.0)


def log_big(x):
    """Natural log of a positive int or Fraction without float overflow."""
    if isinstance(x, Fraction):
        return (math.log2(x.numerator) - math.log2(x.denominator)) * LN2
    return math.log2(x) * LN2


def frac_ceil(f):
    return -((-f.numerator) // f.denominator)


def frac_floor(f):
    return f.numerator // f.denominator


def wrap_guard_ok(rho, lipschitz):
    """Strict balls at radius rho have no wrap component when
    (L + 1) * rho <= 1."""
    return (lipschitz + 1.0) * rho <= 1.0 + 1e-12


def log_sum_exp(terms):
    peak = max(terms)
    return peak + math.log(sum(math.exp(t - peak) for t in terms))


# ---------------------------------------------------------------------------
# box model for diagonal toral families


@dataclass(frozen=True)
class BallBox:
    """Axis-aligned model box: per-axis half sides, clamped to the torus."""
    half_sides: tuple

    def __post_init__(self):
        if any(h <= 0.0 for h in self.half_sides):
            raise ValueError("box half sides must be positive")


def analytic_ball_box(system, kind, epsilon, depth, word=None):
    """Half sides of the model box for one ball family on a diagonal
    system with entries >= 2.

    kinds: trajectory (needs a word), condensed, exhaustive-inner,
    exhaustive-outer.  Both exhaustive comparison constants are
    normalized to 1, so the inner and outer boxes coincide."""
    entries = _diag_entries(system)
    if kind == "trajectory":
        if word is None or len(word) != depth:
            raise ValueError("trajectory box needs a word of the depth")
        px, py = _axis_products(entries, word)
        hx = epsilon / px
        hy = epsilon / py
    elif kind == "condensed":
        hx = epsilon / max(e[0] for e in entries) ** depth
        hy = epsilon / max(e[1] for e in entries) ** depth
    elif kind in ("exhaustive-inner", "exhaustive-outer"):
        hx = epsilon / min(e[0] for e in entries) ** depth
        hy = epsilon / min(e[1] for e in entries) ** depth
    else:
        raise ValueError("unknown box kind %r" % kind)
    return BallBox((min(hx, 0.5), min(hy, 0.5)))


def _diag_entries(system):
    if not system.is_toral or not system.all_diagonal:
        raise AnalyticUnavailable("box model needs diagonal generators")
    entries = [g.diagonal_entries for g in system.generators]
    if any(e < 2 for pair in entries for e in pair):
        raise AnalyticUnavailable("box model needs diagonal entries >= 2")
    return entries


def _axis_products(entries, word):
    px = 1
    py = 1
    for j in word:
        a, b = entries[j - 1]
        px *= a
        py *= b
    return px, py


def _word_weight_log(constants, word):
    return sum(constants[j - 1] for j in word)


def _degenerate_cover(kind, n, m, pool, rule, step_log_weight,
                      lo_const=None, hi_const=None):
    """One ball covers the whole domain, so every count is 1 and the
    cost is the word weight alone."""
    def word_cost(word):
        return sum(step_log_weight(j) for j in word)

    note = "degenerate: radius covers the domain"
    if kind == "trajectory":
        return (word_cost(rule.word_at(n)), 1, note)
    if kind == "amalgamated":
        return (min(word_cost(w) for w in pool.words(n)), 1, note)
    if kind in ("condensed-lower", "exhaustive-lower"):
        return (n * lo_const, 1, note)
    if kind in ("condensed-upper", "exhaustive-upper"):
        return (n * hi_const, 1, note)
    if kind == "free":
        if m ** n > ENUM_CAP:
            raise DepthTooLarge("free average needs full word enumeration")
        terms = [word_cost(Word(tup))
                 for tup in itertools.product(range(1, m + 1), repeat=n)]
        return (log_sum_exp(terms) - n * math.log(m), 1, note)
    raise AnalyticUnavailable("kind %r has no degenerate form" % kind)


def _box_tiling_count(px, py, inv2eps):
    """Boxes of half sides eps/px, eps/py tile the torus in this many."""
    return frac_ceil(px * inv2eps) * frac_ceil(py * inv2eps)


def _diag_class_iter(m, n):
    """Multiset classes of length-n words over m symbols as count vectors
    together with the multinomial size of each class."""
    def rec(sym, left):
        if sym == m - 1:
            yield (left,)
            return
        for c in range(left + 1):
            for rest in rec(sym + 1, left - c):
                yield (c,) + rest

    for counts in rec(0, n):
        size = math.factorial(n)
        for c in counts:
            size //= math.factorial(c)
        yield counts, size


def _class_products(entries, counts):
    px = 1
    py = 1
    for (a, b), c in zip(entries, counts):
        px *= a ** c
        py *= b ** c
    return px, py


def _star_area(entries, n, rho):
    """Exact area of the union of the per-word-class boxes at radius rho
    (a Fraction) for a diagonal family."""
    boxes = []
    for counts, _ in _diag_class_iter(len(entries), n):
        px, py = _class_products(entries, counts)
        boxes.append((rho / px, rho / py))
    boxes.sort()
    frontier = []
    best_y = Fraction(0)
    for x, y in reversed(boxes):
        if y > best_y:
            frontier.append((x, y))
            best_y = y
    frontier.reverse()
    area = Fraction(0)
    prev_x = Fraction(0)
    for x, y in frontier:
        xc = min(x, Fraction(1, 2))
        yc = min(y, Fraction(1, 2))
        if xc > prev_x:
            area += (xc - prev_x) * yc
            prev_x = xc
    return 4 * area


def _diag_weight_terms(system, entries, consts, n, with_counts, inv2eps):
    """Per-class log terms: log(class size) + [log count] + class weight."""
    terms = []
    for counts, size in _diag_class_iter(system.m, n):
        w = sum(consts[idx] * c for idx, c in enumerate(counts))
        t = math.log(size) + w
        if with_counts:
            px, py = _class_products(entries, counts)
            t += log_big(_box_tiling_count(px, py, inv2eps))
        terms.append(t)
    return terms


def diag_cover(system, phi, kind, n, epsilon, pool=None, rule=None):
    """(log cost, ball count, note) for one kind on a diagonal family
    with a constant-class potential."""
    entries = _diag_entries(system)
    consts = phi.constant_values
    if consts is None:
        raise AnalyticUnavailable("need a constant-class potential")
    if 2 * Fraction(epsilon) >= 1:
        return _degenerate_cover(kind, n, system.m, pool, rule,
                                 lambda j: consts[j - 1], min(consts),
                                 max(consts))
    inv2eps = 1 / (2 * Fraction(epsilon))
    if kind == "trajectory":
        word = rule.word_at(n)
        px, py = _axis_products(entries, word)
        count = _box_tiling_count(px, py, inv2eps)
        return (log_big(count) + _word_weight_log(consts, word), count,
                "word-box tiling")
    if kind == "amalgamated":
        best = None
        best_count = None
        for word in pool.words(n):
            px, py = _axis_products(entries, word)
            count = _box_tiling_count(px, py, inv2eps)
            cost = log_big(count) + _word_weight_log(consts, word)
            if best is None or cost < best:
                best = cost
                best_count = count
        return (best, best_count, "best pool word box tiling")
    if kind in ("condensed-lower", "condensed-upper"):
        lx = max(e[0] for e in entries)
        ly = max(e[1] for e in entries)
        count = _box_tiling_count(lx ** n, ly ** n, inv2eps)
        w = n * (min(consts) if kind == "condensed-lower" else max(consts))
        return (log_big(count) + w, count, "condensed box tiling")
    if kind in ("exhaustive-lower", "exhaustive-upper"):
        lx = min(e[0] for e in entries)
        ly = min(e[1] for e in entries)
        count = _box_tiling_count(lx ** n, ly ** n, inv2eps)
        w = n * (min(consts) if kind == "exhaustive-lower" else max(consts))
        return (log_big(count) + w, count,
                "exhaustive box tiling, unit sandwich constants")
    if kind == "free":
        terms = _diag_weight_terms(system, entries, consts, n, True, inv2eps)
        log_sum = log_sum_exp(terms)
        return (log_sum - n * math.log(system.m), None,
                "class-averaged word costs")
    raise AnalyticUnavailable("kind %r has no diagonal closed form" % kind)


def diag_packing(system, phi, kind, n, epsilon, pool=None, rule=None):
    """(log weighted packing sum, count, note).

    Counts come from the maximal-packing volume bound at doubled radius,
    except for the exhaustive family where the outer model boxes admit
    an explicit touching grid."""
    entries = _diag_entries(system)
    consts = phi.constant_values
    if consts is None:
        raise AnalyticUnavailable("need a constant-class potential")
    rho = 2 * Fraction(epsilon)
    if rho > Fraction(1, 2):
        return (n * min(consts), 1, "degenerate: 2eps exceeds the diameter")
    if not wrap_guard_ok(2.0 * epsilon, system.L_max):
        count = max(frac_floor(1 / rho) ** 2, 1)
        return (log_big(count) + n * min(consts), count,
                "coarse base-metric grid (wrap guard failed)")
    inv2eps = 1 / rho
    if kind == "trajectory":
        word = rule.word_at(n)
        px, py = _axis_products(entries, word)
        area = 4 * min(rho / px, Fraction(1, 2)) * min(rho / py, Fraction(1, 2))
        count = frac_ceil(1 / area)
        return (log_big(count) + _word_weight_log(consts, word), count,
                "volume bound, word box at 2eps")
    if kind == "amalgamated":
        count = frac_ceil(1 / _star_area(entries, n, rho))
        return (log_big(count) + n * min(consts), count,
                "volume bound, union of word boxes at 2eps")
    if kind in ("condensed-lower", "condensed-upper"):
        lx = max(e[0] for e in entries)
        ly = max(e[1] for e in entries)
        area = 4 * min(rho / lx ** n, Fraction(1, 2)) \
            * min(rho / ly ** n, Fraction(1, 2))
        count = frac_ceil(1 / area)
        w = n * (min(consts) if kind == "condensed-lower" else max(consts))
        return (log_big(count) + w, count, "volume bound, condensed box")
    if kind in ("exhaustive-lower", "exhaustive-upper"):
        lx = min(e[0] for e in entries)
        ly = min(e[1] for e in entries)
        count = max(frac_floor(lx ** n * inv2eps)
                    * frac_floor(ly ** n * inv2eps), 1)
        w = n * (min(consts) if kind == "exhaustive-lower" else max(consts))
        return (log_big(count) + w, count,
                "touching grid of outer exhaustive boxes")
    if kind == "free":
        # one set separated in the min-over-words metric works for every
        # word at once, so the star count carries the averaged weights
        count = frac_ceil(1 / _star_area(entries, n, rho))
        terms = _diag_weight_terms(system, entries, consts, n, False, None)
        log_mean = log_sum_exp(terms) - n * math.log(system.m)
        return (log_big(count) + log_mean, count,
                "star-grid packing, averaged weights")
    raise AnalyticUnavailable("kind %r has no diagonal packing form" % kind)


# ---------------------------------------------------------------------------
# polygon engine for general integer matrices


def prefix_matrices(system, word):
    mats = []
    cur = ((1, 0), (0, 1))
    for j in word:
        (a, b), (c, d) = system.generators[j - 1].matrix
        (p, q), (r, s) = cur
        cur = ((a * p + b * r, a * q + b * s),
               (c * p + d * r, c * q + d * s))
        mats.append(cur)
    return mats


def _clip_halfplane(poly, nx, ny, c):
    """Keep the part of poly with nx*x + ny*y <= c.  Exact: vertices are
    Fraction pairs and the normals are integers, so clipping at depths
    where the matrix entries dwarf float precision stays sound."""
    out = []
    k = len(poly)
    for i in range(k):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % k]
        v1 = nx * x1 + ny * y1 - c
        v2 = nx * x2 + ny * y2 - c
        if v1 <= 0:
            out.append((x1, y1))
        if (v1 < 0 < v2) or (v2 < 0 < v1):
            t = v1 / (v1 - v2)
            out.append((x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
    return out


def ball_polygon(system, word, epsilon):
    """No-wrap trajectory ball: displacements whose whole prefix orbit
    stays within epsilon in the sup metric.  Returns (vertices, area)
    as exact Fractions; the polygon always contains the origin."""
    e = Fraction(epsilon)
    poly = [(e, e), (-e, e), (-e, -e), (e, -e)]
    for mat in prefix_matrices(system, word):
        for a, b in mat:
            if a == 0 and b == 0:
                continue
            poly = _clip_halfplane(poly, a, b, e)
            if poly:
                poly = _clip_halfplane(poly, -a, -b, e)
            if not poly:
                return [], Fraction(0)
    area = Fraction(0)
    k = len(poly)
    for i in range(k):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % k]
        area += x1 * y2 - x2 * y1
    return poly, abs(area) / 2


def _point_in_ball_polygon(system, word, epsilon, pt):
    """Exact membership of a rational displacement in the no-wrap ball."""
    e = Fraction(epsilon)
    x, y = pt
    if abs(x) > e or abs(y) > e:
        return False
    for mat in prefix_matrices(system, word):
        for a, b in mat:
            if abs(a * x + b * y) > e:
                return False
    return True


def _round_frac(f):
    """Nearest integer to a Fraction, half away from the origin is fine."""
    return (2 * f.numerator + f.denominator) // (2 * f.denominator)


def polygon_cover_count(system, word, epsilon):
    """Number of trajectory balls along `word` needed to cover the torus.

    Tiles with the lattice spanned by the columns of W^-1 for an integer
    matrix W, which always contains Z^2, so the fundamental cells fall
    into exactly |det W| translate classes on the torus.  W approximates
    the inverse of the best inscribed diamond's edge matrix; the cell
    corners are certified inside the exact ball polygon, hence each cell
    sits inside the ball of its own lattice point and |det W| balls
    cover."""
    poly, area = ball_polygon(system, word, epsilon)
    if area <= 0:
        raise AnalyticUnavailable("ball polygon degenerate at this depth")
    best = None
    k = len(poly)
    for i in range(k):
        for j in range(i + 1, k):
            det = poly[i][0] * poly[j][1] - poly[i][1] * poly[j][0]
            if best is None or abs(det) > abs(best[0]):
                best = (det, poly[i], poly[j])
    if best is None or best[0] == 0:
        raise AnalyticUnavailable("no spanning vertex pair")
    _, p, q = best
    for shrink in (Fraction(97, 100), Fraction(9, 10), Fraction(3, 4),
                   Fraction(1, 2)):
        u = ((p[0] + q[0]) * shrink, (p[1] + q[1]) * shrink)
        v = ((p[0] - q[0]) * shrink, (p[1] - q[1]) * shrink)
        det = u[0] * v[1] - u[1] * v[0]
        if det == 0:
            continue
        wa = _round_frac(v[1] / det)
        wb = _round_frac(-v[0] / det)
        wc = _round_frac(-u[1] / det)
        wd = _round_frac(u[0] / det)
        dw = wa * wd - wb * wc
        if dw == 0:
            continue
        cu = (Fraction(wd, dw), Fraction(-wc, dw))
        cv = (Fraction(-wb, dw), Fraction(wa, dw))
        corners = (((cu[0] + cv[0]) / 2, (cu[1] + cv[1]) / 2),
                   ((cu[0] - cv[0]) / 2, (cu[1] - cv[1]) / 2))
        # corners span the centered fundamental cell; the other two are
        # their mirror images and the polygon is symmetric
        if all(_point_in_ball_polygon(system, word, epsilon, c)
               for c in corners):
            return abs(dw)
    raise AnalyticUnavailable("could not certify a lattice tiling")


def polygon_packing_count(system, word, epsilon, lipschitz):
    """Volume-bound packing count at separation 2 eps along one word."""
    rho = 2.0 * epsilon
    if rho > 0.5:
        return 1
    if not wrap_guard_ok(rho, lipschitz):
        return max(int(1.0 // rho) ** 2, 1)
    _, area = ball_polygon(system, word, rho)
    if area <= 0:
        raise AnalyticUnavailable("packing polygon degenerate")
    return max(frac_ceil(1 / area), 1)


def toral_cover(system, phi, kind, n, epsilon, pool=None, rule=None):
    """Polygon-engine covers for non-diagonal toral systems: trajectory
    and amalgamated kinds, plus free under the enumeration cap."""
    consts = phi.constant_values
    if consts is None:
        raise AnalyticUnavailable("need a constant-class potential")
    if 2 * Fraction(epsilon) >= 1:
        return _degenerate_cover(kind, n, system.m, pool, rule,
                                 lambda j: consts[j - 1], min(consts),
                                 max(consts))
    if kind == "trajectory":
        word = rule.word_at(n)
        count = polygon_cover_count(system, word, epsilon)
        return (log_big(count) + _word_weight_log(consts, word), count,
                "diamond tiling of the word ball")
    if kind == "amalgamated":
        best = None
        best_count = None
        for word in pool.words(n):
            try:
                count = polygon_cover_count(system, word, epsilon)
            except AnalyticUnavailable:
                continue
            cost = log_big(count) + _word_weight_log(consts, word)
            if best is None or cost < best:
                best = cost
                best_count = count
        if best is None:
            raise AnalyticUnavailable("no pool word admits a tiling")
        return (best, best_count, "best pool word diamond tiling")
    if kind == "free":
        if system.m ** n > ENUM_CAP:
            raise DepthTooLarge("free average needs full word enumeration")
        terms = []
        for tup in itertools.product(range(1, system.m + 1), repeat=n):
            word = Word(tup)
            count = polygon_cover_count(system, word, epsilon)
            terms.append(log_big(count) + _word_weight_log(consts, word))
        return (log_sum_exp(terms) - n * math.log(system.m), None,
                "averaged word tilings")
    raise AnalyticUnavailable("kind %r has no polygon closed form" % kind)


def toral_packing(system, phi, kind, n, epsilon, pool=None, rule=None):
    consts = phi.constant_values
    if consts is None:
        raise AnalyticUnavailable("need a constant-class potential")
    if kind == "trajectory":
        word = rule.word_at(n)
        count = polygon_packing_count(system, word, epsilon, system.L_max)
        return (log_big(count) + _word_weight_log(consts, word), count,
                "volume bound, word polygon at 2eps")
    if kind == "amalgamated":
        rho = 2.0 * epsilon
        if rho > 0.5:
            return (n * min(consts), 1, "degenerate: 2eps exceeds diameter")
        if not wrap_guard_ok(rho, system.L_max):
            count = max(int(1.0 // rho) ** 2, 1)
            return (math.log(count) + n * min(consts), count,
                    "coarse base-metric grid (wrap guard failed)")
        # points separated in the min-over-words metric carry 2eps balls
        # that are disjoint along each word, so a maximal packing covers
        # the torus with unions of the pool word balls; bound the union
        # area by the sum of the word areas
        total = Fraction(0)
        for word in pool.words(n):
            _, area = ball_polygon(system, word, rho)
            total += area
        if total <= 0:
            raise AnalyticUnavailable("all pool polygons degenerate")
        count = max(frac_ceil(1 / total), 1)
        return (log_big(count) + n * min(consts), count,
                "volume bound via summed word-ball areas")
    raise AnalyticUnavailable("kind %r has no polygon packing" % kind)


# ---------------------------------------------------------------------------
# interval branch systems


def _interval_weight_table(system, phi):
    """Per (generator, branch) multiplicative weights when every
    component is constant or an expansion component tied to this
    system's branches; a list over generators of per-branch tuples."""
    table = []
    for j, gen in enumerate(system.generators, start=1):
        kind, params, scale, offset = phi.components[j - 1]
        if kind == "zero" or scale == 0.0:
            table.append(tuple(math.exp(offset) for _ in gen.branches))
        elif kind == "expansion":
            table.append(tuple(math.exp(offset) * s ** (-scale)
                               for _, s in gen.branches))
        else:
            raise AnalyticUnavailable(
                "interval closed forms need constant or expansion parts")
    return table


def joint_core_blocks(system, depth, cap=4096):
    """Intervals of the depth-`depth` refinement of the set of points
    whose orbits along all words of that length stay inside the branch
    domains."""
    blocks = [(0.0, 1.0)]
    for _ in range(depth):
        per_gen = []
        for gen in system.generators:
            pulled = []
            for left, slope in gen.branches:
                width = 1.0 / slope
                for lo, hi in blocks:
                    a = left + lo * width
                    b = left + hi * width
                    if b - a > 1e-15:
                        pulled.append((a, b))
            pulled.sort()
            per_gen.append(pulled)
        new = per_gen[0]
        for pulled in per_gen[1:]:
            new = _intersect_interval_lists(new, pulled)
        if not new:
            return []
        blocks = new
        if len(blocks) > cap:
            break
    return blocks


def _intersect_interval_lists(xs, ys):
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if hi - lo > 1e-15:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def interval_cover_number(blocks, scale):
    """Minimal number of length-`scale` intervals covering the union of
    blocks (greedy left-to-right sweep, exact in one dimension)."""
    if not blocks:
        return 1
    count = 0
    i = 0
    cursor = None
    while i < len(blocks):
        lo, hi = blocks[i]
        start = lo if cursor is None or cursor < lo else cursor
        if start >= hi - 1e-15:
            i += 1
            continue
        count += 1
        cursor = start + scale
        if cursor >= hi - 1e-15:
            i += 1
    return max(count, 1)


def interval_packing_number(blocks, scale):
    """Greedy count of block left endpoints pairwise >= scale apart."""
    count = 0
    last = None
    for lo, _ in blocks:
        if last is None or lo - last >= scale - 1e-15:
            count += 1
            last = lo
    return max(count, 1)


def _single_core_numbers(system, epsilon, depth_cap=12):
    """Relative-scale cover and packing counts of the invariant core of
    a single-generator system, computed on an explicit refinement deep
    enough that blocks are narrower than the scale."""
    s_min = min(system.generators[0].slopes)
    depth = 1
    while s_min ** depth < 4.0 / (2.0 * epsilon) and depth < depth_cap:
        depth += 1
    blocks = joint_core_blocks(system, depth)
    if not blocks:
        raise AnalyticUnavailable("empty invariant core refinement")
    ncov = interval_cover_number(blocks, 2.0 * epsilon)
    npack = interval_packing_number(blocks, 2.0 * epsilon)
    return ncov, npack


def _relative_cover_number(system, epsilon):
    """Balls per cylinder: single-generator systems use the sharp core
    count, multi-generator systems cover the whole relative interval."""
    if system.m == 1:
        ncov, _ = _single_core_numbers(system, epsilon)
        return ncov
    return frac_ceil(1 / (2 * Fraction(epsilon)))


def _uniform_circle_slopes(system):
    slopes = []
    for gen in system.generators:
        if len(set(gen.slopes)) > 1:
            raise AnalyticUnavailable("mixed-slope circle maps not closed")
        slopes.append(gen.slopes[0])
    return slopes


def interval_cover(system, phi, kind, n, epsilon, pool=None, rule=None):
    """Cylinder-exact cover costs for interval systems: trajectory,
    amalgamated and free kinds."""
    table = _interval_weight_table(system, phi)
    diameter = Fraction(1, 2) if system.wrap else Fraction(1)
    if Fraction(epsilon) >= diameter:
        lo = [math.log(min(t)) for t in table]
        hi = [math.log(max(t)) for t in table]
        return _degenerate_cover(kind, n, system.m, pool, rule,
                                 lambda j: hi[j - 1], min(lo), max(hi))
    if system.wrap:
        slopes = _uniform_circle_slopes(system)
        inv2eps = 1 / (2 * Fraction(epsilon))

        def word_cost(word):
            prod = Fraction(1)
            weight = 0.0
            for j in word:
                prod *= Fraction(slopes[j - 1])
                weight += math.log(table[j - 1][0])
            count = frac_ceil(prod * inv2eps)
            return log_big(count) + weight, count
    else:
        ncov = _relative_cover_number(system, epsilon)

        def word_cost(word):
            log_cost = math.log(ncov)
            count = ncov
            for j in word:
                log_cost += math.log(sum(table[j - 1]))
                count *= system.generators[j - 1].branch_count
            return log_cost, count

    if kind == "trajectory":
        cost, count = word_cost(rule.word_at(n))
        return (cost, count, "cylinder cover")
    if kind == "amalgamated":
        best = None
        best_count = None
        for word in pool.words(n):
            cost, count = word_cost(word)
            if best is None or cost < best:
                best = cost
                best_count = count
        return (best, best_count, "best pool word cylinder cover")
    if kind == "free":
        if system.m ** n > ENUM_CAP:
            raise DepthTooLarge("free average needs full word enumeration")
        terms = []
        for tup in itertools.product(range(1, system.m + 1), repeat=n):
            cost, _ = word_cost(Word(tup))
            terms.append(cost)
        return (log_sum_exp(terms) - n * math.log(system.m), None,
                "averaged word cylinder covers")
    raise AnalyticUnavailable("kind %r has no interval closed form" % kind)


def interval_packing(system, phi, kind, n, epsilon, pool=None, rule=None):
    """Packing sums for interval systems with explicit separation
    certificates.

    Circle systems use touching grids guarded by the wrap rule.  Gapped
    systems use per-cylinder core points: same-branch orbits expand an
    initial gap past 2 eps by the final step, different-branch orbit
    points sit across a domain gap, so 2 eps must not exceed the gap."""
    table = _interval_weight_table(system, phi)
    if system.wrap:
        slopes = _uniform_circle_slopes(system)
        if not wrap_guard_ok(2.0 * epsilon, system.L_max):
            return (n * math.log(min(min(t) for t in table)), 1,
                    "wrap guard failed, trivial packing")
        if kind == "trajectory":
            word = rule.word_at(n)
            prod = Fraction(1)
            weight = 0.0
            for j in word:
                prod *= Fraction(slopes[j - 1])
                weight += math.log(min(table[j - 1]))
            count = max(frac_floor(prod / (4 * Fraction(epsilon))), 1)
            return (log_big(count) + weight, count, "circle grid packing")
        if kind == "amalgamated":
            prod = min(Fraction(s) for s in slopes) ** n
            count = max(frac_floor(prod / (4 * Fraction(epsilon))), 1)
            w = n * math.log(min(min(t) for t in table))
            return (log_big(count) + w, count,
                    "circle grid at the weakest expansion rate")
        raise AnalyticUnavailable("kind %r has no circle packing" % kind)
    if system.min_gap < 2.0 * epsilon - 1e-12:
        raise AnalyticUnavailable("2eps exceeds the branch gap")
    if kind == "trajectory":
        if system.m != 1:
            raise AnalyticUnavailable(
                "per-cylinder packing needs a single generator")
        _, npack = _single_core_numbers(system, epsilon)
        word = rule.word_at(n)
        count = npack
        weight = 0.0
        for j in word:
            count *= system.generators[j - 1].branch_count
            weight += math.log(min(table[j - 1]))
        return (math.log(count) + weight, count, "per-cylinder core packing")
    if kind == "amalgamated":
        if system.m == 1:
            _, npack = _single_core_numbers(system, epsilon)
            count = npack * system.generators[0].branch_count ** n
            w = n * math.log(min(table[0]))
            return (math.log(count) + w, count, "per-cylinder core packing")
        # multi-generator: pack the explicit joint-core blocks, keeping
        # only refinement depths whose adjacent block gaps still expand
        # past 2 eps within n same-branch steps
        s_min = min(min(g.slopes) for g in system.generators)
        need = 2.0 * epsilon / s_min ** n
        blocks = None
        for depth in range(2, 13):
            cand = joint_core_blocks(system, depth)
            if not cand:
                break
            if all(cand[i + 1][0] - cand[i][0] >= need
                   for i in range(len(cand) - 1)):
                blocks = cand
            else:
                break
        count = len(blocks) if blocks else 1
        w = n * math.log(min(min(t) for t in table))
        return (math.log(count) + w, count, "joint core block endpoints")
    raise AnalyticUnavailable("kind %r has no interval packing" % kind)
