"""Configuration-driven batch runner.

Commands: estimate, verify, dimension, localent, sweep.  Configs are
flat key=value text with optional [section] headers kept purely for
reading comfort; keys are global and duplicates are rejected with their
line number.  Output is CSV or JSON, written byte-identically for a
fixed seed.  Exit codes: 0 pass, 2 check failure, 3 infeasible or
under-resolved, 4 parse error.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .dimension import bowen_root
from .errors import AnalyticUnavailable, DepthTooLarge, InfeasibleCover, \
    ParseError, UnderResolved
from .lift import check_lift_inequalities
from .localent import ProductMeasureModel, local_amalgamated_entropy, \
    marginal_bound_check, parse_measure, sample_points
from .potentials import parse_potential, random_potential
from .pressure import KINDS, estimate_pressure, extrapolate, \
    lipschitz_check, sweep_estimates, trajectory_shift_check, \
    verify_inequality_chain
from .systems import parse_system
from .words import WordPool, constant_rule, explicit_rule, periodic_rule

CSV_HEADER = "kind,n,epsilon,lower,upper,cover_size,method,seed"
SCHEMA_VERSION = 1

__all__ = ["main", "load_config"]


# ---------------------------------------------------------------------------
# config parsing


def load_config(path):
    """Flat key=value entries with line numbers; sections are cosmetic."""
    entries = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ParseError("cannot read config: %s" % exc)
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#") or text.startswith(";"):
                continue
            if text.startswith("["):
                if not text.endswith("]"):
                    raise ParseError("unterminated section header", lineno)
                continue
            if "=" not in text:
                raise ParseError("expected key=value, got %r" % text,
                                 lineno)
            key, _, value = text.partition("=")
            key = key.strip()
            value = value.strip()
            if not key:
                raise ParseError("empty key", lineno)
            if key in entries:
                raise ParseError("duplicate key %r" % key, lineno)
            entries[key] = (value, lineno)
    return entries


def _get(entries, key, default=None):
    if key in entries:
        return entries[key]
    return (default, None)


def _require(entries, key):
    if key not in entries:
        raise ParseError("missing required key %r" % key)
    return entries[key]


def _parse_float(value, line, key):
    try:
        return float(value)
    except ValueError:
        raise ParseError("key %r needs a number, got %r" % (key, value),
                         line)


def _parse_int(value, line, key):
    try:
        return int(value)
    except ValueError:
        raise ParseError("key %r needs an integer, got %r" % (key, value),
                         line)


def _parse_list(value, line, key, conv):
    items = [v.strip() for v in value.split(",") if v.strip() != ""]
    if not items:
        raise ParseError("key %r needs a nonempty list" % key, line)
    try:
        return [conv(v) for v in items]
    except ValueError:
        raise ParseError("bad list entry in key %r" % key, line)


def _parse_kinds(value, line):
    if value.strip() == "all":
        return list(KINDS)
    kinds = _parse_list(value, line, "kinds", str)
    for k in kinds:
        if k not in KINDS:
            raise ParseError("unknown kind %r" % k, line)
    return kinds


def _parse_rule(value, line):
    value = value.strip()
    if value.startswith("constant:"):
        return constant_rule(_parse_int(value[len("constant:"):], line,
                                        "rule"))
    if value.startswith("periodic:"):
        return periodic_rule(tuple(_parse_list(value[len("periodic:"):],
                                               line, "rule", int)))
    if value.startswith("explicit:"):
        return explicit_rule(tuple(_parse_list(value[len("explicit:"):],
                                               line, "rule", int)))
    raise ParseError("rules are constant:j | periodic:... | explicit:...",
                     line)


def _parse_n_range(value, line):
    value = value.strip()
    if ".." in value:
        lo_text, _, hi_text = value.partition("..")
        lo = _parse_int(lo_text, line, "n_range")
        hi = _parse_int(hi_text, line, "n_range")
        if hi < lo:
            raise ParseError("empty depth range", line)
        return list(range(lo, hi + 1))
    return _parse_list(value, line, "n_range", int)


def _parse_points(value, line, system):
    groups = [g.strip() for g in value.split(";") if g.strip() != ""]
    if not groups:
        raise ParseError("empty point list", line)
    points = []
    for g in groups:
        coords = _parse_list(g, line, "points", float)
        if system.is_toral:
            if len(coords) != 2:
                raise ParseError("torus points need two coordinates", line)
            points.append((coords[0], coords[1]))
        else:
            if len(coords) != 1:
                raise ParseError("interval points need one coordinate",
                                 line)
            points.append(coords[0])
    return points


# ---------------------------------------------------------------------------
# shared setup


class RunSetup:
    """Everything the commands share, resolved from config plus flags."""

    def __init__(self, entries, args):
        spec, line = _require(entries, "system")
        self.system = parse_system(spec, line=line)
        spec, line = _get(entries, "potential", "zero")
        self.phi = parse_potential(spec, self.system.m, line=line)
        if args.seed is not None:
            self.seed = args.seed
        else:
            value, line = _get(entries, "seed", "0")
            self.seed = _parse_int(value, line, "seed")
        value, line = _get(entries, "pool_seed", str(self.seed))
        pool_seed = _parse_int(value, line, "pool_seed")
        value, line = _get(entries, "pool_random", "32")
        pool_random = _parse_int(value, line, "pool_random")
        self.pool = WordPool(self.system.m, seed=pool_seed,
                             random_count=pool_random)
        self.rule = None
        if "rule" in entries:
            value, line = entries["rule"]
            self.rule = _parse_rule(value, line)
        if args.tolerance is not None:
            self.tolerance = args.tolerance
        else:
            value, line = _get(entries, "tolerance", "1e-9")
            self.tolerance = _parse_float(value, line, "tolerance")
        if args.threads is not None:
            self.threads = args.threads
        else:
            env = os.environ.get("PRESSLAB_THREADS")
            if env is not None:
                try:
                    self.threads = int(env)
                except ValueError:
                    raise ParseError("PRESSLAB_THREADS must be an integer")
            else:
                value, line = _get(entries, "threads", "")
                if value:
                    self.threads = _parse_int(value, line, "threads")
                else:
                    self.threads = os.cpu_count() or 1
        self.threads = max(1, self.threads)
        self.out = args.out if args.out is not None \
            else _get(entries, "out")[0]
        if args.format is not None:
            self.format = args.format
        else:
            value, line = _get(entries, "format", "csv")
            if value not in ("csv", "json"):
                raise ParseError("format must be csv or json", line)
            self.format = value


def _default_rule(setup):
    if setup.rule is not None:
        return setup.rule
    return periodic_rule(tuple(range(1, setup.system.m + 1)))


# ---------------------------------------------------------------------------
# output


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write(setup, text):
    if setup.out:
        with open(setup.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(setup, rows, command):
    if setup.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "rows": rows}
        _write(setup, json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return
    cols = CSV_HEADER.split(",")
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in cols))
    _write(setup, "\n".join(lines) + "\n")


def _emit_table(setup, header, rows, command):
    if setup.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "rows": [dict(zip(header, row)) for row in rows]}
        _write(setup, json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write(setup, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# commands


def _estimate_jobs(entries, setup):
    value, line = _require(entries, "kinds")
    kinds = _parse_kinds(value, line)
    if "trajectory" in kinds and setup.rule is None:
        raise ParseError("trajectory estimates need a rule key", line)
    value, line = _require(entries, "depths")
    depths = _parse_list(value, line, "depths", int)
    value, line = _require(entries, "epsilons")
    epsilons = _parse_list(value, line, "epsilons", float)
    return kinds, depths, epsilons


def cmd_estimate(entries, setup):
    kinds, depths, epsilons = _estimate_jobs(entries, setup)
    jobs = [(k, n, eps) for k in kinds for eps in epsilons for n in depths]

    def run(job):
        kind, n, eps = job
        return estimate_pressure(setup.system, setup.phi, kind, n, eps,
                                 pool=setup.pool, rule=setup.rule,
                                 seed=setup.seed)

    if setup.threads > 1:
        with ThreadPoolExecutor(max_workers=setup.threads) as ex:
            ests = list(ex.map(run, jobs))
    else:
        ests = [run(j) for j in jobs]
    _emit_rows(setup, [e.as_row() for e in ests], "estimate")
    return 0


def cmd_sweep(entries, setup):
    kinds, depths, epsilons = _estimate_jobs(entries, setup)
    rows = []
    for kind in kinds:
        ests = sweep_estimates(setup.system, setup.phi, kind, depths,
                               epsilons, pool=setup.pool, rule=setup.rule,
                               seed=setup.seed, threads=setup.threads)
        rows.extend(e.as_row() for e in ests)
        tail = extrapolate(ests)
        rows.append({"kind": kind + ":extrapolated", "n": max(depths),
                     "epsilon": min(epsilons),
                     "lower": tail.value - tail.error_bar,
                     "upper": tail.value + tail.error_bar,
                     "cover_size": 0, "method": "Extrapolated",
                     "seed": setup.seed})
    _emit_rows(setup, rows, "sweep")
    return 0


def _verify_rows(entries, setup):
    value, line = _get(entries, "checks", "chain,shift,lipschitz,lift")
    names = _parse_list(value, line, "checks", str)
    value, line = _get(entries, "n", "3")
    n = _parse_int(value, line, "n")
    value, line = _get(entries, "epsilon", "0.125")
    epsilon = _parse_float(value, line, "epsilon")
    rows = []

    def add(name, ok, detail):
        rows.append((name, "yes" if ok else "no", detail))

    for name in names:
        if name == "chain":
            report = verify_inequality_chain(
                setup.system, setup.phi, n, epsilon, rule=setup.rule,
                seed=setup.seed, tolerance=setup.tolerance)
            for c in report.checks:
                add("chain:" + c.name, c.ok,
                    "lhs=%s rhs=%s" % (_fmt(c.lhs), _fmt(c.rhs)))
        elif name == "shift":
            check = trajectory_shift_check(
                setup.system, setup.phi, _default_rule(setup), n, epsilon,
                seed=setup.seed)
            add("shift", check.ok, "difference=%s bound=%s"
                % (_fmt(check.difference), _fmt(check.bound)))
        elif name == "lipschitz":
            psi = random_potential(setup.system.m, seed=setup.seed + 1)
            check = lipschitz_check(setup.system, setup.phi, psi,
                                    "amalgamated", n, epsilon,
                                    pool=setup.pool, seed=setup.seed)
            add("lipschitz", check.ok, "difference=%s bound=%s"
                % (_fmt(check.difference), _fmt(check.bound)))
        elif name == "lift":
            report = check_lift_inequalities(setup.system, setup.phi, n,
                                             epsilon, pool=setup.pool,
                                             seed=setup.seed,
                                             tolerance=setup.tolerance)
            for c in report.checks:
                add("lift:" + c.label, c.ok,
                    "lhs=%s rhs=%s" % (_fmt(c.lhs), _fmt(c.rhs)))
        elif name == "marginal":
            value, mline = _get(entries, "measure", "")
            if value:
                measure = parse_measure(value, setup.system, line=mline)
            else:
                weights = tuple([1.0 / setup.system.m] * setup.system.m)
                measure = ProductMeasureModel(
                    weights, parse_measure("lebesgue", setup.system))
            if not isinstance(measure, ProductMeasureModel):
                raise ParseError("marginal check needs a product measure",
                                 mline)
            pts = sample_points(measure.base, setup.system, 10,
                                seed=setup.seed)
            # the finite-scale tolerance only absorbs the 1/n tail when
            # the range spans at least a doubling of the depth
            lo_depth = max(2, n)
            report = marginal_bound_check(
                measure, setup.system, pts, epsilon,
                list(range(lo_depth, 2 * lo_depth + 3)), pool=setup.pool,
                seed=setup.seed)
            for c in report.checks:
                add("marginal", c.ok, "h_plus=%s h_lower=%s bound=%s"
                    % (_fmt(c.h_plus), _fmt(c.h_lower),
                       _fmt(report.bound)))
        elif name == "separation":
            spec, sline = _require(entries, "system_b")
            other = parse_system(spec, line=sline)
            mine = estimate_pressure(setup.system, setup.phi,
                                     "exhaustive-upper", n, epsilon,
                                     pool=setup.pool, seed=setup.seed)
            mine_lo = estimate_pressure(setup.system, setup.phi,
                                        "exhaustive-lower", n, epsilon,
                                        pool=setup.pool, seed=setup.seed)
            phi_b = setup.phi if other.m == setup.system.m \
                else parse_potential("zero", other.m)
            theirs = estimate_pressure(other, phi_b, "exhaustive-upper", n,
                                       epsilon, pool=setup.pool,
                                       seed=setup.seed)
            theirs_lo = estimate_pressure(other, phi_b, "exhaustive-lower",
                                          n, epsilon, pool=setup.pool,
                                          seed=setup.seed)
            a = (mine_lo.lower, mine.upper)
            b = (theirs_lo.lower, theirs.upper)
            gap = max(b[0] - a[1], a[0] - b[1])
            distinguishable = gap >= 0.15
            add("separation", distinguishable,
                "distinguishable: %s (gap=%s)"
                % ("yes" if distinguishable else "no", _fmt(gap)))
        else:
            raise ParseError("unknown check %r" % name, line)
    return rows


def cmd_verify(entries, setup):
    rows = _verify_rows(entries, setup)
    _emit_table(setup, ("check", "ok", "detail"), rows, "verify")
    return 0 if all(ok == "yes" for _, ok, _ in rows) else 2


def cmd_dimension(entries, setup):
    value, line = _get(entries, "n", "96")
    n = _parse_int(value, line, "n")
    value, line = _get(entries, "epsilon", "0.125")
    epsilon = _parse_float(value, line, "epsilon")
    value, line = _get(entries, "bracket", "0,1")
    bracket = _parse_list(value, line, "bracket", float)
    if len(bracket) != 2:
        raise ParseError("bracket needs two endpoints", line)
    result = bowen_root(setup.system, n, epsilon, tuple(bracket),
                        pool=setup.pool, seed=setup.seed)
    doc = {"schema_version": SCHEMA_VERSION, "command": "dimension",
           "t_uA": result.t_uA,
           "per_map_roots": list(result.per_map_roots),
           "bracket": list(result.bracket),
           "iterations": result.iterations}
    _write(setup, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_localent(entries, setup):
    value, line = _get(entries, "epsilon", "0.125")
    epsilon = _parse_float(value, line, "epsilon")
    value, line = _get(entries, "n_range", "4..8")
    n_range = _parse_n_range(value, line)
    value, line = _get(entries, "resolution", "64")
    resolution = _parse_int(value, line, "resolution")
    value, line = _get(entries, "measure", "lebesgue")
    measure = parse_measure(value, setup.system, line=line,
                            resolution=resolution)
    base = measure.base if isinstance(measure, ProductMeasureModel) \
        else measure
    value, line = _get(entries, "points", "sample:10")
    if value.startswith("sample:"):
        count = _parse_int(value[len("sample:"):], line, "points")
        pts = sample_points(base, setup.system, count, seed=setup.seed)
    else:
        pts = _parse_points(value, line, setup.system)

    def coords(x):
        return (x[0], x[1]) if isinstance(x, tuple) else (x, "")

    if isinstance(measure, ProductMeasureModel):
        report = marginal_bound_check(measure, setup.system, pts, epsilon,
                                      n_range, pool=setup.pool,
                                      seed=setup.seed)
        rows = []
        for c in report.checks:
            x, y = coords(c.x)
            rows.append((x, y, c.h_plus, c.h_lower, report.bound,
                         c.tolerance, "yes" if c.ok else "no"))
        _emit_table(setup, ("x", "y", "h_plus", "h_lower", "bound",
                            "tolerance", "ok"), rows, "localent")
        return 0 if report.all_ok else 2

    def run(x):
        return local_amalgamated_entropy(measure, setup.system, x, epsilon,
                                         n_range, pool=setup.pool,
                                         seed=setup.seed)

    if setup.threads > 1:
        with ThreadPoolExecutor(max_workers=setup.threads) as ex:
            ests = list(ex.map(run, pts))
    else:
        ests = [run(x) for x in pts]
    rows = []
    for est in ests:
        x, y = coords(est.x)
        rows.append((x, y, est.h_exhaustive_local, est.h_lower_local,
                     est.h_upper_local, est.epsilon, setup.seed))
    _emit_table(setup, ("x", "y", "h_exhaustive", "h_lower", "h_upper",
                        "epsilon", "seed"), rows, "localent")
    return 0


COMMANDS = {
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "dimension": cmd_dimension,
    "localent": cmd_localent,
    "sweep": cmd_sweep,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="presslab",
        description="pressure and entropy estimation for finitely "
                    "generated map families")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in sorted(COMMANDS):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--threads", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--tolerance", type=float)
    args = parser.parse_args(argv)
    try:
        entries = load_config(args.config)
        setup = RunSetup(entries, args)
        return COMMANDS[args.command](entries, setup)
    except ParseError as exc:
        sys.stderr.write("parse error: %s\n" % exc)
        return 4
    except (InfeasibleCover, UnderResolved, DepthTooLarge,
            AnalyticUnavailable) as exc:
        sys.stderr.write("infeasible: %s\n" % exc)
        return 3
    except ValueError as exc:
        sys.stderr.write("invalid input: %s\n" % exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
