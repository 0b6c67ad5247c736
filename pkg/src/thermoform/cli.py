"""Command-line front end.

Every subcommand reads one matrix tuple (from a JSON file via --input,
or a built-in via --builtin), runs a library computation, prints a run
report to standard output, and optionally writes report.json plus the
relevant CSV tables into --out.

Exit codes: 0 success, 2 input or usage error, 3 numeric or degeneracy
failure, 4 budget exceeded, 5 acceptance failure in reproduce.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__, classify, kusuoka, pressure, registry, structure
from .core import MatrixTuple
from .errors import (BudgetExceededError, DegenerateEigenmatrixError,
                     NoConnectingWordError, NotConvergedError,
                     ThermoformError, TupleFormatError,
                     UnsupportedPrecisionError)
from .reporting import (CORRELATION_COLUMNS, CYLINDER_COLUMNS,
                        ENTROPY_COLUMNS, SERIES_COLUMNS, RunReport, jsonable,
                        write_csv, write_report)
from .tuplefile import load_tuple, parse_word, tuple_digest

BUDGET_ENV = "THERMOFORM_BUDGET_CAP"


def _positive_float(text):
    try:
        value = float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("%r is not a number" % text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive, got %r" % text)
    return value


def _radius_exponent(text):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return _positive_float(text)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("%r is not an integer" % text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1, got %d" % value)
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="PATH",
                        help="JSON tuple file (see README for the format)")
    source.add_argument("--builtin", metavar="NAME",
                        help="built-in tuple: %s; parametrized ones accept "
                             "arguments, e.g. alpha(3/5,4/5) or eps(1/4)"
                             % ", ".join(registry.builtin_names()))
    common.add_argument("--tol", type=_positive_float, default=1e-12,
                        help="solver tolerance (default 1e-12)")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="cap BLAS worker threads; results do not "
                             "depend on this (default: machine parallelism)")
    common.add_argument("--out", metavar="DIR", default=None,
                        help="write report.json and CSV tables here")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="stdout format; csv prints the primary table")

    parser = argparse.ArgumentParser(
        prog="thermoform",
        description="Pressure, joint spectral radii, equilibrium measures, "
                    "and mixing diagnostics for finite tuples of square "
                    "matrices.")
    parser.add_argument("--version", action="version",
                        version="thermoform " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", parents=[common],
                       help="irreducibility evidence, block form, strong "
                            "irreducibility and zero-product scans")
    p.add_argument("--N", type=_positive_int, default=3,
                   help="product-tuple scan depth (default 3)")

    p = sub.add_parser("pressure", parents=[common],
                       help="certified pressure bracket at exponent s")
    p.add_argument("--s", type=_positive_float, required=True,
                   help="exponent s > 0")
    p.add_argument("--N", type=_positive_int, default=8,
                   help="enumeration depth (default 8)")

    p = sub.add_parser("radius", parents=[common],
                       help="p-radius bracket, or the joint spectral radius "
                            "for --p inf")
    p.add_argument("--p", type=_radius_exponent, required=True,
                   help="exponent p > 0, or 'inf'")
    p.add_argument("--N", type=_positive_int, default=8,
                   help="enumeration depth (default 8)")

    p = sub.add_parser("kusuoka", parents=[common],
                       help="equilibrium measure at s = 2: eigendata, "
                            "cylinder table, Gibbs bounds, entropy and "
                            "Lyapunov series")
    p.add_argument("--n-max", type=_positive_int, default=6,
                   help="cylinder depth (default 6)")

    p = sub.add_parser("classify", parents=[common],
                       help="full classification report")
    p.add_argument("--N", type=_positive_int, default=3,
                   help="word budget for semigroup checks (default 3)")
    p.add_argument("--n-max", type=_positive_int, default=6,
                   help="cylinder depth for measure checks (default 6)")

    p = sub.add_parser("correlate", parents=[common],
                       help="two-cylinder correlations over a range of gaps")
    p.add_argument("--first", required=True, metavar="WORD",
                   help="first cylinder word, e.g. 1 or 1,2")
    p.add_argument("--second", required=True, metavar="WORD",
                   help="second cylinder word")
    p.add_argument("--n-max", type=_positive_int, default=12,
                   help="largest gap (default 12)")

    p = sub.add_parser("reproduce",
                       help="regenerate all built-in example artifacts and "
                            "check the acceptance criteria")
    p.add_argument("--out", metavar="DIR", default="reproduce-out",
                   help="bundle directory (default reproduce-out)")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="cap BLAS worker threads")

    return parser


def _budget_from_env():
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise TupleFormatError(
            "%s must be an integer, got %r" % (BUDGET_ENV, raw))
    if value < 1:
        raise TupleFormatError("%s must be >= 1" % BUDGET_ENV)
    return value


def _load_source(args):
    if args.input is not None:
        t = load_tuple(args.input)
        label = t.label or os.path.basename(args.input)
    else:
        t = registry.get_builtin(args.builtin)
        label = "builtin:" + args.builtin
    return t, label


def _tuple_summary(t: MatrixTuple):
    return {"dimension": t.dim, "symbols": t.size, "scalar_policy": t.policy,
            "label": t.label}


def _subspace_payload(sub):
    if sub is None:
        return None
    return {"dimension": sub.dim, "basis": jsonable(sub.basis)}


def run_inspect(args, t, budget):
    scan_budget = structure.SearchBudget() if budget is None else \
        structure.SearchBudget(scan_product_cap=budget)
    verdict = structure.find_invariant_subspace(t, budget=scan_budget)
    strong = structure.strong_irreducibility_scan(t, budget=scan_budget)
    form = structure.block_triangularize(t, budget=scan_budget)
    zero = structure.zero_product_search(t, depth=2 * t.dim, budget=budget)
    obstruction = structure.mixing_obstruction_scan(t, args.N,
                                                    budget=scan_budget)
    results = {
        "tuple": _tuple_summary(t),
        "irreducibility": {
            "verdict": "witness-found" if verdict.reducible
                       else "no-witness-found",
            "witness": _subspace_payload(verdict.witness),
            "searched": verdict.searched,
        },
        "strong_irreducibility": {
            "verdict": "finite-union-found" if strong.obstruction_found
                       else "no-witness-found",
            "union": [_subspace_payload(s) for s in strong.union]
                     if strong.union else None,
            "searched": strong.searched,
        },
        "block_form": {
            "block_dimensions": [b.dim for b in form.blocks],
            "basis_change": jsonable(form.basis_change),
        },
        "zero_product": {"word": list(zero) if zero else None,
                         "searched_depth": 2 * t.dim},
        "mixing_obstruction": None if obstruction is None else {
            "level": obstruction.level,
            "witness": _subspace_payload(obstruction.witness),
        },
        "witnesses": {
            "invariant_subspace": _subspace_payload(verdict.witness),
            "zero_product_word": list(zero) if zero else None,
            "mixing_obstruction_level":
                None if obstruction is None else obstruction.level,
        },
    }
    return results, {}


def run_pressure(args, t, budget):
    bracket = pressure.pressure_bracket(t, args.s, args.N, budget=budget)
    rows = list(bracket.series.rows())
    results = {
        "tuple": _tuple_summary(t),
        "exponent": args.s,
        "upper": bracket.upper,
        "periodic_lower": bracket.periodic_lower,
        "width": bracket.width(),
        "exact": bracket.exact,
        "exact_method": None if bracket.exact is None else
            ("scalar closed form" if t.dim == 1 else "exact (even s)"),
        "series": rows,
    }
    return results, {"series.csv": (SERIES_COLUMNS, rows)}


def run_radius(args, t, budget):
    if math.isinf(args.p):
        bracket = pressure.jsr_bracket(t, args.N, budget=budget)
    else:
        bracket = pressure.p_radius(t, args.p, args.N, budget=budget)
    results = {
        "tuple": _tuple_summary(t),
        "exponent": None if math.isinf(args.p) else args.p,
        "lower": bracket.lower,
        "upper": bracket.upper,
        "exact": bracket.exact,
        "series": bracket.series,
    }
    return results, {"series.csv": (SERIES_COLUMNS, bracket.series)}


def _cylinder_rows(table):
    rows = []
    for n in range(1, table.n_max + 1):
        for word, value in table.words_and_measures(n):
            rows.append({"n": n, "word": ",".join(str(s) for s in word),
                         "measure": value})
    return rows


def run_kusuoka(args, t, budget):
    kd = kusuoka.kusuoka_measure(t, tol=args.tol)
    table = kusuoka.cylinder_table(kd, args.n_max, budget=budget)
    consistency = kusuoka.consistency_check(kd, args.n_max, budget=budget)
    gibbs = kusuoka.gibbs_verify(kd, args.n_max, budget=budget)
    entropy = kusuoka.entropy_estimate(kd, args.n_max, budget=budget)
    top = kusuoka.lyapunov_top(kd, args.n_max, budget=budget)
    spectrum = kusuoka.lyapunov_spectrum(kd, args.n_max, budget=budget)
    cyl_rows = _cylinder_rows(table)
    entropy_rows = [
        {"n": n + 1, "block_entropy": entropy.block[n],
         "per_symbol_entropy": entropy.per_symbol[n],
         "conditional_entropy": entropy.conditional[n],
         "variational_gap": entropy.variational[n],
         "lyapunov_top": top[n]}
        for n in range(args.n_max)]
    results = {
        "tuple": _tuple_summary(t),
        "pressure": kd.pressure_value,
        "growth": kd.growth,
        "pullback_eigenmatrix": jsonable(kd.pullback_eigenmatrix),
        "pushforward_eigenmatrix": jsonable(kd.pushforward_eigenmatrix),
        "residuals": kd.residuals,
        "consistency": consistency,
        "gibbs": {
            "c_lower": gibbs.c_lower, "c_upper": gibbs.c_upper,
            "min_ratio": gibbs.min_ratio, "max_ratio": gibbs.max_ratio,
            "argmin_word": list(gibbs.argmin_word),
            "argmax_word": list(gibbs.argmax_word),
            "ok": gibbs.ok,
        },
        "entropy_series": entropy_rows,
        "lyapunov_spectrum": jsonable(spectrum),
        "witnesses": {
            "gibbs_argmin_word": list(gibbs.argmin_word),
            "gibbs_argmax_word": list(gibbs.argmax_word),
        },
    }
    tables = {"cylinders.csv": (CYLINDER_COLUMNS, cyl_rows),
              "series.csv": (ENTROPY_COLUMNS, entropy_rows)}
    return results, tables


def run_classify(args, t, budget):
    report = classify.classification_report(
        t, word_budget=args.N, table_depth=args.n_max, tol=args.tol,
        budget=budget)
    witnesses = {"zero_product_word":
                 list(report.zero_word) if report.zero_word else None}
    if report.bernoulli is not None and report.bernoulli.counterexample:
        pair = report.bernoulli.counterexample
        witnesses["multiplicativity_counterexample"] = {
            "first": list(pair.first), "second": list(pair.second)}
    si = report.s_independence
    if si is not None and si.exponent_rate is None and si.low_witness:
        witnesses["rate_mismatch_words"] = {
            "low": list(si.low_witness), "high": list(si.high_witness)}
    return {"tuple": _tuple_summary(t),
            "classification": jsonable(report),
            "witnesses": witnesses}, {}


def run_correlate(args, t, budget):
    first = parse_word(args.first)
    second = parse_word(args.second)
    if not first or not second:
        raise TupleFormatError("correlation words must be nonempty")
    for s in first + second:
        t.check_symbol(s)
    if args.n_max < len(first):
        raise TupleFormatError(
            "--n-max must be at least the first word's length %d"
            % len(first))
    kd = kusuoka.kusuoka_measure(t, tol=args.tol)
    base = (kusuoka.cylinder_measure(kd, first)
            * kusuoka.cylinder_measure(kd, second))
    rows = []
    for gap in range(len(first), args.n_max + 1):
        value = kusuoka.correlation(kd, first, second, gap, budget=budget)
        rows.append({"gap": gap, "correlation": value,
                     "product_of_measures": base,
                     "difference": value - base})
    diffs = [abs(r["difference"]) for r in rows]
    results = {
        "tuple": _tuple_summary(t),
        "first": list(first),
        "second": list(second),
        "product_of_measures": base,
        "series": rows,
        "max_abs_difference": max(diffs),
        "cesaro_abs_difference": abs(
            sum(r["difference"] for r in rows) / len(rows)),
    }
    return results, {"series.csv": (CORRELATION_COLUMNS, rows)}


HANDLERS = {
    "inspect": run_inspect,
    "pressure": run_pressure,
    "radius": run_radius,
    "kusuoka": run_kusuoka,
    "classify": run_classify,
    "correlate": run_correlate,
}

# subcommand -> CSV table printed by --format csv
PRIMARY_TABLE = {
    "pressure": "series.csv",
    "radius": "series.csv",
    "kusuoka": "cylinders.csv",
    "correlate": "series.csv",
}


def _parameters(args):
    skip = {"command", "input", "builtin", "out", "format"}
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and v is not None}


def _emit(args, report: RunReport, tables):
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        write_report(report, os.path.join(args.out, "report.json"))
        for name, (columns, rows) in tables.items():
            write_csv(os.path.join(args.out, name), columns, rows)
    if args.format == "csv":
        name = PRIMARY_TABLE.get(args.command)
        if name is None or name not in tables:
            raise TupleFormatError(
                "subcommand %r has no tabular output; use --format json"
                % args.command)
        import csv as _csv
        columns, rows = tables[name]
        writer = _csv.DictWriter(sys.stdout, fieldnames=columns,
                                 lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k) for k in columns})
    else:
        json.dump(report.payload(), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def _run(args):
    budget = _budget_from_env()
    if args.command == "reproduce":
        from . import reproduce
        results, bundle_ok = reproduce.write_bundle(args.out, budget=budget)
        for line in reproduce.summary_lines(results):
            print(line)
        if not bundle_ok:
            return 5
        return 0

    t, label = _load_source(args)
    started = time.perf_counter()
    results, tables = HANDLERS[args.command](args, t, budget)
    elapsed = time.perf_counter() - started
    report = RunReport(
        operation=args.command,
        input_label=label,
        input_digest=tuple_digest(t),
        parameters=_parameters(args),
        results=results,
        witnesses=results.pop("witnesses", {}),
        budgets={"product_cap": budget, "env": BUDGET_ENV},
        timings={"seconds": elapsed},
        tool_version=__version__,
    )
    _emit(args, report, tables)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "threads", None) is not None:
            with threadpool_limits(limits=args.threads):
                return _run(args)
        return _run(args)
    except TupleFormatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (DegenerateEigenmatrixError, NotConvergedError,
            UnsupportedPrecisionError, NoConnectingWordError,
            np.linalg.LinAlgError) as exc:
        print("numeric failure: %s" % exc, file=sys.stderr)
        return 3
    except BudgetExceededError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 4
    except ThermoformError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
