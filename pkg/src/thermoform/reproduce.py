"""Built-in example artifacts and the acceptance checklist.

write_bundle regenerates, for every built-in tuple, the full report
bundle (tuple file, classification report, pressure series, cylinder
table) and then runs twelve acceptance checks that pin the package's
numerical claims: exact pressure values, closed-form cylinder
probabilities against an independent block-construction oracle, Gibbs
envelopes, non-mixing evidence, zero-entropy structure, radius
brackets, the multiplicativity counterexample, conformal round trips,
rate independence, the correlation oracle, and eigensolver quality.

The checks are deliberately reimplemented from first principles where
possible (independent oracles, brute-force sums) rather than by calling
the code under test twice.
"""

from __future__ import annotations

import math
import os
import re
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from threadpoolctl import threadpool_limits

from . import classify, kusuoka, pressure, registry, structure
from .core import DOUBLE, make_tuple
from .errors import DegenerateEigenmatrixError, ThermoformError
from .reporting import (ACCEPTANCE_COLUMNS, CYLINDER_COLUMNS, SERIES_COLUMNS,
                        RunReport, jsonable, write_csv, write_report)
from .tuplefile import save_tuple, tuple_digest

LOG5 = math.log(5.0)

#: built-ins regenerated by the bundle, in presentation order
BUNDLE_BUILTINS = ("notmix2", "nilpotent2", "alpha(3/5,4/5)", "rankone4",
                   "eps(0)", "eps(1/4)", "eps(1)")

#: the subset with positive definite equilibrium data (eps(0) = notmix2)
IRREDUCIBLE_BUILTINS = ("notmix2", "nilpotent2", "alpha(3/5,4/5)", "rankone4",
                        "eps(1/4)", "eps(1)")


@dataclass
class CriterionResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _bounds(label, value, target, tol):
    ok = abs(value - target) <= tol
    return ok, "%s=%.12g (target %.12g, tol %g)" % (label, value, target, tol)


# -- independent oracle for the two-symbol non-mixing example ---------------
#
# The measure is the half-half mixture of a 2-block product measure and
# its shift by one symbol.  Block weights are exact rationals, so the
# oracle is exact and shares no code with the closed-form cylinder path.

BLOCK_WEIGHTS = {
    (1, 1): Fraction(4, 25),
    (1, 2): Fraction(1, 25),
    (2, 1): Fraction(16, 25),
    (2, 2): Fraction(4, 25),
}


def _block_product_measure(word):
    """Cylinder weight under the 2-block i.i.d. measure, blocks at 0."""
    if len(word) % 2 == 1:
        return sum(_block_product_measure(word + (s,)) for s in (1, 2))
    total = Fraction(1)
    for i in range(0, len(word), 2):
        total *= BLOCK_WEIGHTS[(word[i], word[i + 1])]
    return total


def two_block_mixture(word):
    """Exact oracle measure: average of the block measure and its shift."""
    word = tuple(word)
    straight = _block_product_measure(word)
    shifted = sum(_block_product_measure((z,) + word) for z in (1, 2))
    return (straight + shifted) / 2


# -- the twelve checks -------------------------------------------------------


def check_pressure_identity():
    t = registry.get_builtin("notmix2")
    with threadpool_limits(limits=1):
        started = time.perf_counter()
        exact = pressure.pressure_exact_even(t, 1)
        bracket = pressure.pressure_bracket(t, 2.0, 10)
        elapsed = time.perf_counter() - started
    problems = []
    if abs(exact - LOG5) > 1e-12:
        problems.append("exact value %.15g != log 5" % exact)
    if abs(bracket.upper - LOG5) > 0.05:
        problems.append("upper %.15g not within 0.05 of log 5" % bracket.upper)
    if not bracket.contains(LOG5):
        problems.append("bracket [%.15g, %.15g] misses log 5"
                        % (bracket.periodic_lower, bracket.upper))
    if elapsed >= 10.0:
        problems.append("took %.2f s single-threaded" % elapsed)
    detail = ("exact=%.12f upper=%.12f lower=%.12f elapsed=%.2fs"
              % (exact, bracket.upper, bracket.periodic_lower, elapsed))
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def check_cylinder_exactness():
    t = registry.get_builtin("notmix2")
    kd = kusuoka.kusuoka_measure(t)
    pinned = {(1, 1): Fraction(4, 25), (1, 2): Fraction(17, 50),
              (2, 1): Fraction(17, 50), (2, 2): Fraction(4, 25)}
    worst_pinned = max(abs(kusuoka.cylinder_measure(kd, w) - float(v))
                       for w, v in pinned.items())
    table = kusuoka.cylinder_table(kd, 8)
    worst_oracle = 0.0
    for n in range(1, 9):
        for word, value in table.words_and_measures(n):
            worst_oracle = max(worst_oracle,
                               abs(value - float(two_block_mixture(word))))
    ok = worst_pinned <= 1e-10 and worst_oracle <= 1e-10
    return ok, ("pinned cylinders off by %.2e, block-construction oracle "
                "off by %.2e over all words to length 8"
                % (worst_pinned, worst_oracle))


def check_measure_consistency():
    worst = {}
    for name in IRREDUCIBLE_BUILTINS:
        kd = kusuoka.kusuoka_measure(registry.get_builtin(name))
        worst[name] = kusuoka.consistency_check(kd, 8)
    bad = {k: v for k, v in worst.items() if v > 1e-10}
    peak = max(worst.values())
    return not bad, ("largest stationarity/total-mass defect %.2e (n <= 8, "
                     "%d built-ins)" % (peak, len(worst)))


def check_gibbs_sandwich():
    problems = []
    details = []
    for name in IRREDUCIBLE_BUILTINS:
        kd = kusuoka.kusuoka_measure(registry.get_builtin(name))
        report = kusuoka.gibbs_verify(kd, 10)
        if not report.ok:
            problems.append("%s ratios [%.6g, %.6g] leave [%g, %g]"
                            % (name, report.min_ratio, report.max_ratio,
                               report.c_lower, report.c_upper))
        if name == "notmix2":
            if abs(report.c_lower - 0.5) > 1e-9 or abs(report.c_upper - 1.0) > 1e-9:
                problems.append("notmix2 bounds (%.12g, %.12g) != (1/2, 1)"
                                % (report.c_lower, report.c_upper))
            details.append("notmix2 bounds [%.6g, %.6g] observed [%.6g, %.6g]"
                           % (report.c_lower, report.c_upper,
                              report.min_ratio, report.max_ratio))
    detail = "; ".join(details + problems) or "all ratios inside bounds"
    return not problems, detail


def check_nonmixing_evidence():
    t = registry.get_builtin("notmix2")
    problems = []
    peripheral = kusuoka.peripheral_spectrum(t)
    values = sorted(peripheral.values, key=lambda z: -z.real)
    if (len(values) != 2 or abs(values[0] - 5.0) > 1e-9
            or abs(values[1] + 5.0) > 1e-9):
        problems.append("peripheral spectrum %r != {5, -5}" % (peripheral.values,))
    kd = kusuoka.kusuoka_measure(t)
    mu1 = kusuoka.cylinder_measure(kd, (1,))
    base = mu1 * mu1
    series = [kusuoka.correlation(kd, (1,), (1,), gap) for gap in range(1, 21)]
    odd_gaps = [abs(series[gap - 1] - base) for gap in range(1, 21) if gap % 2]
    if min(odd_gaps) <= 0.01:
        problems.append("odd-gap correlation gap %.4g not > 0.01" % min(odd_gaps))
    cesaro = abs(sum(series) / len(series) - base)
    if cesaro > 0.01:
        problems.append("Cesaro average off by %.4g > 0.01" % cesaro)
    obstruction = structure.mixing_obstruction_scan(t, 3)
    if obstruction is None or obstruction.level != 2:
        problems.append("obstruction scan did not stop at level 2")
    else:
        basis = obstruction.witness.basis
        axis = (obstruction.witness.dim == 1
                and sum(1 for x in basis[0] if x != 0) == 1)
        if not axis:
            problems.append("witness %r is not a coordinate axis"
                            % (basis.tolist(),))
    detail = ("peripheral={5,-5}, min odd-gap deviation %.4g, Cesaro %.2e, "
              "obstruction level 2" % (min(odd_gaps), cesaro))
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def check_zero_entropy_structure():
    t = registry.get_builtin("nilpotent2")
    problems = []
    ps = classify.zero_entropy_structure(t)
    if ps is None:
        problems.append("no periodic structure found")
    else:
        if (ps.period, ps.block_rank, tuple(ps.word)) != (2, 1, (1, 2)):
            problems.append("structure (%d, %d, %r) != (2, 1, (1, 2))"
                            % (ps.period, ps.block_rank, ps.word))
        violated = classify.verify_periodic_structure(t, ps)
        if violated:
            problems.append("clauses violated: %s" % ", ".join(violated))
    value = pressure.pressure_exact_even(t, 1)
    if abs(value) > 1e-12:
        problems.append("exact even pressure %.3e != 0" % value)
    kd = kusuoka.kusuoka_measure(t)
    est = kusuoka.entropy_estimate(kd, 10)
    shannon = abs(float(est.conditional[-1]))
    if shannon > 1e-9:
        problems.append("conditional entropy at n=10 is %.3e" % shannon)
    detail = ("period 2, block rank 1, word (1,2), exact pressure %.1e, "
              "entropy rate %.1e" % (abs(value), shannon))
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def check_jsr_brackets():
    problems = []
    for name, target in (("notmix2", 2.0), ("nilpotent2", 1.0)):
        bracket = pressure.jsr_bracket(registry.get_builtin(name), 2)
        if (abs(bracket.lower - target) > 1e-12
                or abs(bracket.upper - target) > 1e-12):
            problems.append("%s bracket [%.15g, %.15g] != [%g, %g]"
                            % (name, bracket.lower, bracket.upper,
                               target, target))
    return not problems, ("notmix2 -> [2, 2], nilpotent2 -> [1, 1] at depth 2"
                          if not problems else "; ".join(problems))


def check_multiplicativity_counterexample():
    t = registry.get_builtin("alpha(3/5,4/5)")
    verdict = classify.multiplicative_sr_check(t, 2)
    pair = verdict.counterexample
    problems = []
    if pair is None:
        problems.append("no counterexample found")
    else:
        if (tuple(pair.first), tuple(pair.second)) != ((1,), (2,)):
            problems.append("pair (%r, %r) != ((1,), (2,))"
                            % (pair.first, pair.second))
        if abs(pair.product_radius - 16.0 / 25.0) > 1e-12:
            problems.append("product radius %.15g != 16/25" % pair.product_radius)
        if abs(pair.split_radius - 12.0 / 25.0) > 1e-12:
            problems.append("split radius %.15g != 12/25" % pair.split_radius)
    detail = ("pair ((1),(2)): rho(product)=%.12g vs rho*rho=%.12g"
              % (pair.product_radius, pair.split_radius) if pair else "")
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def _random_orthogonal(rng, d):
    gauss = rng.standard_normal((d, d))
    q, r = np.linalg.qr(gauss)
    return q * np.sign(np.diag(r))


def _random_rational_conjugator(rng, d):
    # quarter-integer entries in [-3, 3]; redraw while badly conditioned
    while True:
        mat = rng.integers(-12, 13, size=(d, d)) / 4.0
        if abs(np.linalg.det(mat)) >= 0.5:
            return mat


def check_conformal_round_trip():
    rng = np.random.default_rng(20240814)
    worst = 0.0
    failures = 0
    for _ in range(100):
        d = int(rng.integers(2, 4))
        count = int(rng.integers(2, 4))
        scales = rng.uniform(0.5, 2.0, size=count)
        basis = _random_rational_conjugator(rng, d)
        inverse = np.linalg.inv(basis)
        mats = [inverse @ (scales[i] * _random_orthogonal(rng, d)) @ basis
                for i in range(count)]
        result = classify.conformal_conjugacy_check(
            make_tuple(mats, policy=DOUBLE))
        if not result.is_conformal or result.residual > 1e-8:
            failures += 1
        else:
            worst = max(worst, result.residual)
    problems = []
    if failures:
        problems.append("%d of 100 random tuples not recovered" % failures)
    nm = classify.conformal_conjugacy_check(registry.get_builtin("notmix2"))
    if nm.is_conformal:
        problems.append("notmix2 wrongly certified conformal")
    if len(nm.fixed_space) != 1:
        problems.append("notmix2 fixed space has dimension %d != 1"
                        % len(nm.fixed_space))
    else:
        fixed = nm.fixed_space[0]
        if max(abs(fixed[0, 0]), abs(fixed[1, 1])) > 1e-9 or fixed[0, 1] == 0:
            problems.append("notmix2 fixed matrix %r is not off-diagonal"
                            % fixed.tolist())
    detail = ("100/100 recovered, worst residual %.2e; notmix2: none, "
              "1-dimensional off-diagonal fixed space" % worst)
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def check_rate_independence():
    problems = []
    for name in ("rankone4", "nilpotent2"):
        result = classify.s_independence_check(registry.get_builtin(name), 6)
        if result.exponent_rate is None or abs(result.exponent_rate) > 1e-12:
            problems.append("%s rate %r != 0" % (name, result.exponent_rate))
    nm = classify.s_independence_check(registry.get_builtin("notmix2"), 6)
    if nm.exponent_rate is not None:
        problems.append("notmix2 wrongly constant-rate")
    if nm.low_witness is None or nm.high_witness is None:
        problems.append("notmix2 witness pair missing")
    detail = ("rankone4 and nilpotent2 -> 0; notmix2 -> None with witnesses "
              "%r / %r" % (getattr(nm, "low_witness", None),
                           getattr(nm, "high_witness", None)))
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def _random_rational_tuple(rng):
    d = int(rng.integers(1, 4))
    count = int(rng.integers(2, 4))
    mats = []
    for _ in range(count):
        rows = [[Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
                 for _ in range(d)] for _ in range(d)]
        mats.append(rows)
    flat = [x for m in mats for row in m for x in row]
    if all(x == 0 for x in flat):
        return None
    return make_tuple(mats)


def check_correlation_oracle():
    rng = np.random.default_rng(1105)
    tested = 0
    attempts = 0
    worst = 0.0
    while tested < 200:
        attempts += 1
        if attempts > 4000:
            return False, "only %d usable tuples after %d draws" % (tested,
                                                                    attempts)
        t = _random_rational_tuple(rng)
        if t is None:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                kd = kusuoka.kusuoka_measure(t)
            except (DegenerateEigenmatrixError, ValueError):
                continue
        n_first = int(rng.integers(1, 3))
        n_second = int(rng.integers(1, 3))
        first = tuple(int(rng.integers(1, t.size + 1)) for _ in range(n_first))
        second = tuple(int(rng.integers(1, t.size + 1)) for _ in range(n_second))
        gap = int(rng.integers(n_first, 7))
        closed = kusuoka.correlation(kd, first, second, gap, method="closed")
        brute = kusuoka.correlation(kd, first, second, gap,
                                    method="bruteforce")
        worst = max(worst, abs(closed - brute))
        tested += 1
    ok = worst <= 1e-10
    return ok, ("closed form vs brute-force middle-word sums: largest "
                "deviation %.2e over %d random tuples" % (worst, tested))


def check_eigen_quality():
    problems = []
    worst_residual = 0.0
    smallest_eig = math.inf
    for name in IRREDUCIBLE_BUILTINS:
        kd = kusuoka.kusuoka_measure(registry.get_builtin(name))
        res = max(kd.residuals["pullback"], kd.residuals["pushforward"])
        worst_residual = max(worst_residual, res)
        if res > 1e-10:
            problems.append("%s residual %.2e > 1e-10" % (name, res))
        for mat in (kd.pullback_eigenmatrix, kd.pushforward_eigenmatrix):
            low = float(np.linalg.eigvalsh(mat)[0])
            smallest_eig = min(smallest_eig, low)
            if low <= 0:
                problems.append("%s eigenmatrix not positive definite" % name)
    raised = False
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            kusuoka.kusuoka_measure(make_tuple([[[1, 0], [0, 2]],
                                                [[3, 0], [0, 1]]]))
        except DegenerateEigenmatrixError:
            raised = True
    if not raised:
        problems.append("reducible diagonal pair did not raise")
    detail = ("worst residual %.2e, smallest eigenmatrix eigenvalue %.3g, "
              "reducible pair raises" % (worst_residual, smallest_eig))
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


CRITERIA = (
    ("pressure-identity-notmix2", check_pressure_identity),
    ("cylinder-exactness-notmix2", check_cylinder_exactness),
    ("measure-consistency", check_measure_consistency),
    ("gibbs-sandwich", check_gibbs_sandwich),
    ("nonmixing-evidence-notmix2", check_nonmixing_evidence),
    ("zero-entropy-nilpotent2", check_zero_entropy_structure),
    ("jsr-brackets", check_jsr_brackets),
    ("multiplicativity-counterexample", check_multiplicativity_counterexample),
    ("conformal-round-trip", check_conformal_round_trip),
    ("rate-independence", check_rate_independence),
    ("correlation-oracle", check_correlation_oracle),
    ("eigen-quality", check_eigen_quality),
)


def run_criteria():
    results = []
    for name, func in CRITERIA:
        started = time.perf_counter()
        try:
            ok, detail = func()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
        results.append(CriterionResult(name=name, ok=ok, detail=detail,
                                       seconds=time.perf_counter() - started))
    return results


def _safe_name(name):
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


def _builtin_artifacts(name, out_dir, budget=None):
    t = registry.get_builtin(name)
    target = os.path.join(out_dir, _safe_name(name))
    os.makedirs(target, exist_ok=True)
    save_tuple(t, os.path.join(target, "tuple.json"))

    bracket = pressure.pressure_bracket(t, 2.0, 8, budget=budget)
    rows = list(bracket.series.rows())
    write_csv(os.path.join(target, "series.csv"), SERIES_COLUMNS, rows)
    jsr = pressure.jsr_bracket(t, 6, budget=budget)
    report = classify.classification_report(t, budget=budget)

    results = {
        "pressure_s2": {"upper": bracket.upper,
                        "periodic_lower": bracket.periodic_lower,
                        "exact": bracket.exact},
        "jsr": {"lower": jsr.lower, "upper": jsr.upper, "exact": jsr.exact},
        "classification": jsonable(report),
    }
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            kd = kusuoka.kusuoka_measure(t)
        table = kusuoka.cylinder_table(kd, 6, budget=budget)
        cyl_rows = [{"n": n, "word": ",".join(str(s) for s in w),
                     "measure": v}
                    for n in range(1, 7)
                    for w, v in table.words_and_measures(n)]
        write_csv(os.path.join(target, "cylinders.csv"), CYLINDER_COLUMNS,
                  cyl_rows)
        results["equilibrium"] = {
            "pressure": kd.pressure_value,
            "residuals": kd.residuals,
        }
    except (ThermoformError, ValueError) as exc:
        results["equilibrium"] = {"error": "%s: %s" % (type(exc).__name__,
                                                       exc)}
    write_report(RunReport(operation="reproduce", input_label="builtin:" + name,
                           input_digest=tuple_digest(t), parameters={},
                           results=results, tool_version=_version()),
                 os.path.join(target, "report.json"))


def _version():
    from . import __version__
    return __version__


def write_bundle(out_dir, budget=None):
    """Regenerate all built-in artifacts and run the acceptance checks.

    Returns (results, all_ok).  results is the list of CriterionResult;
    artifacts land under out_dir, one directory per built-in, plus
    acceptance.csv / acceptance.json summary tables.
    """
    os.makedirs(out_dir, exist_ok=True)
    for name in BUNDLE_BUILTINS:
        _builtin_artifacts(name, out_dir, budget=budget)
    results = run_criteria()
    rows = [{"criterion": r.name, "status": "pass" if r.ok else "FAIL",
             "seconds": "%.3f" % r.seconds, "detail": r.detail}
            for r in results]
    write_csv(os.path.join(out_dir, "acceptance.csv"), ACCEPTANCE_COLUMNS,
              rows)
    write_report(RunReport(operation="reproduce-acceptance",
                           input_label="builtins", input_digest="",
                           results={"criteria": rows},
                           tool_version=_version()),
                 os.path.join(out_dir, "acceptance.json"))
    return results, all(r.ok for r in results)


def summary_lines(results):
    lines = []
    for r in results:
        lines.append("%-34s %s  (%5.2fs)  %s"
                     % (r.name, "PASS" if r.ok else "FAIL", r.seconds,
                        r.detail))
    passed = sum(1 for r in results if r.ok)
    lines.append("passed %d of %d acceptance criteria" % (passed, len(results)))
    return lines
