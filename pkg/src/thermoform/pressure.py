"""Pressure brackets, p-radii, and joint spectral radius bounds.

The pressure of a tuple at exponent s is the growth rate

    P(s) = lim (1/n) log sum_{|w|=n} ||A_w||^s.

log of the partition sum is subadditive, so every (1/n) log S_n bounds
P(s) from above; every word gives the periodic lower bound
(s/n) log rho(A_w).  At s = 2 the Gram iterates T_n = sum_w A_w^T A_w
satisfy ||T_{m+n}|| <= ||T_m|| ||T_n|| (monotonicity of B -> A^T B A on
the positive cone), so (1/n) log ||T_n|| is a second certified upper
series that is far cheaper and usually far tighter; for even s = 2l the
same series is run on the l-th Kronecker power tuple.  Even exponents
admit the exact value log rho(sum_i A_i^{ox 2l}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_KRON_CAP, EXACT, MatrixTuple, as_float, batch_operator_norms,
    batch_spectral_radii, frobenius_norm_squared, iter_product_levels,
    kronecker_power, spectral_radius,
)
from .errors import BudgetExceededError

#: cap on the squared Kronecker dimension used by pressure_exact_even
EXACT_EVEN_DIM_CAP = 4096


@dataclass
class LevelSeries:
    """Per-length convergence data for a pressure bracket."""

    lengths: list = field(default_factory=list)
    norm_sum: list = field(default_factory=list)        # (1/n) log S_n
    gram: list = field(default_factory=list)            # (1/n) log ||T_n||, or None
    trace: list = field(default_factory=list)           # (1/n) log tr T_n, or None
    periodic: list = field(default_factory=list)        # max_w (s/n) log rho(A_w), or None
    spectral: list = field(default_factory=list)        # (1/n) log sum rho^s, diagnostic

    def upper_at(self, i):
        candidates = [self.norm_sum[i]]
        if self.gram[i] is not None:
            candidates.append(self.gram[i])
        if self.trace[i] is not None:
            candidates.append(self.trace[i])
        return min(candidates)

    def rows(self):
        for i, n in enumerate(self.lengths):
            lower = self.periodic[i]
            yield {"n": n,
                   "upper": self.upper_at(i),
                   "periodic_lower": lower if lower is not None else -math.inf,
                   "spectral_diagnostic": self.spectral[i]}


@dataclass
class PressureBracket:
    """Certified enclosure of the pressure at one exponent."""

    exponent: float
    depth: int
    upper: float
    periodic_lower: float
    exact: float | None
    series: LevelSeries

    def width(self):
        return self.upper - self.periodic_lower

    def contains(self, value, slack=1e-12):
        return self.periodic_lower - slack <= value <= self.upper + slack


@dataclass
class RadiusBracket:
    """Enclosure [lower, upper] of a p-radius or the joint spectral radius.

    series rows carry the same columns as the pressure series, already
    mapped through the radius normalization.
    """

    lower: float
    upper: float
    depth: int
    exact: bool = False
    series: list = None


def log_partition_sum(t: MatrixTuple, exponent, length, budget=None):
    """log of S_n = sum over all words of length n of ||A_w||^exponent."""
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    if length == 0:
        return 0.0
    last = None
    for level in iter_product_levels(t, length, budget=budget):
        last = level
    norms = last.norms()
    positive = norms[norms > 0.0]
    if positive.size == 0:
        return -math.inf
    # log-space accumulation keeps long products inside float range
    logs = exponent * (np.log(positive) + last.log_scale)
    peak = float(np.max(logs))
    return peak + math.log(float(np.sum(np.exp(logs - peak))))


def partition_sum(t: MatrixTuple, exponent, length, budget=None):
    """S_n itself; inf when the value leaves float range."""
    value = log_partition_sum(t, exponent, length, budget=budget)
    if value == -math.inf:
        return 0.0
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def frobenius_partition_sum(t: MatrixTuple, length):
    """Exact sum of squared Frobenius norms over all words of a length.

    Computed as the trace of the length-fold transfer iterate
    sum_w A_w^T A_w, so no word enumeration is needed; the result is an
    exact Fraction under the rational policy.
    """
    iterate = t.identity()
    for _ in range(length):
        acc = None
        for m in t.matrices:
            term = m.T @ iterate @ m
            acc = term if acc is None else acc + term
        iterate = acc
    return sum(iterate[i, i] for i in range(t.dim))


def _gram_rates(t: MatrixTuple, depth):
    """(1/n) log ||sum_w A_w^T A_w|| for n = 1..depth, rescaled in place."""
    gens = t.floats()
    iterate = np.eye(t.dim)
    log_scale = 0.0
    rates = []
    for n in range(1, depth + 1):
        iterate = np.einsum("iba,bc,icd->ad", gens, iterate, gens)
        norm = float(np.linalg.norm(iterate, 2))
        if norm == 0.0:
            rates.extend([-math.inf] * (depth - len(rates)))
            break
        log_norm = math.log(norm) + log_scale
        rates.append(log_norm / n)
        iterate = iterate / norm
        log_scale = log_norm
    return rates


def _trace_rates(t: MatrixTuple, depth):
    """(1/n) log tr(sum_w A_w^T A_w), exact Fractions under the hood."""
    rates = []
    iterate = t.identity()
    for n in range(1, depth + 1):
        acc = None
        for m in t.matrices:
            term = m.T @ iterate @ m
            acc = term if acc is None else acc + term
        iterate = acc
        trace = sum(iterate[i, i] for i in range(t.dim))
        value = float(trace)
        rates.append(math.log(value) / n if value > 0 else -math.inf)
    return rates


def pressure_exact_even(t: MatrixTuple, ell, dim_cap=EXACT_EVEN_DIM_CAP):
    """Exact pressure at even exponent s = 2*ell via the Kronecker identity.

    P(2 ell) = log rho(sum_i A_i^{ox 2 ell}); the matrix has dimension
    d^(2 ell), guarded by dim_cap.
    """
    if ell < 1 or int(ell) != ell:
        raise ValueError("ell must be a positive integer")
    ell = int(ell)
    dim = t.dim ** (2 * ell)
    if dim > dim_cap:
        raise BudgetExceededError(
            "pressure_exact_even needs a %d-dimensional matrix, cap %d"
            % (dim, dim_cap), requested=dim, cap=dim_cap)
    doubled = kronecker_power(t, 2 * ell, cap=dim_cap)
    total = None
    for m in doubled.matrices:
        fm = as_float(m)
        total = fm if total is None else total + fm
    radius = spectral_radius(total)
    return math.log(radius) if radius > 0 else -math.inf


def _scalar_pressure(t: MatrixTuple, exponent):
    """Closed form for 1 x 1 tuples: log sum |a_i|^s."""
    values = [abs(float(m[0, 0])) ** exponent for m in t.matrices]
    total = sum(values)
    return math.log(total) if total > 0 else -math.inf


def pressure_bracket(t: MatrixTuple, exponent, depth, budget=None):
    """Certified pressure bracket from depth levels of enumeration.

    upper is the best certified upper estimate seen (partition sums and,
    at even exponents, Gram iterate norms); periodic_lower the best
    periodic lower bound; exact is filled for 1 x 1 tuples and for even
    integer exponents within the dimension cap.
    """
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    series = LevelSeries()

    even_half = None
    if abs(exponent - round(exponent)) < 1e-12 and round(exponent) % 2 == 0:
        even_half = int(round(exponent)) // 2

    gram = []
    if even_half == 1:
        gram = _gram_rates(t, depth)
    elif even_half is not None and t.dim ** even_half <= DEFAULT_KRON_CAP:
        gram = _gram_rates(kronecker_power(t, even_half), depth)

    trace = []
    if even_half == 1 and t.policy == EXACT:
        trace = _trace_rates(t, depth)

    for level in iter_product_levels(t, depth, budget=budget):
        n = level.length
        norms = level.norms()
        radii = level.spectral_radii()
        positive = norms[norms > 0.0]
        if positive.size:
            logs = exponent * (np.log(positive) + level.log_scale)
            peak = float(np.max(logs))
            norm_rate = (peak + math.log(float(np.sum(np.exp(logs - peak))))) / n
        else:
            norm_rate = -math.inf
        pos_radii = radii[radii > 0.0]
        if pos_radii.size:
            periodic = exponent * float(np.max(np.log(pos_radii) + level.log_scale)) / n
            rlogs = exponent * (np.log(pos_radii) + level.log_scale)
            rpeak = float(np.max(rlogs))
            spectral = (rpeak + math.log(float(np.sum(np.exp(rlogs - rpeak))))) / n
        else:
            periodic = None
            spectral = -math.inf
        series.lengths.append(n)
        series.norm_sum.append(norm_rate)
        series.gram.append(gram[n - 1] if n - 1 < len(gram) else None)
        series.trace.append(trace[n - 1] if n - 1 < len(trace) else None)
        series.periodic.append(periodic)
        series.spectral.append(spectral)

    upper = min(series.upper_at(i) for i in range(len(series.lengths)))
    lower_values = [p for p in series.periodic if p is not None]
    periodic_lower = max(lower_values) if lower_values else -math.inf

    exact = None
    if t.dim == 1:
        exact = _scalar_pressure(t, exponent)
    elif even_half is not None and t.dim ** (2 * even_half) <= EXACT_EVEN_DIM_CAP:
        exact = pressure_exact_even(t, even_half)

    return PressureBracket(exponent=float(exponent), depth=depth, upper=upper,
                           periodic_lower=periodic_lower, exact=exact,
                           series=series)


def p_radius(t: MatrixTuple, p, depth, budget=None):
    """Bracket for the p-radius (e^{P(p)/p}, unnormalized convention).

    Collapses to the exact value when the pressure does (1 x 1 tuples,
    even integer p within the dimension cap).
    """
    bracket = pressure_bracket(t, p, depth, budget=budget)

    def to_radius(value):
        if value is None or value == -math.inf:
            return 0.0
        return math.exp(value / p)

    rows = [{"n": row["n"], "upper": to_radius(row["upper"]),
             "periodic_lower": to_radius(row["periodic_lower"]),
             "spectral_diagnostic": to_radius(row["spectral_diagnostic"])}
            for row in bracket.series.rows()]
    if bracket.exact is not None:
        value = math.exp(bracket.exact / p)
        return RadiusBracket(lower=value, upper=value, depth=depth, exact=True,
                             series=rows)
    return RadiusBracket(lower=to_radius(bracket.periodic_lower),
                         upper=to_radius(bracket.upper),
                         depth=depth, exact=False, series=rows)


def jsr_bracket(t: MatrixTuple, depth, budget=None):
    """Joint spectral radius bracket from depth enumeration levels.

    lower = max_w rho(A_w)^{1/|w|} converges by the periodic
    characterization of the limit norm growth; upper = min over levels
    of max_w ||A_w||^{1/n}.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    lower = 0.0
    upper = math.inf
    rows = []
    for level in iter_product_levels(t, depth, budget=budget):
        n = level.length
        norms = level.norms()
        radii = level.spectral_radii()
        peak_norm = float(np.max(norms)) if norms.size else 0.0
        peak_radius = float(np.max(radii)) if radii.size else 0.0
        if peak_norm > 0.0:
            upper = min(upper, math.exp((math.log(peak_norm) + level.log_scale) / n))
        else:
            upper = 0.0
        level_radius = 0.0
        if peak_radius > 0.0:
            level_radius = math.exp((math.log(peak_radius) + level.log_scale) / n)
            lower = max(lower, level_radius)
        rows.append({"n": n, "upper": upper, "periodic_lower": lower,
                     "spectral_diagnostic": level_radius})
    if upper < lower:
        # floating slack only; the bounds are mathematically ordered
        upper = max(upper, lower)
    return RadiusBracket(lower=lower, upper=upper, depth=depth,
                         exact=(lower == upper), series=rows)
