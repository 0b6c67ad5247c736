"""Executable classification checks for matrix-tuple equilibrium states.

Each check either produces a concrete witness (a periodic structure, a
counterexample pair, a conjugator) or reports that the tested property
held up to an explicit word budget.  Nothing here is asymptotic: every
verdict is reproducible by re-running the named operation with the same
budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla
from .core import (
    DOUBLE, EXACT, MatrixTuple, as_float, characteristic_polynomial,
    enumerate_words, is_zero_matrix, iter_product_levels, make_tuple,
    spectral_radius, word_product,
)
from .errors import (
    BudgetExceededError, ThermoformError, UnsupportedPrecisionError,
)
from .kusuoka import (
    KusuokaData, cylinder_table, entropy_estimate, kusuoka_measure,
    lyapunov_spectrum, peripheral_spectrum,
)
from .pressure import pressure_bracket
from .structure import (
    SearchBudget, Subspace, _canonical_subspace, _contained_in,
    find_invariant_subspace, mixing_obstruction_scan, zero_product_search,
)

DEFAULT_SR_TOL = 1e-9
DEFAULT_CONFORMAL_TOL = 1e-8
PD_SEARCH_SEED = 20240814
PD_SEARCH_TRIALS = 256


def _divisors(d):
    return [n for n in range(1, d + 1) if d % n == 0]


def _rotations(word):
    return {word[j:] + word[:j] for j in range(len(word))}


def _matrix_power(mat, k):
    out = None
    for _ in range(k):
        out = mat if out is None else out @ mat
    return out


def _image_of(t: MatrixTuple, mat, vectors):
    """Canonical subspace spanned by mat @ v over the given vectors."""
    rows = [mat @ np.asarray(v) for v in vectors]
    return _canonical_subspace(rows, t.policy)


def _spaces_equal(a: Subspace, b: Subspace):
    return a.dim == b.dim and _contained_in(a, b) and _contained_in(b, a)


@dataclass
class PeriodicStructure:
    """Witness that the equilibrium state sits on one periodic orbit.

    The word has length equal to the period; subspaces[j] is the range
    attached to slot j + 1, each of dimension block_rank, and
    period * block_rank equals the ambient dimension.
    """

    period: int
    block_rank: int
    word: tuple
    subspaces: tuple  # of Subspace, one per slot


def verify_periodic_structure(t: MatrixTuple, ps: PeriodicStructure):
    """Re-check every clause of the periodic decomposition.

    Returns the list of violated clause names (empty when the structure
    is valid).  Checks: dimension count, direct sum, annihilation of
    each slot by off-word generators, cyclic slot-to-slot mapping, slot
    return-product bijectivity, and the nonzero-word census at the
    period length.
    """
    failures = []
    n, r, d = ps.period, ps.block_rank, t.dim
    if n * r != d or len(ps.word) != n or len(ps.subspaces) != n:
        failures.append("shape")
        return failures
    if any(sub.dim != r for sub in ps.subspaces):
        failures.append("block-dimension")
    stacked = [list(row) for sub in ps.subspaces for row in sub.basis]
    total_rank = (exactla.rank(stacked) if t.policy == EXACT
                  else exactla.rank_f(np.asarray(stacked, dtype=float)))
    if total_rank != d:
        failures.append("direct-sum")
    for j in range(n):
        sub = ps.subspaces[j]
        nxt = ps.subspaces[(j + 1) % n]
        for i in range(1, t.size + 1):
            gen = t.generator(i)
            if i != ps.word[j]:
                for row in sub.basis:
                    image = gen @ row
                    if not is_zero_matrix(image.reshape(1, -1), t.policy,
                                          scale=t.entry_scale()):
                        failures.append("annihilation")
                        break
            else:
                image = _image_of(t, gen, sub.basis)
                if not _spaces_equal(image, nxt):
                    failures.append("cyclic-mapping")
    for j in range(n):
        rotation = ps.word[j:] + ps.word[:j]
        ret = word_product(t, rotation)
        image = _image_of(t, ret, ps.subspaces[j].basis)
        if not _spaces_equal(image, ps.subspaces[j]):
            failures.append("return-bijectivity")
    nonzero = set()
    for w in enumerate_words(t.size, n):
        if not is_zero_matrix(word_product(t, w), t.policy, t.entry_scale()):
            nonzero.add(w)
    if nonzero != _rotations(ps.word):
        failures.append("nonzero-census")
    return sorted(set(failures))


def zero_entropy_structure(t: MatrixTuple, budget=None):
    """Search for the periodic decomposition certifying zero entropy.

    Only periods dividing the dimension can occur; divisors are tried in
    increasing order and the first fully verified structure is returned,
    None if no divisor works.  The tuple is assumed irreducible (run the
    structure-module search first for evidence).
    """
    d = t.dim
    scale = t.entry_scale()
    for n in _divisors(d):
        nonzero = {}
        for w in enumerate_words(t.size, n, budget=budget):
            prod = word_product(t, w)
            if not is_zero_matrix(prod, t.policy, scale):
                nonzero[w] = prod
        if not nonzero:
            continue
        omega = min(nonzero)
        if set(nonzero) != _rotations(omega):
            continue
        if d % n != 0:
            continue
        r = d // n
        subspaces = []
        for j in range(n):
            rotation = omega[j:] + omega[:j]
            ret = nonzero.get(rotation)
            if ret is None:
                ret = word_product(t, rotation)
            power = _matrix_power(ret, d)
            if t.policy == EXACT:
                basis = exactla.column_space_basis([list(row) for row in power])
                arr = (np.array(basis, dtype=object) if basis
                       else np.zeros((0, d), dtype=object))
                subspaces.append(Subspace(arr, policy=EXACT))
            else:
                subspaces.append(_canonical_subspace(
                    list(as_float(power).T), DOUBLE))
        candidate = PeriodicStructure(period=n, block_rank=r, word=omega,
                                      subspaces=tuple(subspaces))
        if not verify_periodic_structure(t, candidate):
            return candidate
    return None


@dataclass
class CounterexamplePair:
    """Two semigroup words whose spectral radii fail to multiply."""

    first: tuple
    second: tuple
    product_radius: float
    split_radius: float

    @property
    def defect(self):
        denom = max(self.product_radius, self.split_radius)
        if denom == 0.0:
            return 0.0
        return abs(self.product_radius - self.split_radius) / denom


@dataclass
class MultiplicativeVerdict:
    """Outcome of the bounded multiplicative-spectral-radius test.

    counterexample None means the identity rho(PQ) = rho(P) rho(Q) held
    for every ordered pair of words up to the stated length budget; by
    the Bernoulli characterization that is evidence (not proof) that
    the equilibrium state is Bernoulli.
    """

    word_budget: int
    pairs_tested: int
    tol: float
    counterexample: CounterexamplePair | None

    @property
    def holds_up_to_budget(self):
        return self.counterexample is None


def multiplicative_sr_check(t: MatrixTuple, word_budget, tol=DEFAULT_SR_TOL,
                            budget=None):
    """Test rho(A_v A_w) = rho(A_v) rho(A_w) over bounded word pairs.

    Pairs are scanned in (first word, second word) lexicographic order
    by length, and the first violating pair is reported with exactly
    recomputed radii.  The relative defect is measured against the
    larger of the two sides.
    """
    if word_budget < 1:
        raise ValueError("word budget must be at least 1")
    words = []
    for n in range(1, word_budget + 1):
        words.extend(enumerate_words(t.size, n))
    pair_count = len(words) ** 2
    cap = 10_000_000 if budget is None else budget
    if pair_count > cap:
        raise BudgetExceededError(
            "pair scan needs %d pairs" % pair_count,
            requested=pair_count, cap=cap)
    floats = np.stack([as_float(word_product(t, w)) for w in words])
    radii = np.maximum(
        np.max(np.abs(np.linalg.eigvals(floats)), axis=1), 0.0)
    pairwise = np.einsum("iab,jbc->ijac", floats, floats)
    pair_radii = np.max(
        np.abs(np.linalg.eigvals(pairwise.reshape(-1, t.dim, t.dim))),
        axis=1).reshape(len(words), len(words))
    split = np.outer(radii, radii)
    denom = np.maximum(np.maximum(pair_radii, split), 1e-300)
    defect = np.abs(pair_radii - split) / denom
    violations = np.argwhere(defect > tol)
    if violations.size == 0:
        return MultiplicativeVerdict(word_budget=word_budget,
                                     pairs_tested=pair_count, tol=tol,
                                     counterexample=None)
    i, j = min((int(a), int(b)) for a, b in violations)
    first, second = words[i], words[j]
    # A_first A_second is the product of the concatenated word second+first
    pair = CounterexamplePair(
        first=first, second=second,
        product_radius=spectral_radius(word_product(t, second + first)),
        split_radius=spectral_radius(word_product(t, first))
        * spectral_radius(word_product(t, second)))
    return MultiplicativeVerdict(word_budget=word_budget,
                                 pairs_tested=pair_count, tol=tol,
                                 counterexample=pair)


@dataclass
class ConformalResult:
    """Outcome of the search for a conjugation onto scaled rotations.

    conjugator is a symmetric positive definite matrix B such that each
    scalars[i] * inv(B) A_i B is orthogonal within the residual, or None
    with the failure reason ("not-invertible" generators, or
    "no-positive-definite-element" in the joint fixed space, whose basis
    is reported either way).
    """

    conjugator: np.ndarray | None
    scalars: tuple
    fixed_space: tuple  # basis of symmetric matrices, possibly empty
    residual: float | None
    reason: str | None

    @property
    def is_conformal(self):
        return self.conjugator is not None


def _determinant(mat):
    coeffs = characteristic_polynomial(mat)
    det = coeffs[-1] * (-1) ** (mat.shape[0])
    return det


def _sym_pairs(d):
    pairs = [(i, i) for i in range(d)]
    pairs.extend((i, j) for i in range(d) for j in range(i + 1, d))
    return pairs


def _pullback_matrix_plain(gen, d, exact):
    """Matrix of B -> gen^T B gen on plain symmetric coordinates.

    Coordinates are the diagonal entries followed by the upper
    off-diagonal entries (basis E_ii and E_ij + E_ji); no orthonormal
    scaling, so rational generators give rational entries.
    """
    pairs = _sym_pairs(d)
    cols = []
    for (a, b) in pairs:
        basis_mat = np.zeros((d, d), dtype=object if exact else float)
        one = Fraction(1) if exact else 1.0
        basis_mat[a, b] = basis_mat[b, a] = one
        image = gen.T @ basis_mat @ gen
        cols.append([image[i, j] for (i, j) in pairs])
    mat = [[cols[c][r] for c in range(len(pairs))] for r in range(len(pairs))]
    return mat


def _joint_fixed_space(t: MatrixTuple, multipliers, exact):
    """Basis of the space of symmetric G with A_i^T G A_i = mult_i * G."""
    d = t.dim
    pairs = _sym_pairs(d)
    dim = len(pairs)
    stacked = []
    for gen, mult in zip(t.matrices, multipliers):
        block = _pullback_matrix_plain(gen, d, exact)
        for r in range(dim):
            row = list(block[r])
            row[r] = row[r] - mult
            stacked.append(row)
    if exact:
        kernel = exactla.nullspace(stacked)
        vectors = [np.array([float(x) for x in v]) for v in kernel]
    else:
        kernel = exactla.nullspace_f(np.asarray(stacked, dtype=float))
        vectors = [np.asarray(v, dtype=float) for v in kernel]
    mats = []
    for vec in vectors:
        g = np.zeros((d, d))
        for coord, (i, j) in zip(vec, pairs):
            g[i, j] += coord
            if i != j:
                g[j, i] += coord
        norm = np.linalg.norm(g)
        if norm > 0:
            g = g / norm
        mats.append(g)
    return mats


def _find_positive_definite(basis_mats, seed=PD_SEARCH_SEED,
                            trials=PD_SEARCH_TRIALS):
    """Search span(basis_mats) for a positive definite element.

    Tries signed basis elements, seeded random combinations, and a grid
    over two-element sections; subspace dimensions at desk scale are
    tiny, so this covers the cone reliably when it is nonempty.
    """
    def accept(g):
        eigs = np.linalg.eigvalsh(0.5 * (g + g.T))
        if eigs[0] > 1e-12 * max(1.0, abs(eigs[-1])):
            return g / np.trace(g)
        return None

    for g in basis_mats:
        for sign in (1.0, -1.0):
            found = accept(sign * g)
            if found is not None:
                return found
    if len(basis_mats) > 1:
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            coeffs = rng.uniform(-1.0, 1.0, size=len(basis_mats))
            g = sum(c * m for c, m in zip(coeffs, basis_mats))
            for sign in (1.0, -1.0):
                found = accept(sign * g)
                if found is not None:
                    return found
        for a in range(len(basis_mats)):
            for b in range(a + 1, len(basis_mats)):
                for theta in np.linspace(0.0, math.pi, 64, endpoint=False):
                    g = (math.cos(theta) * basis_mats[a]
                         + math.sin(theta) * basis_mats[b])
                    for sign in (1.0, -1.0):
                        found = accept(sign * g)
                        if found is not None:
                            return found
    return None


def conformal_conjugacy_check(t: MatrixTuple, tol=DEFAULT_CONFORMAL_TOL):
    """Search for B making every normalized generator orthogonal.

    The candidate Gram matrices G solve A_i^T G A_i = |det A_i|^{2/d} G
    simultaneously; the kernel intersection is exact when the tuple and
    the multipliers are rational, double precision otherwise.  A
    positive definite G yields B = G^{-1/2}, verified directly on every
    generator.
    """
    d = t.dim
    dets = [_determinant(m) for m in t.matrices]
    scalars = []
    for det in dets:
        value = abs(float(det))
        scalars.append(value ** (1.0 / d) if value > 0 else 0.0)
    if t.policy == EXACT:
        singular = any(det == 0 for det in dets)
    else:
        det_floor = 1e-12 * max(1.0, float(t.entry_scale()) ** d)
        singular = any(abs(float(det)) < det_floor for det in dets)
    if singular:
        return ConformalResult(conjugator=None, scalars=tuple(scalars),
                               fixed_space=(), residual=None,
                               reason="not-invertible")
    exact = t.policy == EXACT
    multipliers = None
    if exact:
        roots = [exactla.rational_root(Fraction(det) ** 2, d) for det in dets]
        if all(r is not None for r in roots):
            multipliers = roots
        else:
            exact = False
    if not exact:
        multipliers = [abs(float(det)) ** (2.0 / d) for det in dets]
        work = (t if t.policy == DOUBLE else
                make_tuple([as_float(m) for m in t.matrices], policy=DOUBLE))
    else:
        work = t
    fixed = _joint_fixed_space(work, multipliers, exact)
    if not fixed:
        return ConformalResult(conjugator=None, scalars=tuple(scalars),
                               fixed_space=(), residual=None,
                               reason="no-positive-definite-element")
    gram = _find_positive_definite(fixed)
    if gram is None:
        return ConformalResult(conjugator=None, scalars=tuple(scalars),
                               fixed_space=tuple(fixed), residual=None,
                               reason="no-positive-definite-element")
    eigs, vecs = np.linalg.eigh(gram)
    conjugator = vecs @ np.diag(eigs ** -0.5) @ vecs.T
    inverse = vecs @ np.diag(eigs ** 0.5) @ vecs.T
    residual = 0.0
    for m, c in zip(t.matrices, scalars):
        ortho = (inverse @ as_float(m) @ conjugator) / c
        gap = ortho.T @ ortho - np.eye(d)
        residual = max(residual, float(np.linalg.norm(gap, ord=2)))
    if residual > tol:
        return ConformalResult(conjugator=None, scalars=tuple(scalars),
                               fixed_space=tuple(fixed), residual=residual,
                               reason="residual-too-large")
    return ConformalResult(conjugator=conjugator, scalars=tuple(scalars),
                           fixed_space=tuple(fixed), residual=residual,
                           reason=None)


@dataclass
class EqualityVerdict:
    """Word-by-word comparison of two normalized radius functionals."""

    equal: bool
    depth: int
    tol: float
    first_pressure: float
    second_pressure: float
    max_defect: float
    first_violation: tuple | None


def _pressure_value(t: MatrixTuple, exponent, depth, tol):
    bracket = pressure_bracket(t, exponent, depth)
    if bracket.exact is not None:
        return bracket.exact
    if bracket.width() < tol:
        return 0.5 * (bracket.periodic_lower + bracket.upper)
    raise UnsupportedPrecisionError(
        "pressure at exponent %s is only bracketed to width %.3e; the "
        "equality check needs exact or tighter-than-%g values"
        % (exponent, bracket.width(), tol))


def equilibrium_equality_check(first, second, depth, tol=DEFAULT_SR_TOL,
                               bracket_depth=8):
    """Compare e^{-nP} rho(A_w)^s across two (tuple, exponent) pairs.

    Both tuples must use the same alphabet size.  Words up to the given
    length are compared; zero radii must pair up exactly, and positive
    ones must match within tol after pressure normalization.
    """
    t_a, s_a = first
    t_b, s_b = second
    if t_a.size != t_b.size:
        raise ValueError("tuples use different alphabet sizes")
    p_a = _pressure_value(t_a, s_a, bracket_depth, tol)
    p_b = _pressure_value(t_b, s_b, bracket_depth, tol)
    max_defect = 0.0
    first_violation = None
    for n in range(1, depth + 1):
        for w in enumerate_words(t_a.size, n):
            rho_a = spectral_radius(word_product(t_a, w))
            rho_b = spectral_radius(word_product(t_b, w))
            if rho_a <= 0.0 or rho_b <= 0.0:
                defect = 0.0 if rho_a == rho_b else math.inf
            else:
                value_a = math.exp(s_a * math.log(rho_a) - n * p_a)
                value_b = math.exp(s_b * math.log(rho_b) - n * p_b)
                defect = abs(value_a - value_b)
            if defect > max_defect:
                max_defect = defect
                if defect > tol and first_violation is None:
                    first_violation = w
    return EqualityVerdict(equal=first_violation is None, depth=depth,
                           tol=tol, first_pressure=p_a, second_pressure=p_b,
                           max_defect=max_defect,
                           first_violation=first_violation)


@dataclass
class SIndependenceResult:
    """Whether all nonzero normalized radii share one value e^lambda."""

    exponent_rate: float | None  # lambda, None when values disagree
    word_budget: int
    tol: float
    low_witness: tuple | None
    high_witness: tuple | None
    low_value: float | None
    high_value: float | None


def s_independence_check(t: MatrixTuple, word_budget, tol=DEFAULT_SR_TOL,
                         budget=None):
    """Test whether rho(A_w)^{1/|w|} is constant over nonzero values.

    A constant value e^lambda makes the pressure affine in the exponent
    (P = h + lambda s), so lambda is returned; otherwise None along with
    an extremal witness pair.
    """
    best_low = best_high = None
    low_word = high_word = None
    for level in iter_product_levels(t, word_budget, budget=budget):
        radii = level.spectral_radii()
        positive = radii > 0.0
        if not np.any(positive):
            continue
        rates = (np.log(radii[positive]) + level.log_scale) / level.length
        idxs = np.flatnonzero(positive)
        k_min = int(np.argmin(rates))
        k_max = int(np.argmax(rates))
        if best_low is None or rates[k_min] < best_low:
            best_low = float(rates[k_min])
            low_word = _rank_to_word(int(idxs[k_min]), t.size, level.length)
        if best_high is None or rates[k_max] > best_high:
            best_high = float(rates[k_max])
            high_word = _rank_to_word(int(idxs[k_max]), t.size, level.length)
    if best_low is None:
        return SIndependenceResult(exponent_rate=None, word_budget=word_budget,
                                   tol=tol, low_witness=None,
                                   high_witness=None, low_value=None,
                                   high_value=None)
    if best_high - best_low <= tol:
        return SIndependenceResult(
            exponent_rate=0.5 * (best_low + best_high),
            word_budget=word_budget, tol=tol, low_witness=low_word,
            high_witness=high_word, low_value=best_low, high_value=best_high)
    return SIndependenceResult(exponent_rate=None, word_budget=word_budget,
                               tol=tol, low_witness=low_word,
                               high_witness=high_word, low_value=best_low,
                               high_value=best_high)


def _rank_to_word(rank, size, length):
    symbols = []
    for _ in range(length):
        symbols.append(rank % size + 1)
        rank //= size
    return tuple(reversed(symbols))


@dataclass
class MaximalEntropyResult:
    """Whether the cylinder table matches the uniform Bernoulli measure."""

    is_maximal: bool
    depth: int
    tol: float
    max_deviation: float
    witness: tuple | None


def maximal_entropy_check(kd: KusuokaData, n_max, tol=1e-8, budget=None):
    """True when mu([w]) = M^{-|w|} for every word up to n_max."""
    table = cylinder_table(kd, n_max, budget=budget)
    size = kd.source.size
    worst = 0.0
    witness = None
    for n in range(1, n_max + 1):
        deviations = np.abs(table.level(n) - size ** (-float(n)))
        k = int(np.argmax(deviations))
        if float(deviations[k]) > worst:
            worst = float(deviations[k])
            witness = _rank_to_word(k, size, n)
    return MaximalEntropyResult(is_maximal=worst <= tol, depth=n_max, tol=tol,
                                max_deviation=worst,
                                witness=witness if worst > tol else None)


@dataclass
class ClassificationReport:
    """Aggregated classification verdicts with captured sub-check errors.

    Any sub-check that raised is recorded in errors under its own name
    and its field left as None; every populated verdict can be
    reproduced by calling the like-named operation directly.
    """

    source_label: str
    zero_word: tuple | None
    irreducibility: object
    mixing_obstruction: object
    peripheral: object
    zero_entropy: PeriodicStructure | None
    bernoulli: MultiplicativeVerdict | None
    conformal: ConformalResult | None
    s_independence: SIndependenceResult | None
    maximal_entropy: MaximalEntropyResult | None
    mixing_assessment: str
    cross_checks: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)


def _mixing_assessment(obstruction, peripheral):
    if obstruction is not None and peripheral is not None and not peripheral.simple:
        return ("non-mixing evidence: product tuple at level %d has an "
                "invariant subspace and the doubled matrix has a non-simple "
                "peripheral spectrum" % obstruction.level)
    if obstruction is None and peripheral is not None and peripheral.simple:
        return ("consistent with mixing: no obstruction found in the scan "
                "and the peripheral spectrum is simple")
    if obstruction is not None:
        return ("obstruction to the sufficient mixing condition at level %d; "
                "peripheral spectrum inconclusive" % obstruction.level)
    return "inconclusive: diagnostics disagree or are unavailable"


def classification_report(t: MatrixTuple, word_budget=3, scan_depth=3,
                          table_depth=6, tol=DEFAULT_SR_TOL,
                          conformal_tol=DEFAULT_CONFORMAL_TOL,
                          budget=None) -> ClassificationReport:
    """Run every classification check and the implication cross-checks.

    Sub-check failures are captured rather than propagated so that one
    degenerate diagnostic (for example a reducible input breaking the
    equilibrium computation) leaves the remaining verdicts usable.
    """
    results = {}
    errors = {}

    def run(name, thunk):
        try:
            results[name] = thunk()
        except (ThermoformError, np.linalg.LinAlgError, ValueError) as exc:
            results[name] = None
            errors[name] = "%s: %s" % (type(exc).__name__, exc)

    run("zero_word", lambda: zero_product_search(t, depth=2 * t.dim,
                                                 budget=budget))
    run("irreducibility", lambda: find_invariant_subspace(t, SearchBudget()))
    run("mixing_obstruction", lambda: mixing_obstruction_scan(t, scan_depth))
    run("peripheral", lambda: peripheral_spectrum(t))
    run("zero_entropy", lambda: zero_entropy_structure(t, budget=budget))
    run("bernoulli", lambda: multiplicative_sr_check(t, word_budget, tol=tol,
                                                     budget=budget))
    run("conformal", lambda: conformal_conjugacy_check(t, tol=conformal_tol))
    run("s_independence", lambda: s_independence_check(t, 2 * word_budget,
                                                       tol=tol, budget=budget))

    kd = None
    try:
        kd = kusuoka_measure(t, verify_irreducible=False)
    except (ThermoformError, np.linalg.LinAlgError, ValueError) as exc:
        errors["equilibrium"] = "%s: %s" % (type(exc).__name__, exc)
    if kd is not None:
        run("maximal_entropy", lambda: maximal_entropy_check(
            kd, table_depth, budget=budget))
    else:
        results["maximal_entropy"] = None

    cross = {}

    def cross_check(name, thunk):
        try:
            cross[name] = thunk()
        except (ThermoformError, np.linalg.LinAlgError, ValueError) as exc:
            errors["cross:" + name] = "%s: %s" % (type(exc).__name__, exc)

    def flat_lyapunov():
        rotated = conjugated_float_tuple(t, conformal.conjugator)
        kd_rot = kusuoka_measure(rotated, verify_irreducible=False)
        spectrum = lyapunov_spectrum(kd_rot, 4, budget=budget)
        spread = float(np.max(spectrum[3]) - np.min(spectrum[3]))
        return spread <= 1e-9

    def vanishing_rate():
        depth = 2 * zero_entropy.period
        est = entropy_estimate(kd, depth, budget=budget)
        return abs(est.conditional[depth - 1]) <= 1e-9

    conformal = results.get("conformal")
    if kd is not None and conformal is not None and conformal.is_conformal:
        cross_check("conformal_implies_flat_lyapunov", flat_lyapunov)
    zero_entropy = results.get("zero_entropy")
    if kd is not None and zero_entropy is not None:
        cross_check("zero_entropy_implies_vanishing_rate", vanishing_rate)
    bernoulli = results.get("bernoulli")
    maximal = results.get("maximal_entropy")
    if (bernoulli is not None and bernoulli.counterexample is not None
            and maximal is not None and conformal is not None):
        cross["counterexample_implies_not_maximal"] = (
            not maximal.is_maximal or conformal.is_conformal)

    return ClassificationReport(
        source_label=t.label or "unlabeled",
        zero_word=results.get("zero_word"),
        irreducibility=results.get("irreducibility"),
        mixing_obstruction=results.get("mixing_obstruction"),
        peripheral=results.get("peripheral"),
        zero_entropy=zero_entropy,
        bernoulli=bernoulli,
        conformal=conformal,
        s_independence=results.get("s_independence"),
        maximal_entropy=maximal,
        mixing_assessment=_mixing_assessment(results.get("mixing_obstruction"),
                                             results.get("peripheral")),
        cross_checks=cross,
        errors=errors)


def conjugated_float_tuple(t: MatrixTuple, basis):
    """Double precision conjugate inv(basis) A_i basis of any tuple."""
    basis = np.asarray(basis, dtype=float)
    inverse = np.linalg.inv(basis)
    mats = [inverse @ as_float(m) @ basis for m in t.matrices]
    return make_tuple(mats, policy=DOUBLE, label=t.label)
