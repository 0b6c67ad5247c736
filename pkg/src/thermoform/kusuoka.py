"""The quadratic (s = 2) equilibrium state and its cylinder calculus.

For an irreducible tuple the transfer operators on symmetric matrices

    pullback:     B -> sum_i A_i^T B A_i
    pushforward:  B -> sum_i A_i B A_i^T

share their spectral radius e^P with the doubled matrix sum_i A_i ox A_i
and admit positive definite Perron eigenmatrices Q (pullback side) and
Q_hat (pushforward side).  Normalizing tr(Q Q_hat) = 1 gives the
stationary cylinder measure in closed form:

    mu([w]) = e^{-nP} tr(Q_hat A_w^T Q A_w) = e^{-nP} ||U A_w V^T||_F^2

with Q = U^T U and Q_hat = V^T V.  Everything downstream (consistency,
Gibbs envelopes, Lyapunov and entropy estimates, correlations) is
computed from that formula.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    EXACT, MatrixTuple, as_float, enumerate_words, iter_product_levels,
    kronecker_power, word_index, word_product,
)
from .errors import (
    BudgetExceededError, DegenerateEigenmatrixError, NotConvergedError,
)
from .structure import SearchBudget, find_invariant_subspace

PULLBACK = "pullback"
PUSHFORWARD = "pushforward"


def sym_dim(d):
    return d * (d + 1) // 2


def sym_basis(d):
    """Orthonormal basis of symmetric d x d matrices (Frobenius inner product)."""
    basis = []
    for i in range(d):
        e = np.zeros((d, d))
        e[i, i] = 1.0
        basis.append(e)
    off = 1.0 / math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d))
            e[i, j] = off
            e[j, i] = off
            basis.append(e)
    return basis


def sym_to_vec(mat):
    d = mat.shape[0]
    fm = as_float(mat)
    out = np.empty(sym_dim(d))
    out[:d] = np.diag(fm)
    k = d
    root2 = math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            out[k] = root2 * 0.5 * (fm[i, j] + fm[j, i])
            k += 1
    return out


def vec_to_sym(vec, d):
    out = np.zeros((d, d))
    out[np.diag_indices(d)] = vec[:d]
    k = d
    inv_root2 = 1.0 / math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            out[i, j] = out[j, i] = inv_root2 * vec[k]
            k += 1
    return out


@dataclass
class SymOperator:
    """A transfer operator on symmetric matrices, with its matrix form."""

    source: MatrixTuple
    side: str
    matrix: np.ndarray  # (D, D) in the orthonormal symmetric basis

    @property
    def dim(self):
        return self.source.dim

    def apply(self, mat):
        """Direct formula; exact when the tuple and input are exact."""
        if self.side == PULLBACK:
            terms = [m.T @ mat @ m for m in self.source.matrices]
        else:
            terms = [m @ mat @ m.T for m in self.source.matrices]
        out = terms[0]
        for term in terms[1:]:
            out = out + term
        return out

    def apply_vec(self, vec):
        return self.matrix @ vec


def build_transfer_operator(t: MatrixTuple, side=PULLBACK) -> SymOperator:
    if side not in (PULLBACK, PUSHFORWARD):
        raise ValueError("side must be %r or %r" % (PULLBACK, PUSHFORWARD))
    d = t.dim
    cols = []
    gens = t.floats()
    for basis_mat in sym_basis(d):
        if side == PULLBACK:
            image = sum(g.T @ basis_mat @ g for g in gens)
        else:
            image = sum(g @ basis_mat @ g.T for g in gens)
        cols.append(sym_to_vec(image))
    return SymOperator(source=t, side=side, matrix=np.array(cols).T)


def perron_eigen(op: SymOperator, tol=1e-12, max_iter=10000):
    """Perron pair of a transfer operator by accelerated power iteration.

    Iterates the cone-interior map sum_{k<d} L^k starting from the
    identity, so the limit stays positive semidefinite and the leading
    eigenvalue of the accelerated map is simple for irreducible tuples.
    Returns (eigenvalue, eigenmatrix) with the eigenmatrix unit-Frobenius
    and positive definite; raises DegenerateEigenmatrixError otherwise.
    The residual is measured relative to the eigenvalue.
    """
    d = op.dim
    if d == 1:
        value = float(op.matrix[0, 0])
        return value, np.array([[1.0]])
    accel = np.zeros_like(op.matrix)
    power = np.eye(op.matrix.shape[0])
    for _ in range(d):
        accel = accel + power
        power = power @ op.matrix
    vec = sym_to_vec(np.eye(d))
    vec = vec / np.linalg.norm(vec)
    eigenvalue = None
    converged = False
    previous_low = None
    for _ in range(max_iter):
        image = accel @ vec
        scale = np.linalg.norm(image)
        if scale == 0.0:
            raise DegenerateEigenmatrixError(
                "accelerated transfer iteration collapsed to zero",
                eigenmatrix=vec_to_sym(vec, d), min_eigenvalue=0.0)
        vec = image / scale
        accel_value = float(vec @ (accel @ vec))
        candidate = _eigenvalue_from_accelerated(op, vec, accel_value, d)
        residual = np.linalg.norm(op.matrix @ vec - candidate * vec)
        eigenvalue = candidate
        if residual > tol * max(1.0, abs(candidate)):
            continue
        # Residual convergence alone cannot distinguish an eigenmatrix
        # with a genuinely small eigenvalue from one whose smallest
        # eigenvalue is still decaying toward zero (reducible input).
        # Keep iterating while the low end shrinks geometrically; it
        # either crosses the degeneracy floor or stabilizes.
        eigenmatrix = vec_to_sym(vec, d)
        eigs = np.linalg.eigvalsh(eigenmatrix)
        low = float(eigs[0])
        if low <= tol * max(abs(float(eigs[-1])), 1e-300):
            raise DegenerateEigenmatrixError(
                "Perron eigenmatrix is not positive definite "
                "(minimum eigenvalue %.3e); the tuple is reducible or "
                "nearly so" % low, eigenmatrix=eigenmatrix,
                min_eigenvalue=low)
        if previous_low is not None and low >= 0.99 * previous_low:
            converged = True
            break
        previous_low = low
    if not converged:
        raise NotConvergedError(
            "power iteration did not reach tolerance %g in %d iterations"
            % (tol, max_iter), iterations=max_iter, residual=float(residual))
    eigenmatrix = vec_to_sym(vec, d)
    eigenmatrix = 0.5 * (eigenmatrix + eigenmatrix.T)
    return float(eigenvalue), eigenmatrix


def _eigenvalue_from_accelerated(op, vec, accel_value, d):
    """Recover the transfer eigenvalue from the accelerated one.

    The accelerated eigenvalue is sum_{k<d} lam^k, strictly increasing in
    lam >= 0, so the positive root is unique; small degrees use the
    closed forms, larger ones the polynomial solver, with the Rayleigh
    quotient as fallback.
    """
    rayleigh = float(vec @ (op.matrix @ vec))
    if d == 2:
        return accel_value - 1.0
    if d <= 4:
        coeffs = [1.0] * d
        coeffs[-1] = 1.0 - accel_value
        roots = np.roots(coeffs)
        real = [r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 0]
        if real:
            return min(real, key=lambda r: abs(r - rayleigh))
    return rayleigh


@dataclass
class KusuokaData:
    """Equilibrium data at s = 2 for an irreducible tuple.

    pushforward_eigenmatrix has unit Frobenius norm; the joint scale is
    absorbed into pullback_eigenmatrix so that the trace pairing of the
    two eigenmatrices is 1.  Factors satisfy
    pullback_eigenmatrix = pullback_factor^T pullback_factor and
    likewise on the pushforward side.
    """

    source: MatrixTuple
    pressure_value: float
    pullback_eigenmatrix: np.ndarray
    pushforward_eigenmatrix: np.ndarray
    pullback_factor: np.ndarray
    pushforward_factor: np.ndarray
    residuals: dict

    @property
    def growth(self):
        """e^P, the common Perron value of both transfer operators."""
        return math.exp(self.pressure_value)


def kusuoka_measure(t: MatrixTuple, tol=1e-12, max_iter=10000,
                    verify_irreducible=True) -> KusuokaData:
    """Equilibrium data for the tuple at exponent 2.

    verify_irreducible runs the bounded witness search first and warns on
    a witness; the positive-definiteness check in perron_eigen is the
    hard safety either way.
    """
    if verify_irreducible and t.dim > 1:
        verdict = find_invariant_subspace(t, SearchBudget())
        if verdict.witness is not None:
            warnings.warn(
                "tuple admits an invariant subspace of dimension %d; "
                "equilibrium data will be degenerate" % verdict.witness.dim,
                stacklevel=2)
    pull = build_transfer_operator(t, PULLBACK)
    push = build_transfer_operator(t, PUSHFORWARD)
    value_pull, q_pull = perron_eigen(pull, tol=tol, max_iter=max_iter)
    value_push, q_push = perron_eigen(push, tol=tol, max_iter=max_iter)
    vec_pull = sym_to_vec(q_pull)
    vec_push = sym_to_vec(q_push)
    residual_pull = float(np.linalg.norm(
        pull.matrix @ vec_pull - value_pull * vec_pull)) / max(value_pull, 1e-300)
    residual_push = float(np.linalg.norm(
        push.matrix @ vec_push - value_push * vec_push)) / max(value_push, 1e-300)
    pairing = float(np.sum(q_pull * q_push))
    if pairing <= 0:
        raise DegenerateEigenmatrixError(
            "eigenmatrix trace pairing is not positive", eigenmatrix=q_pull,
            min_eigenvalue=pairing)
    q_pull = q_pull / pairing
    pull_factor = np.linalg.cholesky(q_pull).T
    push_factor = np.linalg.cholesky(q_push).T
    return KusuokaData(
        source=t,
        pressure_value=math.log(value_pull),
        pullback_eigenmatrix=q_pull,
        pushforward_eigenmatrix=q_push,
        pullback_factor=pull_factor,
        pushforward_factor=push_factor,
        residuals={
            "pullback": float(residual_pull),
            "pushforward": float(residual_push),
            "eigenvalue_gap": abs(value_pull - value_push) / max(value_pull, 1e-300),
        })


def cylinder_measure(kd: KusuokaData, word):
    """mu([w]) in closed form; exactly zero iff the product is zero."""
    t = kd.source
    prod = word_product(t, tuple(word))
    if t.policy == EXACT and all(x == 0 for x in prod.flat):
        return 0.0
    mid = kd.pullback_factor @ as_float(prod) @ kd.pushforward_factor.T
    return float(np.sum(mid * mid) * math.exp(-len(word) * kd.pressure_value))


@dataclass
class CylinderTable:
    """Cylinder probabilities for every word up to a maximum length."""

    source: MatrixTuple
    n_max: int
    levels: list  # levels[n-1][k] = mu of the rank-k word of length n

    def measure(self, word):
        if len(word) == 0:
            return 1.0
        return float(self.levels[len(word) - 1][word_index(word, self.source.size)])

    def level(self, length):
        return self.levels[length - 1]

    def words_and_measures(self, length):
        values = self.levels[length - 1]
        for k, w in enumerate(enumerate_words(self.source.size, length)):
            yield w, float(values[k])


def cylinder_table(kd: KusuokaData, n_max, budget=None) -> CylinderTable:
    """Batched cylinder probabilities for all words of length <= n_max."""
    t = kd.source
    levels = []
    left = kd.pullback_factor
    right_t = kd.pushforward_factor.T
    for level in iter_product_levels(t, n_max, budget=budget):
        mids = np.einsum("ab,kbc,cd->kad", left, level.products, right_t)
        sq = np.sum(mids * mids, axis=(1, 2))
        log_weight = 2.0 * level.log_scale - level.length * kd.pressure_value
        levels.append(sq * math.exp(log_weight))
    return CylinderTable(source=t, n_max=n_max, levels=levels)


def consistency_check(kd: KusuokaData, n_max, budget=None):
    """Largest stationarity / total-mass violation on cylinders <= n_max.

    Checks sum-to-one per length and both one-step refinements
    (prepending and appending a symbol) against the closed form.
    """
    table = cylinder_table(kd, n_max, budget=budget)
    size = kd.source.size
    worst = 0.0
    for n in range(1, n_max + 1):
        worst = max(worst, abs(float(np.sum(table.level(n))) - 1.0))
    for n in range(1, n_max):
        coarse = table.level(n)
        fine = table.level(n + 1)
        # appending: children of word rank k are ranks k*M .. k*M+M-1
        appended = fine.reshape(-1, size).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(appended - coarse))))
        # prepending: rank of j.w is j*M^n + rank(w)
        prepended = fine.reshape(size, -1).sum(axis=0)
        worst = max(worst, float(np.max(np.abs(prepended - coarse))))
    return worst


def gibbs_constants(kd: KusuokaData):
    """(c_lower, c_upper) sandwiching mu([w]) e^{nP} / ||A_w||^2."""
    pull_sv = np.linalg.svd(kd.pullback_factor, compute_uv=False)
    push_sv = np.linalg.svd(kd.pushforward_factor, compute_uv=False)
    c_lower = float((pull_sv[-1] * push_sv[-1]) ** 2)
    c_upper = float(kd.source.dim * (pull_sv[0] * push_sv[0]) ** 2)
    return c_lower, c_upper


@dataclass
class GibbsReport:
    """Observed Gibbs ratio range over the nonzero cylinders tested."""

    c_lower: float
    c_upper: float
    min_ratio: float
    max_ratio: float
    argmin_word: tuple
    argmax_word: tuple
    depth: int
    ok: bool


def gibbs_verify(kd: KusuokaData, n_max, budget=None, slack=1e-9):
    """Scan all nonzero cylinders up to n_max for the Gibbs envelope."""
    t = kd.source
    c_lower, c_upper = gibbs_constants(kd)
    min_ratio, max_ratio = math.inf, -math.inf
    argmin_word = argmax_word = ()
    left = kd.pullback_factor
    right_t = kd.pushforward_factor.T
    for level in iter_product_levels(t, n_max, budget=budget):
        norms = level.norms()
        mids = np.einsum("ab,kbc,cd->kad", left, level.products, right_t)
        sq = np.sum(mids * mids, axis=(1, 2))
        nonzero = norms > 0.0
        if not np.any(nonzero):
            continue
        # the level rescale cancels between measure and squared norm
        ratios = sq[nonzero] / norms[nonzero] ** 2
        k_min = int(np.argmin(ratios))
        k_max = int(np.argmax(ratios))
        idxs = np.flatnonzero(nonzero)
        if float(ratios[k_min]) < min_ratio:
            min_ratio = float(ratios[k_min])
            argmin_word = _word_from_rank(int(idxs[k_min]), t.size, level.length)
        if float(ratios[k_max]) > max_ratio:
            max_ratio = float(ratios[k_max])
            argmax_word = _word_from_rank(int(idxs[k_max]), t.size, level.length)
    ok = (min_ratio >= c_lower * (1 - slack) - slack
          and max_ratio <= c_upper * (1 + slack) + slack)
    return GibbsReport(c_lower=c_lower, c_upper=c_upper, min_ratio=min_ratio,
                       max_ratio=max_ratio, argmin_word=argmin_word,
                       argmax_word=argmax_word, depth=n_max, ok=ok)


def _word_from_rank(rank, size, length):
    symbols = []
    for _ in range(length):
        symbols.append(rank % size + 1)
        rank //= size
    return tuple(reversed(symbols))


def lyapunov_top(kd: KusuokaData, n_max, budget=None):
    """Nonincreasing upper estimates of the top Lyapunov exponent.

    Level n contributes (1/n) sum_w mu([w]) log ||A_w||; the running
    minimum is returned since the per-level values are subadditive.
    Zero-measure words are skipped.
    """
    table = cylinder_table(kd, n_max, budget=budget)
    values = []
    best = math.inf
    for level in iter_product_levels(kd.source, n_max, budget=budget):
        n = level.length
        norms = level.norms()
        mus = table.level(n)
        mask = (mus > 0.0) & (norms > 0.0)
        total = float(np.sum(mus[mask] * (np.log(norms[mask]) + level.log_scale)))
        best = min(best, total / n)
        values.append(best)
    return np.array(values)


def lyapunov_spectrum(kd: KusuokaData, n_max, budget=None):
    """Per-level estimates of all d Lyapunov exponents.

    Entry [n-1, i] is (1/n) sum_w mu([w]) log sigma_{i+1}(A_w) over
    words with nonzero measure; singular products give -inf rows.
    """
    table = cylinder_table(kd, n_max, budget=budget)
    d = kd.source.dim
    out = np.empty((n_max, d))
    for level in iter_product_levels(kd.source, n_max, budget=budget):
        n = level.length
        sv = np.linalg.svd(level.products, compute_uv=False)
        mus = table.level(n)
        mask = mus > 0.0
        with np.errstate(divide="ignore"):
            logs = np.log(sv[mask]) + level.log_scale
        weighted = mus[mask, None] * logs
        out[n - 1] = np.sum(weighted, axis=0) / n
    return out


@dataclass
class EntropyEstimate:
    """Block entropies with the three standard rate estimates.

    block[n-1] is the Shannon entropy of the length-n cylinder
    partition; per_symbol = block/n; conditional the first difference
    (the sharp estimator for Markov-like measures); variational the
    complementary estimate pressure - 2 * lyapunov_top.
    """

    block: np.ndarray
    per_symbol: np.ndarray
    conditional: np.ndarray
    variational: np.ndarray

    def gap_at(self, n):
        return abs(self.conditional[n - 1] - self.variational[n - 1])


def entropy_estimate(kd: KusuokaData, n_max, budget=None) -> EntropyEstimate:
    table = cylinder_table(kd, n_max, budget=budget)
    block = np.empty(n_max)
    for n in range(1, n_max + 1):
        mus = table.level(n)
        mus = mus[mus > 0.0]
        block[n - 1] = -float(np.sum(mus * np.log(mus)))
    per_symbol = block / np.arange(1, n_max + 1)
    conditional = np.diff(block, prepend=0.0)
    variational = kd.pressure_value - 2.0 * lyapunov_top(kd, n_max, budget=budget)
    return EntropyEstimate(block=block, per_symbol=per_symbol,
                           conditional=conditional, variational=variational)


def correlation(kd: KusuokaData, first, second, gap, method="closed",
                budget=None):
    """mu([x] cap sigma^{-gap} [y]) for cylinders x, y and gap >= |x|.

    The closed form routes the middle sum through transfer iterates:
    e^{-(gap+|y|) P} tr( (A_x Q_hat A_x^T) . L^{gap-|x|}(A_y^T Q A_y) ).
    method="bruteforce" sums cylinder measures over all middle words
    (the oracle path, budget-guarded).
    """
    first = tuple(first)
    second = tuple(second)
    if gap < len(first):
        raise ValueError("gap must be at least the length of the first word")
    t = kd.source
    if method == "bruteforce":
        middle = gap - len(first)
        count = t.size ** middle
        cap = 10_000_000 if budget is None else budget
        if count > cap:
            raise BudgetExceededError(
                "brute-force correlation needs %d middle words" % count,
                requested=count, cap=cap)
        total = 0.0
        for mid in enumerate_words(t.size, middle):
            total += cylinder_measure(kd, first + mid + second)
        return total
    if method != "closed":
        raise ValueError("method must be 'closed' or 'bruteforce'")
    x_prod = as_float(word_product(t, first))
    y_prod = as_float(word_product(t, second))
    pull = build_transfer_operator(t, PULLBACK)
    outer = x_prod @ kd.pushforward_eigenmatrix @ x_prod.T
    inner = y_prod.T @ kd.pullback_eigenmatrix @ y_prod
    vec = sym_to_vec(inner)
    for _ in range(gap - len(first)):
        vec = pull.matrix @ vec
    inner_evolved = vec_to_sym(vec, t.dim)
    weight = math.exp(-(gap + len(second)) * kd.pressure_value)
    return float(np.sum(outer * inner_evolved) * weight)


@dataclass
class PeripheralSpectrum:
    """Peripheral eigenvalues of the doubled matrix sum_i A_i ox A_i."""

    values: list  # complex eigenvalues with modulus within tol of the radius
    radius: float
    simple: bool

    @property
    def verdict(self):
        return "mixing-consistent" if self.simple else "obstruction suspected"


def peripheral_spectrum(t: MatrixTuple, tol=1e-8) -> PeripheralSpectrum:
    """Eigenvalues of sum A_i ox A_i with modulus within tol of e^P.

    A single simple peripheral eigenvalue (necessarily e^P itself) is
    consistent with mixing; any other peripheral value certifies a
    non-mixing obstruction for irreducible tuples.
    """
    doubled = kronecker_power(t, 2)
    total = None
    for m in doubled.matrices:
        fm = as_float(m)
        total = fm if total is None else total + fm
    eigs = np.linalg.eigvals(total)
    radius = float(np.max(np.abs(eigs)))
    if radius == 0.0:
        return PeripheralSpectrum(values=[0.0 + 0.0j], radius=0.0, simple=False)
    peripheral = [complex(z) for z in eigs
                  if abs(z) >= radius * (1.0 - max(tol, 1e-15))]
    peripheral.sort(key=lambda z: (-abs(z), -z.real, z.imag))
    simple = len(peripheral) == 1 and abs(peripheral[0].imag) <= tol * radius \
        and peripheral[0].real > 0
    return PeripheralSpectrum(values=peripheral, radius=radius, simple=simple)
