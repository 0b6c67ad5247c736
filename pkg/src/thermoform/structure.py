"""Invariant-subspace evidence: witness searches and block forms.

A tuple is irreducible when no subspace with 0 < dim < d is invariant
under every generator.  Searches here are bounded-evidence procedures:
a returned witness is always re-verified (exactly under the rational
policy), while "no witness found" only certifies the searched budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla
from .core import (
    DOUBLE, EXACT, MatrixTuple, as_float, batch_operator_norms,
    enumerate_words, exact_product_levels, is_zero_matrix,
    iter_product_levels, operator_norm, spectral_radius, word_product,
)
from .errors import BudgetExceededError, NoConnectingWordError

#: relative rank threshold for floating-point span computations
SPAN_TOL = 1e-10


@dataclass
class SearchBudget:
    """Caps for the witness searches; fixed seed keeps runs deterministic."""

    eig_word_len: int = 3
    random_candidates: int = 64
    seed: int = 20240814
    max_union: int = 16
    scan_product_cap: int = 4096

    def describe(self):
        return {
            "eig_word_len": self.eig_word_len,
            "random_candidates": self.random_candidates,
            "seed": self.seed,
            "max_union": self.max_union,
            "scan_product_cap": self.scan_product_cap,
        }


@dataclass
class Subspace:
    """A linear subspace given by basis rows in canonical (RREF) form."""

    basis: np.ndarray  # (k, d), object Fractions or float
    policy: str = EXACT

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def ambient_dim(self):
        return self.basis.shape[1]

    def contains(self, vector):
        if self.policy == EXACT:
            return exactla.in_row_span(self.basis.tolist(), list(vector))
        return exactla.in_row_span_f(self.basis, vector, tol=SPAN_TOL)

    def is_invariant_under(self, t: MatrixTuple):
        """Check A_i u in span for every basis vector and generator."""
        for m in t.matrices:
            for row in self.basis:
                if not self.contains(m @ row):
                    return False
        return True

    def key(self):
        """Hashable canonical form, used to deduplicate subspaces."""
        if self.policy == EXACT:
            return tuple(tuple(x for x in row) for row in self.basis)
        return tuple(tuple(round(float(x), 9) for x in row) for row in self.basis)

    def to_jsonable(self):
        return [[str(x) if isinstance(x, Fraction) else float(x) for x in row]
                for row in self.basis]


def _canonical_subspace(rows, policy):
    """Canonicalize spanning rows into a Subspace (drops dependencies)."""
    if policy == EXACT:
        basis = exactla.row_space_basis([list(r) for r in rows])
        arr = np.array(basis, dtype=object) if basis else np.zeros((0, len(rows[0])), dtype=object)
        return Subspace(arr, policy=EXACT)
    mat = np.asarray(rows, dtype=float)
    if mat.size == 0:
        return Subspace(np.zeros((0, mat.shape[1])), policy=DOUBLE)
    u, sv, vt = np.linalg.svd(mat)
    k = int(np.sum(sv > SPAN_TOL * sv[0])) if sv.size and sv[0] > 0 else 0
    return Subspace(vt[:k].copy(), policy=DOUBLE)


@dataclass
class IrreducibilityVerdict:
    """Outcome of a bounded invariant-subspace search."""

    witness: Subspace | None
    searched: dict

    @property
    def reducible(self):
        return self.witness is not None


@dataclass
class StrongIrreducibilityVerdict:
    """Outcome of the finite-invariant-union search."""

    union: list | None  # list[Subspace] closed under all generators
    searched: dict

    @property
    def obstruction_found(self):
        return self.union is not None


@dataclass
class MixingObstruction:
    """First product-tuple level with an invariant subspace."""

    level: int
    witness: Subspace


@dataclass
class BlockForm:
    """Simultaneous block upper triangularization.

    basis_change columns list the flag basis; blocks are the diagonal
    block tuples in top-left to bottom-right order.  Each block admits
    no further witness under the budget used to build the form.
    """

    basis_change: np.ndarray
    blocks: list
    policy: str = EXACT


def orbit_span(t: MatrixTuple, vector) -> Subspace:
    """Span of {A_w v : |w| <= d-1}, grown one generator layer at a time.

    The growth stops as soon as the span stabilizes, which also proves
    invariance of the result; a proper orbit span is therefore always an
    invariant subspace containing v.
    """
    d = t.dim
    if t.policy == EXACT:
        vec = np.array([Fraction(x) if not isinstance(x, Fraction) else x
                        for x in vector], dtype=object)
        if all(x == 0 for x in vec):
            raise ValueError("orbit of the zero vector is empty")
    else:
        vec = as_float(np.asarray(vector, dtype=float))
        if not np.any(vec):
            raise ValueError("orbit of the zero vector is empty")
    span = _canonical_subspace([vec], t.policy)
    for _ in range(d - 1):
        if span.dim == d:
            break
        images = [m @ row for m in t.matrices for row in span.basis]
        grown = _canonical_subspace(list(span.basis) + images, t.policy)
        if grown.dim == span.dim:
            break
        span = grown
    return span


def _real_eigenvector_candidates(mats, policy, imag_tol=1e-9):
    """Real eigenvectors of each matrix, cleaned and policy-coerced."""
    out = []
    for m in mats:
        fm = as_float(m)
        try:
            _, vecs = np.linalg.eig(fm)
        except np.linalg.LinAlgError:
            continue
        for j in range(vecs.shape[1]):
            v = vecs[:, j]
            if np.max(np.abs(v.imag)) > imag_tol:
                continue
            v = v.real
            peak = np.max(np.abs(v))
            if peak == 0:
                continue
            v = v / peak
            v[np.abs(v) < 1e-12] = 0.0
            if policy == EXACT:
                out.append([Fraction(x).limit_denominator(10 ** 9) for x in v])
            else:
                out.append(list(v))
    return out


def _candidate_vectors(t: MatrixTuple, budget: SearchBudget):
    """Deterministic candidate pool for the witness search."""
    d = t.dim
    one = Fraction(1) if t.policy == EXACT else 1.0
    zero = Fraction(0) if t.policy == EXACT else 0.0
    for j in range(d):
        yield [one if i == j else zero for i in range(d)]
    pool = list(t.matrices)
    if budget.eig_word_len >= 2:
        level = list(t.matrices)
        for _ in range(budget.eig_word_len - 1):
            level = [g @ p for p in level for g in t.matrices]
            if len(level) > budget.scan_product_cap:
                break
            pool.extend(level)
    nonzero_pool = [m for m in pool
                    if not is_zero_matrix(m, t.policy, t.entry_scale())]
    for vec in _real_eigenvector_candidates(nonzero_pool, t.policy):
        if any(x != 0 for x in vec):
            yield vec
    rng = np.random.default_rng(budget.seed)
    for _ in range(budget.random_candidates):
        nums = rng.integers(-9, 10, size=d)
        dens = rng.integers(1, 10, size=d)
        if not np.any(nums):
            continue
        if t.policy == EXACT:
            yield [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]
        else:
            yield [a / b for a, b in zip(nums, dens)]


def _orthogonal_complement(sub: Subspace) -> Subspace:
    """Exact (or SVD) orthogonal complement, as a canonical Subspace."""
    d = sub.ambient_dim
    if sub.policy == EXACT:
        basis = exactla.nullspace([list(r) for r in sub.basis])
        arr = np.array(basis, dtype=object)
        return _canonical_subspace(list(arr), EXACT)
    mat = np.asarray(sub.basis, dtype=float)
    _, sv, vt = np.linalg.svd(mat, full_matrices=True)
    k = int(np.sum(sv > SPAN_TOL * sv[0])) if sv.size and sv[0] > 0 else 0
    return Subspace(vt[k:].copy(), policy=DOUBLE)


def find_invariant_subspace(t: MatrixTuple, budget: SearchBudget | None = None):
    """Bounded search for a common invariant subspace.

    Candidates are standard basis vectors, real eigenvectors of the
    generators and of short products, then seeded pseudo-random rational
    vectors.  Each candidate's orbit span is tested on the tuple and,
    dualized through the orthogonal complement, on the transpose tuple.
    The first verified witness (by candidate order) is returned.
    """
    budget = budget or SearchBudget()
    d = t.dim
    if d == 1:
        return IrreducibilityVerdict(witness=None, searched=budget.describe())
    transpose = MatrixTuple(tuple(m.T.copy() for m in t.matrices),
                            policy=t.policy, label=t.label)
    for vec in _candidate_vectors(t, budget):
        span = orbit_span(t, vec)
        if 0 < span.dim < d and span.is_invariant_under(t):
            return IrreducibilityVerdict(witness=span, searched=budget.describe())
        dual_span = orbit_span(transpose, vec)
        if 0 < dual_span.dim < d:
            primal = _orthogonal_complement(dual_span)
            if 0 < primal.dim < d and primal.is_invariant_under(t):
                return IrreducibilityVerdict(witness=primal,
                                             searched=budget.describe())
    return IrreducibilityVerdict(witness=None, searched=budget.describe())


def _completion_basis(witness: Subspace, t: MatrixTuple):
    """Invertible basis change whose leading columns span the witness."""
    d = t.dim
    if t.policy == EXACT:
        cols = [list(r) for r in witness.basis]
        extra = exactla.completion_columns(cols, d)
        for j in extra:
            cols.append([Fraction(1 if i == j else 0) for i in range(d)])
        return np.array(cols, dtype=object).T
    rows = np.asarray(witness.basis, dtype=float)
    _, sv, vt = np.linalg.svd(rows, full_matrices=True)
    k = rows.shape[0]
    basis = np.vstack([rows, vt[k:]])
    return basis.T


def block_triangularize(t: MatrixTuple, budget: SearchBudget | None = None):
    """Iterated witness search producing a block upper triangular form."""
    budget = budget or SearchBudget()
    verdict = find_invariant_subspace(t, budget)
    if verdict.witness is None:
        ident = t.identity()
        return BlockForm(basis_change=ident, blocks=[t], policy=t.policy)
    basis = _completion_basis(verdict.witness, t)
    conj = _conjugate_by_columns(t, basis)
    k = verdict.witness.dim
    top = MatrixTuple(tuple(m[:k, :k].copy() for m in conj.matrices),
                      policy=t.policy) if k > 0 else None
    bottom = MatrixTuple(tuple(m[k:, k:].copy() for m in conj.matrices),
                         policy=t.policy)
    top_form = block_triangularize(top, budget)
    bottom_form = block_triangularize(bottom, budget)
    lift = _block_diag(top_form.basis_change, bottom_form.basis_change, t.policy)
    return BlockForm(basis_change=basis @ lift,
                     blocks=top_form.blocks + bottom_form.blocks,
                     policy=t.policy)


def _conjugate_by_columns(t: MatrixTuple, basis):
    if t.policy == EXACT:
        inv = exactla.invert(basis.tolist())
        if inv is None:
            raise ValueError("completion produced a singular basis")
        inv = np.array(inv, dtype=object)
    else:
        inv = np.linalg.inv(as_float(basis))
    return MatrixTuple(tuple(inv @ m @ basis for m in t.matrices),
                       policy=t.policy)


def _block_diag(a, b, policy):
    ka, kb = a.shape[0], b.shape[0]
    d = ka + kb
    if policy == EXACT:
        out = np.array([[Fraction(0)] * d for _ in range(d)], dtype=object)
    else:
        out = np.zeros((d, d))
    out[:ka, :ka] = a
    out[ka:, ka:] = b
    return out


def verify_block_form(t: MatrixTuple, form: BlockForm, word_len=4, tol=1e-9):
    """Check triangularity and the blockwise spectral radius identity.

    Returns the largest violation found over all words up to word_len:
    the sub-diagonal mass of the conjugated generators and the gap
    |rho(A_w) - max_i rho(block_i(w))| relative to the larger of the two.
    """
    conj = _conjugate_by_columns(t, form.basis_change)
    dims = [b.dim for b in form.blocks]
    offsets = np.cumsum([0] + dims)
    worst = 0.0
    for m in conj.matrices:
        fm = as_float(m)
        for bi in range(len(dims)):
            r0, r1 = offsets[bi], offsets[bi + 1]
            below = fm[r1:, r0:r1]
            if below.size:
                worst = max(worst, float(np.max(np.abs(below))))
    for n in range(1, word_len + 1):
        for w in enumerate_words(t.size, n):
            full = spectral_radius(word_product(t, w))
            per_block = max(spectral_radius(word_product(b, w))
                            for b in form.blocks)
            scale = max(full, per_block, 1.0)
            worst = max(worst, abs(full - per_block) / scale)
    return worst


def mixing_obstruction_scan(t: MatrixTuple, depth, budget: SearchBudget | None = None):
    """Scan length-n product tuples for reducibility, n = 1..depth.

    Returns the first obstruction level with its witness, or None when
    every tested product tuple admits no witness (the sufficient mixing
    condition then holds at every tested depth).  The inner search seeds
    eigenvectors from the product tuple's own members only.
    """
    budget = budget or SearchBudget()
    inner = SearchBudget(eig_word_len=1,
                         random_candidates=budget.random_candidates,
                         seed=budget.seed, max_union=budget.max_union,
                         scan_product_cap=budget.scan_product_cap)
    for n in range(1, depth + 1):
        count = t.size ** n
        if count > budget.scan_product_cap:
            raise BudgetExceededError(
                "level %d needs %d products, scan cap %d"
                % (n, count, budget.scan_product_cap),
                requested=count, cap=budget.scan_product_cap)
        if t.policy == EXACT:
            products = exact_product_levels(t, n)[-1]
        else:
            products = [p for p in _float_level(t, n)]
        level_tuple = MatrixTuple(tuple(products), policy=t.policy)
        verdict = find_invariant_subspace(level_tuple, inner)
        if verdict.witness is not None:
            return MixingObstruction(level=n, witness=verdict.witness)
    return None


def _float_level(t: MatrixTuple, n):
    last = None
    for level in iter_product_levels(t, n):
        last = level
    scale = math.exp(last.log_scale) if last.log_scale != 0.0 else 1.0
    return [p * scale for p in last.products]


def zero_product_search(t: MatrixTuple, depth, budget=None):
    """Shortest word with A_w = 0, breadth-first, or None.

    A zero prefix forces all extensions to zero, so the frontier keeps
    only nonzero products; the first zero encountered is the shortest,
    lexicographically first, witness.  Exact under rational policy.
    """
    scale = t.entry_scale()
    frontier = [((), t.identity())]
    examined = 0
    cap = 10_000_000 if budget is None else budget
    for _ in range(depth):
        nxt = []
        for word, prod in frontier:
            for symbol in range(1, t.size + 1):
                examined += 1
                if examined > cap:
                    raise BudgetExceededError(
                        "zero-product search exceeded budget %d" % cap,
                        requested=examined, cap=cap)
                cand = t.generator(symbol) @ prod
                new_word = word + (symbol,)
                if is_zero_matrix(cand, t.policy, scale ** (len(new_word) + 1)):
                    return new_word
                nxt.append((new_word, cand))
        frontier = nxt
    return None


def connecting_word(t: MatrixTuple, left, right):
    """Word w of length < d maximizing ||left @ A_w @ right||.

    Ties are broken toward the shorter, lexicographically smaller word.
    All-zero candidates are reported as evidence of reducibility.
    """
    left_f = as_float(left)
    right_f = as_float(right)
    if not np.any(left_f) or not np.any(right_f):
        raise ValueError("connecting factors must be nonzero")
    best_word, best_value = None, 0.0
    for n in range(t.dim):
        for w in enumerate_words(t.size, n):
            value = operator_norm(left_f @ as_float(word_product(t, w)) @ right_f)
            if value > best_value * (1 + 1e-12) and value > 0.0:
                best_word, best_value = w, value
    if best_word is None:
        raise NoConnectingWordError(
            "every word of length < %d connects to zero; "
            "this cannot happen for an irreducible tuple" % t.dim)
    return best_word, best_value


def strong_irreducibility_scan(t: MatrixTuple, budget: SearchBudget | None = None):
    """Search for a finite union of proper subspaces fixed by the tuple.

    Seeds are real eigenspaces of generators and short products; each
    seed's orbit under subspace images is closed until it stabilizes or
    exceeds the union cap.  A stabilized union is verified member by
    member before being returned.
    """
    budget = budget or SearchBudget()
    d = t.dim
    if d == 1:
        return StrongIrreducibilityVerdict(union=None, searched=budget.describe())
    pool = list(t.matrices)
    level = list(t.matrices)
    for _ in range(budget.eig_word_len - 1):
        level = [g @ p for p in level for g in t.matrices]
        if len(level) > budget.scan_product_cap:
            break
        pool.extend(level)
    nonzero_pool = [m for m in pool
                    if not is_zero_matrix(m, t.policy, t.entry_scale())]
    seeds = []
    seen = set()
    for vec in _real_eigenvector_candidates(nonzero_pool, t.policy):
        if all(x == 0 for x in vec):
            continue
        sub = _canonical_subspace([np.array(vec, dtype=object if t.policy == EXACT else float)],
                                  t.policy)
        if sub.key() not in seen:
            seen.add(sub.key())
            seeds.append(sub)
    for seed in seeds:
        union = _close_union(t, seed, budget.max_union)
        if union is not None:
            return StrongIrreducibilityVerdict(union=union,
                                               searched=budget.describe())
    return StrongIrreducibilityVerdict(union=None, searched=budget.describe())


def _image_subspace(t: MatrixTuple, mat, sub: Subspace):
    rows = [mat @ row for row in sub.basis]
    nonzero = [r for r in rows if any(x != 0 for x in r)] if t.policy == EXACT \
        else [r for r in rows if np.max(np.abs(as_float(r))) > 1e-12]
    if not nonzero:
        return None
    return _canonical_subspace(nonzero, t.policy)


def _close_union(t: MatrixTuple, seed: Subspace, max_union):
    members = {seed.key(): seed}
    frontier = [seed]
    while frontier:
        sub = frontier.pop()
        for m in t.matrices:
            image = _image_subspace(t, m, sub)
            if image is None:
                continue
            if image.dim >= t.dim:
                return None
            if image.key() not in members:
                if len(members) >= max_union:
                    return None
                members[image.key()] = image
                frontier.append(image)
    union = list(members.values())
    # verification pass: every generator maps every member into the union
    for sub in union:
        for m in t.matrices:
            image = _image_subspace(t, m, sub)
            if image is None:
                continue
            if image.key() not in members and not any(
                    _contained_in(image, other) for other in union):
                return None
    return union


def _contained_in(inner: Subspace, outer: Subspace):
    return all(outer.contains(row) for row in inner.basis)
