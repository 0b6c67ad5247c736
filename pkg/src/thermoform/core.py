"""Finite matrix tuples, words, and product machinery.

A tuple is an ordered list of M >= 2 real d x d matrices indexed by the
alphabet {1, ..., M}.  A word w = (x_1, ..., x_n) selects the product

    A_w = A[x_n] @ ... @ A[x_1]

(reverse order: the first symbol acts first).  The empty word gives the
identity.  Scalars follow one of two policies: "exact-rational" keeps
every entry a fractions.Fraction so products, traces, and squared
Frobenius norms are exact, while "double-precision" uses float64.
Eigenvalue-dependent quantities (operator norms, spectral radii) are
always computed in double precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla
from .errors import BudgetExceededError, TupleFormatError

EXACT = "exact-rational"
DOUBLE = "double-precision"

#: default cap on the total number of word products an enumeration may build
DEFAULT_PRODUCT_BUDGET = 10_000_000

#: default cap on the dimension d**power of a Kronecker power tuple
DEFAULT_KRON_CAP = 64

#: magnitudes beyond which batched product levels are rescaled into log space
RESCALE_HIGH = 1e100
RESCALE_LOW = 1e-100

Word = tuple  # tuple[int, ...]; symbols are 1-based


def _coerce_exact(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        raise TupleFormatError(
            "float entry %r not allowed under exact-rational policy" % value)
    raise TupleFormatError("cannot interpret %r as a rational scalar" % (value,))


def exact_matrix(rows):
    """Build an object-dtype matrix of Fractions from nested data."""
    data = [[_coerce_exact(x) for x in row] for row in rows]
    return np.array(data, dtype=object)


def float_matrix(rows):
    mat = np.array([[float(x) for x in row] for row in rows], dtype=float)
    if not np.all(np.isfinite(mat)):
        raise TupleFormatError("matrix entries must be finite")
    return mat


def as_float(mat):
    """View any policy matrix as float64."""
    return np.asarray(mat, dtype=float)


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """An ordered tuple of square real matrices over a scalar policy."""

    matrices: tuple
    policy: str = EXACT
    label: str | None = None

    def __post_init__(self):
        if self.policy not in (EXACT, DOUBLE):
            raise TupleFormatError("unknown scalar policy %r" % self.policy)
        if len(self.matrices) < 2:
            raise TupleFormatError("a tuple needs at least two matrices")
        dims = set()
        for m in self.matrices:
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise TupleFormatError("matrices must be square")
            dims.add(m.shape[0])
        if len(dims) != 1:
            raise TupleFormatError("matrices must share one dimension")

    @classmethod
    def from_rows(cls, matrices, policy=EXACT, label=None):
        if policy == EXACT:
            mats = tuple(exact_matrix(m) for m in matrices)
        else:
            mats = tuple(float_matrix(m) for m in matrices)
        return cls(mats, policy=policy, label=label)

    @property
    def size(self):
        """Alphabet size M."""
        return len(self.matrices)

    @property
    def dim(self):
        """Matrix dimension d."""
        return self.matrices[0].shape[0]

    def generator(self, symbol):
        """Matrix for a 1-based symbol."""
        self.check_symbol(symbol)
        return self.matrices[symbol - 1]

    def check_symbol(self, symbol):
        if not (isinstance(symbol, (int, np.integer)) and 1 <= symbol <= self.size):
            raise ValueError(
                "symbol %r out of range 1..%d" % (symbol, self.size))

    def identity(self):
        if self.policy == EXACT:
            return np.array(
                [[Fraction(1 if i == j else 0) for j in range(self.dim)]
                 for i in range(self.dim)], dtype=object)
        return np.eye(self.dim)

    def floats(self):
        """Generators stacked as a float array of shape (M, d, d)."""
        return np.stack([as_float(m) for m in self.matrices])

    def entry_scale(self):
        """Largest generator entry magnitude; scale for zero thresholds."""
        return max(1.0, float(np.max(np.abs(self.floats()))))


def make_tuple(matrices, policy=EXACT, label=None):
    return MatrixTuple.from_rows(matrices, policy=policy, label=label)


def word_product(t: MatrixTuple, word):
    """Product A[x_n] @ ... @ A[x_1] for word (x_1, ..., x_n)."""
    out = t.identity()
    for symbol in word:
        out = t.generator(symbol) @ out
    return out


def enumerate_words(size, length, budget=None):
    """All words of a given length in lexicographic order."""
    if length < 0:
        raise ValueError("word length must be nonnegative")
    count = size ** length
    cap = DEFAULT_PRODUCT_BUDGET if budget is None else budget
    if count > cap:
        raise BudgetExceededError(
            "enumerating %d words exceeds budget %d" % (count, cap),
            requested=count, cap=cap)
    return itertools.product(range(1, size + 1), repeat=length)


def word_index(word, size):
    """Rank of the word among all words of its length, lexicographic."""
    idx = 0
    for symbol in word:
        idx = idx * size + (symbol - 1)
    return idx


def is_zero_matrix(mat, policy=EXACT, scale=1.0):
    """Zero test: exact under rational policy, thresholded under double."""
    if policy == EXACT and mat.dtype == object:
        return all(x == 0 for x in mat.flat)
    return bool(np.max(np.abs(as_float(mat))) <= 1e-14 * max(1.0, scale))


def operator_norm(mat):
    """Largest singular value (Euclidean operator norm)."""
    m = as_float(mat)
    if not np.any(m):
        return 0.0
    return float(np.linalg.norm(m, 2))


def frobenius_norm_squared(mat):
    """Sum of squared entries; exact Fraction under rational policy."""
    if mat.dtype == object:
        total = Fraction(0)
        for x in mat.flat:
            total += x * x
        return total
    return float(np.sum(as_float(mat) ** 2))


def frobenius_norm(mat):
    return math.sqrt(float(frobenius_norm_squared(mat)))


def characteristic_polynomial(mat):
    """Monic characteristic polynomial coefficients, highest degree first.

    Uses the trace recursion, so coefficients are exact Fractions when
    the input is an object-dtype rational matrix.
    """
    d = mat.shape[0]
    exact = mat.dtype == object
    ident = np.array(
        [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)],
        dtype=object) if exact else np.eye(d)
    coeffs = [Fraction(1) if exact else 1.0]
    aux = ident
    for k in range(1, d + 1):
        am = mat @ aux
        trace = sum(am[i, i] for i in range(d)) if exact else float(np.trace(am))
        ck = -trace / k
        coeffs.append(ck)
        aux = am + ck * ident
    return coeffs


def spectral_radius(mat):
    """Largest eigenvalue modulus.

    Small matrices (d <= 4) go through characteristic polynomial roots,
    which stays exact through the coefficients under rational policy;
    larger ones use the LAPACK eigensolver.
    """
    d = mat.shape[0]
    if d == 1:
        return abs(float(mat[0, 0]))
    if d <= 4:
        coeffs = [float(c) for c in characteristic_polynomial(mat)]
        roots = np.roots(coeffs)
        return float(np.max(np.abs(roots))) if roots.size else 0.0
    eigs = np.linalg.eigvals(as_float(mat))
    return float(np.max(np.abs(eigs)))


def batch_operator_norms(stack):
    """Operator norms of a (K, d, d) float stack."""
    if stack.shape[0] == 0:
        return np.zeros(0)
    sv = np.linalg.svd(stack, compute_uv=False)
    return sv[:, 0]


def batch_spectral_radii(stack):
    """Spectral radii of a (K, d, d) float stack."""
    if stack.shape[0] == 0:
        return np.zeros(0)
    eigs = np.linalg.eigvals(stack)
    return np.max(np.abs(eigs), axis=1)


def kronecker_power(t: MatrixTuple, power, cap=DEFAULT_KRON_CAP):
    """Memberwise Kronecker power tuple (A_1^{ox l}, ..., A_M^{ox l})."""
    if power < 1:
        raise ValueError("Kronecker power must be >= 1")
    new_dim = t.dim ** power
    if new_dim > cap:
        raise BudgetExceededError(
            "Kronecker power dimension %d exceeds cap %d" % (new_dim, cap),
            requested=new_dim, cap=cap)
    if power == 1:
        return MatrixTuple(tuple(m.copy() for m in t.matrices),
                           policy=t.policy, label=t.label)
    mats = []
    for m in t.matrices:
        out = m
        for _ in range(power - 1):
            out = np.kron(out, m)
        mats.append(out)
    return MatrixTuple(tuple(mats), policy=t.policy, label=t.label)


def transpose_tuple(t: MatrixTuple):
    """Memberwise transpose, order preserved."""
    return MatrixTuple(tuple(m.T.copy() for m in t.matrices),
                       policy=t.policy, label=t.label)


def conjugate_tuple(t: MatrixTuple, basis):
    """Simultaneous conjugation B^{-1} A_i B by an invertible matrix."""
    if t.policy == EXACT:
        basis = exact_matrix(basis)
        inv = exactla.invert(basis)
        if inv is None:
            raise ValueError("basis change matrix is singular")
        inv = np.array(inv, dtype=object)
    else:
        basis = as_float(basis)
        if abs(np.linalg.det(basis)) < 1e-300:
            raise ValueError("basis change matrix is singular")
        inv = np.linalg.inv(basis)
    mats = tuple(inv @ m @ basis for m in t.matrices)
    return MatrixTuple(mats, policy=t.policy, label=t.label)


@dataclass
class ProductLevel:
    """All word products of one length, in lexicographic word order.

    products[k] stores A_w / exp(log_scale) for the word of rank k, as a
    float array.  log_scale is shared by the whole level and is zero
    until entries leave the representable range.
    """

    length: int
    products: np.ndarray
    log_scale: float = 0.0

    def norms(self):
        return batch_operator_norms(self.products)

    def spectral_radii(self):
        return batch_spectral_radii(self.products)


def iter_product_levels(t: MatrixTuple, depth, budget=None):
    """Yield ProductLevel for lengths 1..depth (float fast path).

    The lexicographic tree is extended one symbol at a time: the word of
    rank k at length n spawns ranks k*M + j at length n+1.  A cumulative
    budget guards the total number of products formed.
    """
    cap = DEFAULT_PRODUCT_BUDGET if budget is None else budget
    gens = t.floats()
    size = t.size
    total = 0
    current = np.broadcast_to(np.eye(t.dim), (1, t.dim, t.dim))
    log_scale = 0.0
    for n in range(1, depth + 1):
        total += current.shape[0] * size
        if total > cap:
            raise BudgetExceededError(
                "product enumeration to depth %d needs %d products, cap %d"
                % (depth, total, cap), requested=total, cap=cap)
        # new rank = old rank * M + (symbol - 1): stack symbol axis last
        nxt = np.einsum("jab,kbc->kjac", gens, current)
        nxt = nxt.reshape(-1, t.dim, t.dim)
        peak = float(np.max(np.abs(nxt))) if nxt.size else 0.0
        if peak > RESCALE_HIGH or (0.0 < peak < RESCALE_LOW):
            nxt = nxt / peak
            log_scale += math.log(peak)
        current = nxt
        yield ProductLevel(length=n, products=current, log_scale=log_scale)


def exact_product_levels(t: MatrixTuple, depth, budget=None):
    """Word products per length in exact arithmetic (lists of matrices)."""
    cap = DEFAULT_PRODUCT_BUDGET if budget is None else budget
    size = t.size
    levels = []
    current = [t.identity()]
    total = 0
    for _ in range(1, depth + 1):
        total += len(current) * size
        if total > cap:
            raise BudgetExceededError(
                "exact product enumeration exceeds cap %d" % cap,
                requested=total, cap=cap)
        current = [g @ p for p in current for g in t.matrices]
        levels.append(current)
    return levels
