import math
from fractions import Fraction

import numpy as np
import pytest

from thermoform import core
from thermoform.errors import BudgetExceededError, TupleFormatError


def test_word_product_reverses_symbol_order(notmix2):
    # The word (1, 2) denotes "first symbol 1, then symbol 2", so the
    # matrix acting last is written leftmost.
    a1 = np.array([[0, 2], [1, 0]])
    a2 = np.array([[0, 1], [2, 0]])
    got = core.as_float(core.word_product(notmix2, (1, 2)))
    assert np.array_equal(got, a2 @ a1)
    got = core.as_float(core.word_product(notmix2, (2, 1, 1)))
    assert np.array_equal(got, a1 @ a1 @ a2)


def test_empty_word_is_identity(notmix2):
    got = core.as_float(core.word_product(notmix2, ()))
    assert np.array_equal(got, np.eye(2))


def test_concatenation_order(notmix2):
    v, w = (1, 2), (2, 2, 1)
    av = core.as_float(core.word_product(notmix2, v))
    aw = core.as_float(core.word_product(notmix2, w))
    joined = core.as_float(core.word_product(notmix2, w + v))
    assert np.allclose(av @ aw, joined)


def test_exact_policy_rejects_floats():
    with pytest.raises(TupleFormatError):
        core.make_tuple([[[0.5, 0], [0, 1]]], policy=core.EXACT)


def test_exact_policy_keeps_fractions():
    t = core.make_tuple([[[Fraction(1, 3), 0], [0, 1]],
                         [[2, 0], [0, 5]]])
    assert t.policy == core.EXACT
    assert t.matrices[0][0, 0] == Fraction(1, 3)


def test_tuple_needs_two_matrices():
    with pytest.raises(TupleFormatError):
        core.make_tuple([[[1, 0], [0, 1]]])


def test_make_tuple_requires_square_and_uniform():
    with pytest.raises(TupleFormatError):
        core.make_tuple([[[1, 2, 3], [4, 5, 6]]])
    with pytest.raises(TupleFormatError):
        core.make_tuple([[[1]], [[1, 0], [0, 1]]])
    with pytest.raises(TupleFormatError):
        core.make_tuple([])


def test_enumerate_words_order_and_count():
    words = list(core.enumerate_words(2, 2))
    assert words == [(1, 1), (1, 2), (2, 1), (2, 2)]
    for w in words:
        assert core.word_index(w, 2) == words.index(w)
    assert list(core.enumerate_words(3, 0)) == [()]


def test_enumerate_words_budget():
    with pytest.raises(BudgetExceededError):
        list(core.enumerate_words(2, 40, budget=1000))


def test_characteristic_polynomial_exact():
    mat = np.array([[Fraction(0), Fraction(2)], [Fraction(1), Fraction(0)]],
                   dtype=object)
    # charpoly of [[0,2],[1,0]] is x^2 - 2
    assert core.characteristic_polynomial(mat) == [Fraction(1), Fraction(0),
                                                   Fraction(-2)]


def test_spectral_radius_exact_small_dims():
    mat = np.array([[Fraction(0), Fraction(2)], [Fraction(1), Fraction(0)]],
                   dtype=object)
    assert core.spectral_radius(mat) == pytest.approx(math.sqrt(2), abs=1e-15)
    diag = np.array([[Fraction(3), Fraction(0)], [Fraction(0), Fraction(-7)]],
                    dtype=object)
    assert core.spectral_radius(diag) == pytest.approx(7.0, rel=1e-12)


def test_spectral_radius_matches_eigvals_on_random_floats():
    rng = np.random.default_rng(7)
    for _ in range(25):
        mat = rng.normal(size=(4, 4))
        want = float(np.max(np.abs(np.linalg.eigvals(mat))))
        assert core.spectral_radius(mat) == pytest.approx(want, rel=1e-9)


def test_kronecker_power_squares_radius(notmix2):
    doubled = core.kronecker_power(notmix2, 2)
    assert doubled.dim == 4
    for orig, big in zip(notmix2.matrices, doubled.matrices):
        assert core.spectral_radius(big) == pytest.approx(
            core.spectral_radius(orig) ** 2, abs=1e-12)


def test_kronecker_power_cap(notmix2):
    with pytest.raises(BudgetExceededError):
        core.kronecker_power(notmix2, 8, cap=64)


def test_transpose_and_conjugate(notmix2):
    tt = core.transpose_tuple(notmix2)
    for orig, flipped in zip(notmix2.matrices, tt.matrices):
        assert np.array_equal(core.as_float(orig).T, core.as_float(flipped))
    basis = np.array([[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]],
                     dtype=object)
    conj = core.conjugate_tuple(notmix2, basis)
    # conjugation preserves every word's spectral radius
    for w in core.enumerate_words(2, 3):
        assert core.spectral_radius(core.word_product(conj, w)) == \
            pytest.approx(core.spectral_radius(core.word_product(notmix2, w)),
                          abs=1e-12)


def test_iter_product_levels_matches_direct_products(notmix2):
    for level in core.iter_product_levels(notmix2, 3):
        scale = math.exp(level.log_scale)
        for k, w in enumerate(core.enumerate_words(2, level.length)):
            direct = core.as_float(core.word_product(notmix2, w))
            assert np.allclose(level.products[k] * scale, direct)


def test_iter_product_levels_rescales_growing_entries():
    big = 10 ** 60
    t = core.make_tuple([[[big, 0], [0, big]], [[big, 0], [0, big]]])
    levels = list(core.iter_product_levels(t, 4))
    # raw entries would hit 1e240; the running scale keeps floats finite
    assert all(np.all(np.isfinite(level.products)) for level in levels)
    assert levels[-1].log_scale == pytest.approx(4 * 60 * math.log(10),
                                                 rel=1e-12)


def test_exact_product_levels_are_exact(nilpotent2):
    levels = core.exact_product_levels(nilpotent2, 4)
    prods = dict(zip(core.enumerate_words(2, 2), levels[1]))
    # repeated symbols annihilate; alternating words are diagonal idempotents
    assert not np.any(prods[(1, 1)])
    assert not np.any(prods[(2, 2)])
    assert prods[(1, 2)][1][1] == 1 and prods[(1, 2)][0][0] == 0
    assert prods[(2, 1)][0][0] == 1 and prods[(2, 1)][1][1] == 0
    for w, p in zip(core.enumerate_words(2, 4), levels[3]):
        assert np.allclose(np.vectorize(float)(p),
                           core.as_float(core.word_product(nilpotent2, w)))
