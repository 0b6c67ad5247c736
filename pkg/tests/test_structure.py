from fractions import Fraction

import numpy as np
import pytest

from thermoform import core, registry, structure
from thermoform.errors import NoConnectingWordError


def test_irreducible_builtins_have_no_witness(notmix2, nilpotent2, rankone4):
    for t in (notmix2, nilpotent2, rankone4):
        verdict = structure.find_invariant_subspace(t)
        assert not verdict.reducible
        assert verdict.witness is None


def test_reducible_pair_found_with_axis_witness():
    t = registry.get_builtin("reducible2")
    verdict = structure.find_invariant_subspace(t)
    assert verdict.reducible
    sub = verdict.witness
    assert sub.dim == 1
    assert sub.is_invariant_under(t)
    # witness is a coordinate axis for the diagonal pair
    row = [abs(x) for x in sub.basis[0]]
    assert sorted(row) == [0, 1]


def test_witness_is_actually_invariant_randomized():
    rng = np.random.default_rng(3)
    # embed a known invariant line at a random angle
    for _ in range(10):
        p = rng.integers(-3, 4, size=(2, 2))
        while abs(np.linalg.det(p)) < 0.5:
            p = rng.integers(-3, 4, size=(2, 2))
        basis = np.array([[Fraction(int(x)) for x in row] for row in p],
                         dtype=object)
        upper = core.make_tuple([[[1, 2], [0, 3]], [[2, -1], [0, 1]]])
        hidden = core.conjugate_tuple(upper, basis)
        verdict = structure.find_invariant_subspace(hidden)
        assert verdict.reducible
        assert verdict.witness.is_invariant_under(hidden)


def test_orbit_span_grows_to_full_space(notmix2):
    sub = structure.orbit_span(notmix2, [Fraction(1), Fraction(0)])
    assert sub.dim == 2


def test_block_triangularize_reducible():
    t = registry.get_builtin("reducible2")
    form = structure.block_triangularize(t)
    assert [b.dim for b in form.blocks] == [1, 1]
    assert structure.verify_block_form(t, form) <= 1e-12


def test_block_triangularize_irreducible_is_single_block(notmix2):
    form = structure.block_triangularize(notmix2)
    assert len(form.blocks) == 1
    assert structure.verify_block_form(notmix2, form) <= 1e-12


def test_strong_irreducibility_notmix2_finds_union(notmix2):
    verdict = structure.strong_irreducibility_scan(notmix2)
    assert verdict.obstruction_found
    union = verdict.union
    assert len(union) == 2
    # the pair of coordinate axes is permuted by both generators
    rows = sorted(tuple(abs(x) for x in sub.basis[0]) for sub in union)
    assert rows == [(0, 1), (1, 0)]


def test_strong_irreducibility_eps_quarter_clean():
    t = registry.get_builtin("eps(1/4)")
    verdict = structure.strong_irreducibility_scan(t)
    assert not verdict.obstruction_found


def test_mixing_obstruction_levels(notmix2):
    obstruction = structure.mixing_obstruction_scan(notmix2, 3)
    assert obstruction is not None
    assert obstruction.level == 2
    assert obstruction.witness.dim == 1
    # the witness axis is invariant for every length-2 product
    pair_tuple = core.make_tuple(
        [core.word_product(notmix2, w) for w in core.enumerate_words(2, 2)],
        policy=notmix2.policy)
    assert obstruction.witness.is_invariant_under(pair_tuple)
    assert structure.mixing_obstruction_scan(registry.get_builtin("eps(1)"),
                                             3) is None


def test_zero_product_search(nilpotent2, notmix2):
    word = structure.zero_product_search(nilpotent2, 4)
    assert word == (1, 1)
    assert not np.any(core.word_product(nilpotent2, word))
    assert structure.zero_product_search(notmix2, 6) is None


def test_connecting_word(nilpotent2):
    a1 = nilpotent2.generator(1)
    a2 = nilpotent2.generator(2)
    word, value = structure.connecting_word(nilpotent2, a1, a2)
    assert word == ()
    assert value == pytest.approx(1.0, abs=1e-12)
    bridged = core.as_float(a1) @ core.as_float(
        core.word_product(nilpotent2, word)) @ core.as_float(a2)
    assert np.any(bridged)
    # two strictly upper-triangular generators never reconnect
    shear = core.make_tuple([[[0, 1], [0, 0]], [[0, 2], [0, 0]]])
    with pytest.raises(NoConnectingWordError):
        structure.connecting_word(shear, shear.generator(1),
                                  shear.generator(1))
    with pytest.raises(ValueError):
        structure.connecting_word(nilpotent2, 0 * core.as_float(a1), a2)


def test_invariant_plane_found_through_dual():
    # both images lie in the z = 0 plane and no common line exists, so
    # the only witness is 2-dimensional (a transposed-side line)
    t = core.make_tuple([
        [[1, 0, 1], [0, 2, 1], [0, 0, 0]],
        [[0, 1, 0], [1, 1, 2], [0, 0, 0]],
    ])
    verdict = structure.find_invariant_subspace(t)
    assert verdict.reducible
    assert verdict.witness.dim == 2
    assert verdict.witness.is_invariant_under(t)
