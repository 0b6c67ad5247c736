import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from thermoform import classify, core, kusuoka, pressure, registry


def test_zero_entropy_structure_nilpotent2(nilpotent2):
    ps = classify.zero_entropy_structure(nilpotent2)
    assert (ps.period, ps.block_rank, ps.word) == (2, 1, (1, 2))
    # slot ranges are the coordinate axes, swapped each step
    assert ps.subspaces[0].basis.tolist() == [[0, 1]]
    assert ps.subspaces[1].basis.tolist() == [[1, 0]]
    assert classify.verify_periodic_structure(nilpotent2, ps) == []


def test_periodic_structure_clause_violations(nilpotent2):
    good = classify.zero_entropy_structure(nilpotent2)
    swapped = classify.PeriodicStructure(
        period=2, block_rank=1, word=good.word,
        subspaces=(good.subspaces[1], good.subspaces[0]))
    assert "cyclic-mapping" in classify.verify_periodic_structure(nilpotent2,
                                                                  swapped)
    wrong_word = classify.PeriodicStructure(
        period=2, block_rank=1, word=(1, 1), subspaces=good.subspaces)
    failures = classify.verify_periodic_structure(nilpotent2, wrong_word)
    assert failures
    bad_shape = classify.PeriodicStructure(
        period=1, block_rank=1, word=(1,), subspaces=(good.subspaces[0],))
    assert classify.verify_periodic_structure(nilpotent2, bad_shape) == \
        ["shape"]


def test_zero_entropy_absent_for_positive_entropy(notmix2):
    assert classify.zero_entropy_structure(notmix2) is None


def test_multiplicativity_counterexample_alpha(alpha_pair):
    verdict = classify.multiplicative_sr_check(alpha_pair, 2)
    assert not verdict.holds_up_to_budget
    pair = verdict.counterexample
    assert (pair.first, pair.second) == ((1,), (2,))
    assert pair.product_radius == pytest.approx(16 / 25, abs=1e-12)
    assert pair.split_radius == pytest.approx(12 / 25, abs=1e-12)
    assert pair.defect > 0.2


def test_multiplicativity_holds_for_rankone4(rankone4):
    verdict = classify.multiplicative_sr_check(rankone4, 2)
    assert verdict.holds_up_to_budget
    assert verdict.pairs_tested == 400
    assert verdict.counterexample is None


def test_s_independence_witnesses(notmix2, nilpotent2, rankone4):
    result = classify.s_independence_check(notmix2, 3)
    assert result.exponent_rate is None
    assert result.low_value == pytest.approx(math.log(2) / 2, abs=1e-10)
    assert result.high_value == pytest.approx(math.log(2), abs=1e-10)
    # the witness rates reproduce from the words themselves
    for word, value in ((result.low_witness, result.low_value),
                        (result.high_witness, result.high_value)):
        rho = core.spectral_radius(core.word_product(notmix2, word))
        assert math.log(rho) / len(word) == pytest.approx(value, abs=1e-10)
    for t in (nilpotent2, rankone4):
        flat = classify.s_independence_check(t, 6)
        assert flat.exponent_rate == pytest.approx(0.0, abs=1e-12)


def test_rate_links_pressures_across_exponents(rankone4, nilpotent2):
    # when the rate exists, P(2l) = P_0 + 2l * rate for a constant P_0,
    # so consecutive even pressures differ by twice the rate
    for t, rate in ((rankone4, 0.0), (nilpotent2, 0.0)):
        p2 = pressure.pressure_exact_even(t, 1)
        p4 = pressure.pressure_exact_even(t, 2)
        assert p4 - p2 == pytest.approx(2 * rate, abs=1e-8)
    assert pressure.pressure_exact_even(rankone4, 1) == pytest.approx(
        math.log(4), abs=1e-12)


def test_conformal_notmix2_rejected(notmix2):
    result = classify.conformal_conjugacy_check(notmix2)
    assert not result.is_conformal
    assert result.reason == "no-positive-definite-element"
    assert len(result.fixed_space) == 1
    fixed = np.asarray(result.fixed_space[0], dtype=float)
    # fixed direction is the normalized off-diagonal symmetric matrix
    want = np.array([[0.0, 1.0], [1.0, 0.0]]) / math.sqrt(2)
    assert np.allclose(fixed, want, atol=1e-12) or \
        np.allclose(fixed, -want, atol=1e-12)


def test_conformal_rotations_identity_conjugator():
    rot = core.make_tuple([
        [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]],
        [[Fraction(5, 13), Fraction(-12, 13)],
         [Fraction(12, 13), Fraction(5, 13)]],
    ])
    result = classify.conformal_conjugacy_check(rot)
    assert result.is_conformal
    assert result.residual <= 1e-12
    normalized = result.conjugator / result.conjugator[0, 0]
    assert np.allclose(normalized, np.eye(2), atol=1e-10)
    assert result.scalars == pytest.approx((1.0, 1.0), abs=1e-12)


def test_conformal_round_trip_recovers_hidden_basis():
    rot = core.make_tuple([
        [[Fraction(6, 5), Fraction(-8, 5)], [Fraction(8, 5), Fraction(6, 5)]],
        [[Fraction(5, 13), Fraction(-12, 13)],
         [Fraction(12, 13), Fraction(5, 13)]],
    ])
    basis = np.array([[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]],
                     dtype=object)
    hidden = core.conjugate_tuple(rot, basis)
    result = classify.conformal_conjugacy_check(hidden)
    assert result.is_conformal
    assert result.residual <= 1e-8
    conj = result.conjugator
    inv = np.linalg.inv(conj)
    for m, c in zip(hidden.matrices, result.scalars):
        ortho = inv @ core.as_float(m) @ conj / c
        assert np.allclose(ortho.T @ ortho, np.eye(2), atol=1e-8)
    assert result.scalars[0] == pytest.approx(2.0, abs=1e-10)


def test_conformal_singular_generators(rankone4):
    result = classify.conformal_conjugacy_check(rankone4)
    assert not result.is_conformal
    assert result.reason == "not-invertible"


def test_maximal_entropy_verdicts(rankone4):
    kd = kusuoka.kusuoka_measure(rankone4)
    verdict = classify.maximal_entropy_check(kd, 4)
    assert verdict.is_maximal
    assert verdict.max_deviation <= 1e-10
    assert verdict.witness is None


def test_maximal_entropy_fails_for_notmix2(notmix2_kd):
    verdict = classify.maximal_entropy_check(notmix2_kd, 4)
    assert not verdict.is_maximal
    assert verdict.witness is not None


def test_equilibrium_equality_scalar_pairs():
    two_three = core.make_tuple([[[2]], [[3]]])
    four_nine = core.make_tuple([[[4]], [[9]]])
    verdict = classify.equilibrium_equality_check((two_three, 2),
                                                  (four_nine, 1), depth=5)
    assert verdict.equal
    assert verdict.max_defect <= 1e-12
    assert verdict.first_pressure == pytest.approx(math.log(13), abs=1e-12)
    assert verdict.second_pressure == pytest.approx(math.log(13), abs=1e-12)


def test_equilibrium_equality_reflexive(notmix2):
    verdict = classify.equilibrium_equality_check((notmix2, 2), (notmix2, 2),
                                                  depth=4)
    assert verdict.equal
    assert verdict.max_defect == 0.0


def test_equilibrium_equality_detects_difference():
    two_three = core.make_tuple([[[2]], [[3]]])
    verdict = classify.equilibrium_equality_check((two_three, 2),
                                                  (two_three, 1), depth=4)
    assert not verdict.equal
    assert verdict.first_violation == (1,)


def test_equilibrium_equality_symmetric(notmix2, alpha_pair):
    a = classify.equilibrium_equality_check((notmix2, 2), (alpha_pair, 2),
                                            depth=3)
    b = classify.equilibrium_equality_check((alpha_pair, 2), (notmix2, 2),
                                            depth=3)
    assert a.equal == b.equal


def test_equilibrium_equality_conjugation_invariant(notmix2):
    basis = np.array([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]],
                     dtype=object)
    conj = core.conjugate_tuple(notmix2, basis)
    verdict = classify.equilibrium_equality_check((notmix2, 2), (conj, 2),
                                                  depth=4)
    assert verdict.equal


def test_classification_report_notmix2(notmix2):
    report = classify.classification_report(notmix2)
    assert report.errors == {}
    assert report.zero_word is None
    assert not report.irreducibility.reducible
    assert report.mixing_obstruction.level == 2
    assert not report.peripheral.simple
    assert report.zero_entropy is None
    assert report.bernoulli.counterexample is not None
    assert report.conformal.reason == "no-positive-definite-element"
    assert report.s_independence.exponent_rate is None
    assert report.mixing_assessment.startswith("non-mixing evidence")


def test_classification_report_nilpotent2(nilpotent2):
    report = classify.classification_report(nilpotent2)
    assert report.zero_word == (1, 1)
    assert report.zero_entropy is not None
    assert report.zero_entropy.word == (1, 2)
    assert report.s_independence.exponent_rate == pytest.approx(0.0,
                                                                abs=1e-12)


def test_classification_report_reducible_captures_errors():
    t = registry.get_builtin("reducible2")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = classify.classification_report(t)
    assert report.irreducibility.reducible
    assert "equilibrium" in report.errors
    assert report.maximal_entropy is None


def test_classification_report_mixing_family():
    report = classify.classification_report(registry.get_builtin("eps(1)"))
    assert report.mixing_obstruction is None
    assert report.peripheral.simple
    assert report.mixing_assessment.startswith("consistent with mixing")
