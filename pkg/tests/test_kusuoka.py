import math
from fractions import Fraction

import numpy as np
import pytest

from thermoform import core, kusuoka, registry
from thermoform.errors import DegenerateEigenmatrixError

# Independent oracle for the notmix2 equilibrium state: an average of
# two 2-block Bernoulli measures with these block weights.
BLOCK = {(1, 1): Fraction(4, 25), (1, 2): Fraction(1, 25),
         (2, 1): Fraction(16, 25), (2, 2): Fraction(4, 25)}


def _block_measure(word):
    if len(word) % 2 == 1:
        return sum(_block_measure(word + (s,)) for s in (1, 2))
    out = Fraction(1)
    for i in range(0, len(word), 2):
        out *= BLOCK[word[i], word[i + 1]]
    return out


def _oracle_measure(word):
    straight = _block_measure(word)
    shifted = sum(_block_measure((z,) + word) for z in (1, 2))
    return Fraction(1, 2) * (straight + shifted)


def test_pinned_cylinders(notmix2_kd):
    assert kusuoka.cylinder_measure(notmix2_kd, (1, 1)) == pytest.approx(
        4 / 25, abs=1e-10)
    assert kusuoka.cylinder_measure(notmix2_kd, (1, 2)) == pytest.approx(
        17 / 50, abs=1e-10)
    assert kusuoka.cylinder_measure(notmix2_kd, (2, 1)) == pytest.approx(
        17 / 50, abs=1e-10)
    assert kusuoka.cylinder_measure(notmix2_kd, (2, 2)) == pytest.approx(
        4 / 25, abs=1e-10)


def test_two_block_oracle_all_words(notmix2_kd):
    table = kusuoka.cylinder_table(notmix2_kd, 8)
    for n in range(1, 9):
        level = table.level(n)
        for k, w in enumerate(core.enumerate_words(2, n)):
            assert float(level[k]) == pytest.approx(
                float(_oracle_measure(w)), abs=1e-10)


def test_eigen_data_invariants(notmix2_kd):
    kd = notmix2_kd
    assert kd.pressure_value == pytest.approx(math.log(5), abs=1e-12)
    assert kd.residuals["pullback"] <= 1e-10
    assert kd.residuals["pushforward"] <= 1e-10
    assert kd.residuals["eigenvalue_gap"] <= 1e-10
    pairing = float(np.sum(kd.pullback_eigenmatrix
                           * kd.pushforward_eigenmatrix))
    assert pairing == pytest.approx(1.0, abs=1e-12)
    for mat in (kd.pullback_eigenmatrix, kd.pushforward_eigenmatrix):
        assert np.min(np.linalg.eigvalsh(mat)) > 0


def test_transfer_operator_apply_matches_matrix(notmix2):
    op = kusuoka.build_transfer_operator(notmix2)
    rng = np.random.default_rng(11)
    for _ in range(5):
        sym = rng.normal(size=(2, 2))
        sym = sym + sym.T
        via_matrix = kusuoka.vec_to_sym(
            op.matrix @ kusuoka.sym_to_vec(sym), 2)
        assert np.allclose(op.apply(sym), via_matrix, atol=1e-12)
        direct = sum(core.as_float(m).T @ sym @ core.as_float(m)
                     for m in notmix2.matrices)
        assert np.allclose(op.apply(sym), direct, atol=1e-12)


def test_sym_vec_round_trip():
    rng = np.random.default_rng(4)
    for d in (1, 2, 3, 4):
        sym = rng.normal(size=(d, d))
        sym = sym + sym.T
        vec = kusuoka.sym_to_vec(sym)
        assert vec.shape == (d * (d + 1) // 2,)
        assert np.allclose(kusuoka.vec_to_sym(vec, d), sym)
        # the embedding is isometric for the Frobenius inner product
        assert float(vec @ vec) == pytest.approx(float(np.sum(sym * sym)),
                                                 rel=1e-12)


def test_consistency_and_mass(notmix2_kd, nilpotent2_kd, alpha_kd):
    for kd in (notmix2_kd, nilpotent2_kd, alpha_kd):
        assert kusuoka.consistency_check(kd, 8) <= 1e-10


def test_gibbs_constants_and_verify(notmix2_kd, alpha_kd):
    c_lower, c_upper = kusuoka.gibbs_constants(notmix2_kd)
    assert c_lower == pytest.approx(0.5, abs=1e-9)
    assert c_upper == pytest.approx(1.0, abs=1e-9)
    report = kusuoka.gibbs_verify(notmix2_kd, 10)
    assert report.ok
    assert c_lower - 1e-9 <= report.min_ratio <= report.max_ratio
    assert report.max_ratio <= c_upper + 1e-9
    assert len(report.argmin_word) <= 10
    a_lower, a_upper = kusuoka.gibbs_constants(alpha_kd)
    assert a_lower == pytest.approx(0.5, abs=1e-9)
    assert a_upper == pytest.approx(1.0, abs=1e-9)


def test_gibbs_scalar_tuple():
    kd = kusuoka.kusuoka_measure(core.make_tuple([[[2]], [[3]]]))
    c_lower, c_upper = kusuoka.gibbs_constants(kd)
    assert c_lower == pytest.approx(1.0, abs=1e-12)
    assert c_upper == pytest.approx(1.0, abs=1e-12)


def test_scalar_equilibrium_closed_form():
    kd = kusuoka.kusuoka_measure(core.make_tuple([[[2]], [[3]]]))
    assert kd.pressure_value == pytest.approx(math.log(13), abs=1e-12)
    assert kusuoka.cylinder_measure(kd, (1,)) == pytest.approx(4 / 13,
                                                               abs=1e-12)
    assert kusuoka.cylinder_measure(kd, (2,)) == pytest.approx(9 / 13,
                                                               abs=1e-12)
    top = kusuoka.lyapunov_top(kd, 3)
    want = (4 / 13) * math.log(2) + (9 / 13) * math.log(3)
    assert np.allclose(top, want, atol=1e-12)
    est = kusuoka.entropy_estimate(kd, 4)
    # Bernoulli case: conditional entropy is flat and the variational
    # identity pressure = entropy + 2 * lyapunov holds exactly
    assert np.allclose(est.conditional, est.conditional[0], atol=1e-12)
    assert np.allclose(est.variational, est.conditional, atol=1e-12)


def test_entropy_estimators_agree(notmix2_kd):
    est = kusuoka.entropy_estimate(notmix2_kd, 10)
    assert est.block.shape == (10,)
    assert est.block[0] == pytest.approx(math.log(2), abs=1e-10)
    assert est.gap_at(10) < 0.05
    assert abs(est.per_symbol[-1] - est.conditional[-1]) < 0.1
    # block entropy is nondecreasing and subadditive
    assert np.all(np.diff(est.block) > -1e-12)


def test_lyapunov_spectrum_det_sum(notmix2_kd):
    spectrum = kusuoka.lyapunov_spectrum(notmix2_kd, 6)
    # |det A_w| = 2^n for every word, so the exponents sum to log 2
    assert np.allclose(spectrum.sum(axis=1), math.log(2), atol=1e-10)
    # top exponent estimates dominate the second row
    assert np.all(spectrum[:, 0] >= spectrum[:, 1] - 1e-12)


def test_lyapunov_top_is_running_min(notmix2_kd):
    top = kusuoka.lyapunov_top(notmix2_kd, 8)
    assert np.all(np.diff(top) <= 1e-15)


def test_correlation_oscillates(notmix2_kd):
    # joint measures alternate around the product value 1/4
    for gap in range(1, 9):
        got = kusuoka.correlation(notmix2_kd, (1,), (1,), gap)
        want = 0.25 + 0.09 * (-1) ** gap
        assert got == pytest.approx(want, abs=1e-10)


def test_correlation_closed_equals_bruteforce(notmix2_kd, alpha_kd):
    for kd in (notmix2_kd, alpha_kd):
        for first, second, gap in (((1,), (2,), 1), ((1, 2), (2, 1), 4),
                                   ((2,), (1, 1), 5)):
            closed = kusuoka.correlation(kd, first, second, gap)
            brute = kusuoka.correlation(kd, first, second, gap,
                                        method="bruteforce")
            assert closed == pytest.approx(brute, abs=1e-12)


def test_correlation_validates_gap(notmix2_kd):
    with pytest.raises(ValueError):
        kusuoka.correlation(notmix2_kd, (1, 2), (1,), 1)
    with pytest.raises(ValueError):
        kusuoka.correlation(notmix2_kd, (1,), (2,), 3, method="typo")


def test_quasi_product_bound(notmix2_kd, alpha_kd):
    # joint cylinder mass is controlled by the fourth power of the
    # Gibbs constant ratio times the product of the masses
    for kd in (notmix2_kd, alpha_kd):
        c_lower, c_upper = kusuoka.gibbs_constants(kd)
        cap = (c_upper / c_lower) ** 4 * (1 + 1e-9)
        words = list(core.enumerate_words(2, 1)) + \
            list(core.enumerate_words(2, 2))
        for x in words:
            mu_x = kusuoka.cylinder_measure(kd, x)
            for y in words:
                mu_y = kusuoka.cylinder_measure(kd, y)
                for gap in range(len(x), 21):
                    joint = kusuoka.correlation(kd, x, y, gap)
                    assert joint <= cap * mu_x * mu_y + 1e-15


def test_conjugation_invariance(notmix2, notmix2_kd):
    basis = np.array([[Fraction(1), Fraction(2)],
                      [Fraction(1), Fraction(1)]], dtype=object)
    conj = core.conjugate_tuple(notmix2, basis)
    kd_conj = kusuoka.kusuoka_measure(conj)
    assert kd_conj.pressure_value == pytest.approx(
        notmix2_kd.pressure_value, abs=1e-10)
    for n in range(1, 7):
        for w in core.enumerate_words(2, n):
            assert kusuoka.cylinder_measure(kd_conj, w) == pytest.approx(
                kusuoka.cylinder_measure(notmix2_kd, w), abs=1e-10)


def test_transpose_symmetry(notmix2, notmix2_kd):
    kd_t = kusuoka.kusuoka_measure(core.transpose_tuple(notmix2))
    assert kd_t.pressure_value == pytest.approx(notmix2_kd.pressure_value,
                                                abs=1e-12)


def test_peripheral_spectrum_verdicts(notmix2):
    per = kusuoka.peripheral_spectrum(notmix2)
    assert per.radius == pytest.approx(5.0, abs=1e-9)
    values = sorted(z.real for z in per.values)
    assert values == pytest.approx([-5.0, 5.0], abs=1e-9)
    assert not per.simple
    assert per.verdict == "obstruction suspected"

    mixing = kusuoka.peripheral_spectrum(registry.get_builtin("eps(1)"))
    assert mixing.simple
    assert mixing.verdict == "mixing-consistent"

    scalar = kusuoka.peripheral_spectrum(core.make_tuple([[[2]], [[3]]]))
    assert scalar.radius == pytest.approx(13.0, abs=1e-9)
    assert scalar.simple


def test_degenerate_pair_rejected():
    t = registry.get_builtin("reducible2")
    with pytest.warns(UserWarning):
        with pytest.raises(DegenerateEigenmatrixError):
            kusuoka.kusuoka_measure(t)
    # silencing the witness search still hits the hard check
    with pytest.raises(DegenerateEigenmatrixError):
        kusuoka.kusuoka_measure(t, verify_irreducible=False)


def test_zero_cylinders_are_exact_zero(nilpotent2_kd):
    assert kusuoka.cylinder_measure(nilpotent2_kd, (1, 1)) == 0.0
    assert kusuoka.cylinder_measure(nilpotent2_kd, (2, 2)) == 0.0
    assert kusuoka.cylinder_measure(nilpotent2_kd, (1, 2)) == pytest.approx(
        0.5, abs=1e-10)
    assert kusuoka.cylinder_measure(nilpotent2_kd, (2, 1)) == pytest.approx(
        0.5, abs=1e-10)
