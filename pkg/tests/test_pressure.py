import math

import numpy as np
import pytest

from thermoform import core, pressure
from thermoform.errors import BudgetExceededError


def test_partition_sum_level_two_by_hand(notmix2):
    # the four length-2 products are diag(2,2), diag(1,4), diag(4,1),
    # diag(2,2); operator norms 2, 4, 4, 2 give 4 + 16 + 16 + 4
    assert pressure.partition_sum(notmix2, 2, 2) == pytest.approx(40.0,
                                                                  rel=1e-12)
    assert pressure.log_partition_sum(notmix2, 2, 0) == 0.0


def test_frobenius_partition_sum_exact(notmix2):
    # sum of squared Frobenius norms is the trace of the transfer
    # iterate, 2 * 5^n for this pair
    for n in range(1, 6):
        assert pressure.frobenius_partition_sum(notmix2, n) == 2 * 5 ** n


def test_partition_sum_rejects_bad_exponent(notmix2):
    with pytest.raises(ValueError):
        pressure.log_partition_sum(notmix2, 0, 3)
    with pytest.raises(ValueError):
        pressure.log_partition_sum(notmix2, -1.5, 3)


def test_pressure_exact_even_notmix2(notmix2):
    assert pressure.pressure_exact_even(notmix2, 1) == pytest.approx(
        math.log(5), abs=1e-12)


def test_pressure_exact_even_quartic(notmix2):
    # s = 4 goes through the 16 x 16 fourth Kronecker power
    value = pressure.pressure_exact_even(notmix2, 2)
    quad = core.kronecker_power(notmix2, 4)
    direct = sum(core.as_float(m) for m in quad.matrices)
    want = math.log(float(np.max(np.abs(np.linalg.eigvals(direct)))))
    assert value == pytest.approx(want, abs=1e-9)


def test_pressure_bracket_notmix2(notmix2):
    bracket = pressure.pressure_bracket(notmix2, 2, 8)
    assert bracket.exact == pytest.approx(math.log(5), abs=1e-12)
    assert bracket.upper == pytest.approx(math.log(5), abs=1e-12)
    assert bracket.periodic_lower == pytest.approx(math.log(4), abs=1e-12)
    assert bracket.contains(math.log(5))
    assert bracket.upper - bracket.periodic_lower == bracket.width()
    # gram iterate is constant at log 5 for this pair
    for g in bracket.series.gram:
        assert g == pytest.approx(math.log(5), abs=1e-12)


def test_pressure_bracket_monotone_in_depth(notmix2):
    uppers, lowers = [], []
    for depth in (2, 4, 6):
        b = pressure.pressure_bracket(notmix2, 3, depth)
        uppers.append(b.upper)
        lowers.append(b.periodic_lower)
    assert uppers == sorted(uppers, reverse=True)
    assert lowers == sorted(lowers)
    for u, low in zip(uppers, lowers):
        assert low <= u


def test_pressure_bracket_nilpotent2(nilpotent2):
    bracket = pressure.pressure_bracket(nilpotent2, 2, 8)
    assert bracket.exact == 0.0
    assert bracket.upper == 0.0
    assert bracket.periodic_lower == 0.0
    # raw norm sums approach zero from above
    assert all(v > 0 for v in bracket.series.norm_sum)
    assert bracket.series.norm_sum[-1] < bracket.series.norm_sum[0]


def test_pressure_bracket_alpha_vanishes(alpha_pair):
    bracket = pressure.pressure_bracket(alpha_pair, 2, 6)
    # weights 3/5, 4/5 satisfy a1^2 + a2^2 = 1
    assert bracket.exact == pytest.approx(0.0, abs=1e-12)
    assert bracket.contains(0.0, slack=1e-9)


def test_scalar_tuple_closed_form():
    t = core.make_tuple([[[2]], [[3]]])
    bracket = pressure.pressure_bracket(t, 3, 3)
    assert bracket.exact == pytest.approx(math.log(35), abs=1e-12)
    bracket = pressure.pressure_bracket(t, 2, 3)
    assert bracket.exact == pytest.approx(math.log(13), abs=1e-12)


def test_p_radius_notmix2(notmix2):
    r = pressure.p_radius(notmix2, 2, 4)
    assert r.exact
    assert r.lower == pytest.approx(math.sqrt(5), rel=1e-12)
    assert r.upper == r.lower
    rows = r.series
    assert [row["n"] for row in rows] == [1, 2, 3, 4]
    odd = pressure.p_radius(notmix2, 3, 4)
    assert not odd.exact
    assert odd.lower <= odd.upper


def test_jsr_brackets_exact_at_depth_two(notmix2, nilpotent2):
    b = pressure.jsr_bracket(notmix2, 2)
    assert b.lower == pytest.approx(2.0, abs=1e-12)
    assert b.upper == pytest.approx(2.0, abs=1e-12)
    b = pressure.jsr_bracket(nilpotent2, 2)
    assert b.lower == pytest.approx(1.0, abs=1e-12)
    assert b.upper == pytest.approx(1.0, abs=1e-12)


def test_jsr_series_rows(notmix2):
    b = pressure.jsr_bracket(notmix2, 4)
    assert [row["n"] for row in b.series] == [1, 2, 3, 4]
    uppers = [row["upper"] for row in b.series]
    lowers = [row["periodic_lower"] for row in b.series]
    assert uppers == sorted(uppers, reverse=True)
    assert lowers == sorted(lowers)
    # depth-1 upper is max operator norm 2; depth-2 already closes to 2
    assert uppers[0] == pytest.approx(2.0, abs=1e-12)
    assert lowers[-1] == pytest.approx(2.0, abs=1e-12)


def test_jsr_rankone4(rankone4):
    b = pressure.jsr_bracket(rankone4, 6)
    assert b.lower == pytest.approx(1.0, abs=1e-12)
    # every length-n product is a signed generator with norm sqrt(2)
    assert b.upper == pytest.approx(2 ** (1 / 12), rel=1e-10)


def test_budget_guard(notmix2):
    with pytest.raises(BudgetExceededError):
        pressure.pressure_bracket(notmix2, 2, 24, budget=100)
