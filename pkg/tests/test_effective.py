"""Explicit constants, n0 search, and the certified lower bound."""

import math

import pytest

from expmeasure.algebraics import parse_algebraic
from expmeasure.effective import (certificate_json_dict, certified_lower_bound,
                                  choose_p_and_bound, constants, find_n0,
                                  internal_constants_check, lcm_upto)
from expmeasure.errors import ConstraintViolated

ONE = parse_algebraic("x-1")
HALF = parse_algebraic("2x-1")
SQRT2 = parse_algebraic("x^2-2:+re")
CBRT2 = parse_algebraic("x^3-2:+re")


def enc_contains(enc, value: float, rel=1e-12) -> bool:
    lo, hi = float(enc[0]), float(enc[1])
    return lo <= value * (1 + rel) and value * (1 - rel) <= hi


def test_lcm_upto():
    assert lcm_upto(1) == 1
    assert lcm_upto(4) == 12
    assert lcm_upto(10) == 2520


def test_constants_alpha_one():
    c = constants(ONE, 1, 1, 1)
    assert c.q == 1 and c.psi == 1
    assert enc_contains(c.t, 1.0)
    assert enc_contains(c.a, 4 * math.e)      # (p+1)! e^{1} (2qt)^{1} = 2 * e * 2
    assert enc_contains(c.b, 4.0)


def test_constants_alpha_half():
    c = constants(HALF, 1, 1, 1)
    # 1/alpha = 2 is integral, so q = lcm(1) * den = 1; t = house(2) = 2
    assert c.q == 1
    assert enc_contains(c.t, 2.0)
    assert enc_contains(c.a, 2 * math.exp(0.5) * 4)   # 2! e^{1/2} (2*1*2)^1


def test_constants_alpha_sqrt2():
    c = constants(SQRT2, 2, 1, 2)
    # den(1/sqrt2) = lc(2x^2-1) = 2, so q = lcm(1,2)*2 = 4; house(1/sqrt2) < 1
    assert c.q == 4
    assert enc_contains(c.t, 1.0)
    assert c.psi == 11


def test_constants_reject_bad_p_and_d():
    with pytest.raises(ConstraintViolated):
        constants(SQRT2, 2, 1, 1)     # p < d*delta
    with pytest.raises(ConstraintViolated):
        constants(SQRT2, 3, 1, 5)     # d != deg(alpha)


def test_find_n0_defining_inequality():
    c = constants(ONE, 1, 1, 1)
    info = find_n0(c, 1)
    n0 = info.n0
    m, d = 1, 1
    b = 4.0

    def surrogate_holds(n):
        lhs = math.log(2) + d * math.log(4 * math.e)  # ln(2 a^d), H = 1
        rhs = m * n * math.log(n) - m * n - d * n * math.log(b)
        return rhs >= lhs

    assert surrogate_holds(n0) and not surrogate_holds(n0 - 1)
    assert info.cap_ok
    assert info.n_min_true <= n0


def test_n0_monotone_in_H():
    c = constants(SQRT2, 2, 1, 2)
    ns = [find_n0(c, H).n0 for H in (1, 10, 1000)]
    assert ns == sorted(ns)


def test_n0_cap_on_grid():
    # d in {1,2,3}, delta in {1,2}, p = lambda, H in {1, 10, 1e3, 1e6}
    from expmeasure.exponents import optimal_p
    for alpha, d in ((ONE, 1), (SQRT2, 2), (CBRT2, 3)):
        for delta in (1, 2):
            lam = optimal_p(d, delta).lam
            c = constants(alpha, d, delta, lam)
            for H in (1, 10, 10 ** 3, 10 ** 6):
                info = find_n0(c, H)
                assert info.cap_ok, (d, delta, H)
                assert info.n_min_true <= info.n0


def test_bound_monotone_nonincreasing_in_H():
    c = constants(ONE, 1, 1, 1)
    lns = [certified_lower_bound(c, H).ln_lower_bound[0] for H in (1, 2, 10, 100)]
    assert all(a >= b for a, b in zip(lns, lns[1:]))


def test_bound_H1_cross_check_by_enumeration():
    # |a0 + a1 e| >= bound for all |ai| <= 1
    c = constants(ONE, 1, 1, 1)
    bound = certified_lower_bound(c, 1)
    true_min = min(abs(a0 + a1 * math.e)
                   for a0 in (-1, 0, 1) for a1 in (-1, 0, 1)
                   if (a0, a1) != (0, 0))
    assert math.exp(float(bound.ln_lower_bound[0])) <= true_min
    assert bound.mahlerian_exponent is None  # undefined at H = 1


def test_bound_formula_structure_alpha_one():
    # at (alpha=1, d=1, delta=1, p=1, H=1): u = 2a, v = 4e with a = 4e, b = 4
    c = constants(ONE, 1, 1, 1)
    bound = certified_lower_bound(c, 1)
    assert enc_contains(bound.u, 8 * math.e)
    assert enc_contains(bound.v, 4 * math.e)
    # ln(bound) = -(2 ln(2a) + (1+v^2) ln(b^2) + 8 ln(4)/lnln(u+2) * ln(u))
    a, b, u, v = 4 * math.e, 4.0, 8 * math.e, 4 * math.e
    expected = -(2 * math.log(2 * a) + (1 + v * v) * math.log(b * b)
                 + (2 * 4 * math.log(b) / math.log(math.log(u + 2))) * math.log(u))
    assert float(sum(bound.ln_lower_bound) / 2) == pytest.approx(expected, rel=1e-9)


def test_bound_decimal_string_is_lower_end():
    c = constants(ONE, 1, 1, 1)
    bound = certified_lower_bound(c, 100)
    mant, exp = bound.lower_bound_decimal.split("e")
    log10_emitted = math.log10(float(mant)) + int(exp)
    log10_true = float(bound.ln_lower_bound[0]) / math.log(10)
    assert log10_emitted <= log10_true + 1e-12


def test_mahlerian_view():
    c = constants(ONE, 1, 1, 1)
    bound = certified_lower_bound(c, 1000)
    # exponent view = psi + ln(rest)/ln(H) must exceed psi
    assert bound.mahlerian_exponent > float(c.psi)
    assert bound.varpi > 0
    # consistency: mahlerian = psi + varpi/lnln(H+2)
    recon = float(c.psi) + bound.varpi / math.log(math.log(1002))
    assert bound.mahlerian_exponent == pytest.approx(recon, rel=1e-9)


def test_choose_p_and_bound_headline():
    consts, bound = choose_p_and_bound(SQRT2, None, 1, 10)
    assert consts.p == 2 and consts.psi == 11
    consts, bound = choose_p_and_bound(ONE, 1, 3, 10)
    assert consts.p == 3 and consts.psi == 3
    consts, bound = choose_p_and_bound(HALF, 1, 2, 5)
    assert consts.p == 2 and consts.psi == 2


def test_internal_constants_views():
    rep = internal_constants_check(constants(ONE, 1, 1, 1))
    assert rep.max_c135_le_c6 and rep.c1_equals_c6 and not rep.strict
    assert all(ok for _, ok in rep.n_power_checks)
    rep = internal_constants_check(constants(SQRT2, 2, 1, 2))
    assert rep.max_c135_le_c6 and not rep.c1_equals_c6 and rep.strict
    assert all(ok for _, ok in rep.n_power_checks)


def test_certificate_json_shape():
    consts, bound = choose_p_and_bound(SQRT2, None, 1, 100)
    doc = certificate_json_dict(consts, bound)
    assert doc["schema"].startswith("expmeasure.bound_certificate/")
    assert doc["psi"] == "11/1"
    assert doc["q"] == 4
    assert doc["t"].startswith("[") and doc["a"].startswith("[")
    assert "e-" in doc["lower_bound"]


def test_directed_rounding_soundness_against_higher_precision():
    # the enclosure at 192 bits must contain the 768-bit reference value
    c = constants(SQRT2, 2, 1, 2, precision_bits=192)
    lo1, hi1 = certified_lower_bound(c, 50, precision_bits=192).ln_lower_bound
    c4 = constants(SQRT2, 2, 1, 2, precision_bits=768)
    lo4, hi4 = certified_lower_bound(c4, 50, precision_bits=768).ln_lower_bound
    assert lo1 <= lo4 <= hi4 <= hi1
