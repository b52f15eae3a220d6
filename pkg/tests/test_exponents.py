"""Exact exponent algebra: values, optimization, bounds, scans."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from expmeasure.errors import ConstraintViolated, DegenerateDenominator
from expmeasure.exponents import (admissible_k_range, closed_form_check,
                                  competing_exponents, exponent_table_rows,
                                  floor_identity_check, monotonicity_check,
                                  optimal_p, parity_scan, phi,
                                  phi_monotonicity_check, psi, psi_bounds_check)


def test_psi_values():
    assert psi(1, 5, 9) == 9            # independent of delta at d = 1
    assert psi(2, 1, 2) == 11
    assert psi(2, 2, 6) == Fraction(67, 3)
    assert psi(3, 1, 4) == 29


def test_psi_pole_and_preconditions():
    with pytest.raises(DegenerateDenominator):
        psi(2, 2, 3)  # p = delta*d - 1
    with pytest.raises(ConstraintViolated):
        psi(2, 3, 2)  # p < delta


def test_optimal_p_small_cases():
    c = optimal_p(2, 1)
    assert (c.p1, c.p2, c.lam) == (2, 3, 2)
    assert c.psi_lambda == 11
    assert psi(2, 1, c.p1) == psi(2, 1, c.p2) == 11  # exact tie resolves to p1

    c = optimal_p(2, 2)
    assert c.lam == 6 and c.psi_lambda == Fraction(67, 3)
    c = optimal_p(3, 1)
    assert c.p1 == 4 and c.psi_lambda == 29
    c = optimal_p(1, 7)
    assert c.lam == 7 and c.psi_lambda == 7 and c.x0_enclosure is None


def test_x0_enclosure_brackets_p1_p2():
    for d in range(2, 12):
        for delta in range(1, 8):
            c = optimal_p(d, delta)
            lo, hi = c.x0_enclosure
            assert c.p1 < lo and hi < c.p2


@given(d=st.integers(min_value=2, max_value=25), delta=st.integers(min_value=1, max_value=25))
@settings(max_examples=80, deadline=None)
def test_lambda_is_argmin_over_scanned_range(d, delta):
    c = optimal_p(d, delta)
    assert c.lam >= delta * d
    for p in range(delta * d, 4 * delta * d + 1):
        assert psi(d, delta, p) >= c.psi_lambda


def test_floor_identity_examples():
    assert floor_identity_check(2, 1)
    assert floor_identity_check(2, 3)
    assert floor_identity_check(2, 8)   # floor(8*sqrt2)=11 = 16 - ceil(9/2)


def test_floor_identity_fails_when_d_small_vs_delta():
    # the identity is for d large enough w.r.t. delta; find a failing cell
    failures = [(d, delta)
                for d in range(2, 6) for delta in range(1, 40)
                if not floor_identity_check(d, delta)]
    assert failures, "identity should not hold unconditionally"


def test_competing_exponents():
    c = competing_exponents(2, 2)
    assert (c.zheng, c.mahler, c.lang_galochkin) == (23, 27, 32)
    assert not c.kappe_applicable
    assert competing_exponents(2, 1).zheng == 11
    assert competing_exponents(1, 1).zheng == 1 == optimal_p(1, 1).psi_lambda


def test_psi_bounds_check_examples():
    r = psi_bounds_check(2, 1)
    assert r.lower_ok and r.upper_ok and r.zheng_ok and r.zheng_equality
    assert r.quarter_ok is None
    assert float(r.lower_enclosure[0]) == pytest.approx(5 + 4 * 2 ** 0.5, abs=1e-9)

    r = psi_bounds_check(2, 2)
    assert r.lower_ok and r.upper_ok and r.zheng_ok
    assert not r.zheng_equality and r.quarter_ok

    assert psi_bounds_check(3, 1).zheng_equality  # psi = 29 = zheng bound


def test_monotonicity():
    assert monotonicity_check(1, 10)
    assert monotonicity_check(2, 3)
    assert monotonicity_check(5, 20)


def test_closed_forms_match():
    for d in (2, 3, 7, 20):
        assert closed_form_check(d, 1).matches_paper
        assert closed_form_check(d, 2).matches_paper


def test_closed_form_three_discrepancy():
    # the printed /(3d-1) denominator disagrees with the computed psi; the
    # corrected /(3d-2) matches. Flagged, never silently adopted.
    chk = closed_form_check(2, 3)
    assert chk.computed == 34
    assert chk.paper_value == Fraction(136, 5)
    assert not chk.matches_paper
    assert chk.alt_value == 34 and chk.matches_alt
    for d in (3, 5, 11):
        chk = closed_form_check(d, 3)
        assert chk.matches_alt and not chk.matches_paper


def test_parity_scan_patterns():
    report = parity_scan(6, 6)
    by_key = {(r.d, r.delta): r for r in report.rows}
    assert by_key[(2, 3)].winner == "p1"
    assert by_key[(2, 3)].psi_p1 == 34 and by_key[(2, 3)].psi_p2 == Fraction(171, 5)
    assert by_key[(2, 2)].winner == "p2"
    # delta = 1 rows are excluded from the scan grid entirely
    assert all(r.delta >= 2 for r in report.rows)
    # the scan is a report, not an assertion: at (2, 6) the two psi values tie
    # at 69 exactly, so the strict even-delta pattern has a counterexample
    assert by_key[(2, 6)].winner == "tie"
    assert by_key[(2, 6)].psi_p1 == by_key[(2, 6)].psi_p2 == 69
    assert report.counterexamples == (by_key[(2, 6)],)


def test_phi_values():
    assert phi(1, 3, 7, 1) == 7
    assert phi(2, 2, 6, 5) == psi(2, 2, 6) == Fraction(67, 3)
    assert phi(2, 2, 6, 4) == 55


def test_phi_constraint_errors_name_the_inequality():
    with pytest.raises(ConstraintViolated, match="k <= p - delta \\+ 1"):
        phi(2, 2, 6, 6)
    with pytest.raises(ConstraintViolated, match="p \\+ k\\*d"):
        phi(3, 1, 8, 3)   # denominator 8+9-27+1 = -9


def test_phi_reduction_to_psi():
    for d in range(1, 8):
        for delta in range(1, 5):
            for p in range(delta * d, 3 * delta * d + 1):
                assert phi(d, delta, p, p - delta + 1) == psi(d, delta, p)


def test_phi_monotonicity():
    r = phi_monotonicity_check(2, 2, 6)
    assert r.ok and not r.constant and r.k_values == (4, 5)
    r = phi_monotonicity_check(1, 2, 5)
    assert r.ok and r.constant
    assert phi_monotonicity_check(3, 1, 8).ok


def test_admissible_k_range():
    assert list(admissible_k_range(2, 2, 6)) == [4, 5]
    assert list(admissible_k_range(1, 2, 5)) == [1, 2, 3, 4]


def test_table_rows_columns_fixed():
    rows = exponent_table_rows([1, 2], [1])
    assert rows[0]["psi_lambda"] == "1/1"
    assert rows[0]["lower_bound_float"] == ""  # d = 1: Eq.-(2) columns empty
    assert rows[1]["psi_lambda"] == "11/1"
    assert isinstance(rows[1]["lower_bound_float"], float)
