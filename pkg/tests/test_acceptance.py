"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are exact rational equality or certified interval
comparisons as stated; runtime caps are asserted with time.monotonic.
"""

import random
import time
from fractions import Fraction

import pytest
import sympy

from expmeasure.algebraics import parse_algebraic
from expmeasure.approximants import build_system, det_at_one_check
from expmeasure.effective import constants, find_n0
from expmeasure.exponents import (admissible_k_range, closed_form_check,
                                  monotonicity_check, optimal_p, parity_scan,
                                  phi, phi_monotonicity_check, psi,
                                  psi_bounds_check)
from expmeasure.lab import bound_vs_reality
from expmeasure.siegel import build_D, column_reduction_check, verify_chain

ONE = parse_algebraic("x-1")
HALF = parse_algebraic("2x-1")
SQRT2 = parse_algebraic("x^2-2:+re")
EYE = parse_algebraic("x^2+1:+im")
CBRT2 = parse_algebraic("x^3-2:+re")


def report(num, text, elapsed, cap):
    assert elapsed < cap, f"criterion {num} took {elapsed:.1f}s (cap {cap}s)"
    print(f"\nACCEPTANCE {num}: {text}: PASS ({elapsed:.2f}s < {cap}s)")


def test_criterion_01_closed_forms_delta_one_two():
    t0 = time.monotonic()
    for d in range(2, 51):
        assert optimal_p(d, 1).psi_lambda == Fraction(4 * d * d - 2 * d - 1)
        assert optimal_p(d, 2).psi_lambda == \
            Fraction(16 * d ** 3 - 16 * d * d + d + 1, 2 * d - 1)
    report(1, "closed forms delta=1,2 exact for d=2..50", time.monotonic() - t0, 1)


def test_criterion_02_item_three_discrepancy_flagged():
    t0 = time.monotonic()
    for d in range(2, 51):
        value = optimal_p(d, 3).psi_lambda
        assert value == Fraction(36 * d ** 3 - 42 * d * d + 7 * d + 2, 3 * d - 2)
        chk = closed_form_check(d, 3)
        assert chk.matches_alt and (chk.matches_paper == (chk.paper_value == chk.alt_value))
    d2 = closed_form_check(2, 3)
    assert d2.computed == 34 and d2.paper_value == Fraction(136, 5)
    assert not d2.matches_paper     # the toolkit flags, never hides, this
    report(2, "item (iii) denominator discrepancy flagged for d=2..50",
           time.monotonic() - t0, 1)


def test_criterion_03_eq2_sandwich_certified():
    t0 = time.monotonic()
    for d in range(2, 31):
        for delta in range(1, 31):
            rep = psi_bounds_check(d, delta)
            assert rep.lower_ok and rep.upper_ok, (d, delta)
    report(3, "sandwich bounds certified on d=2..30, delta=1..30",
           time.monotonic() - t0, 10)


def test_criterion_04_dominance_over_prior_exponents():
    t0 = time.monotonic()
    for d in range(2, 31):
        for delta in range(1, 31):
            rep = psi_bounds_check(d, delta)
            assert rep.zheng_ok
            assert rep.zheng_equality == (delta == 1), (d, delta)
            if delta >= 2:
                assert rep.quarter_ok, (d, delta)
    report(4, "psi <= Zheng with equality iff delta=1; quarter bound for delta>=2",
           time.monotonic() - t0, 10)


def test_criterion_05_monotonicity_in_delta():
    t0 = time.monotonic()
    for d in range(1, 31):
        assert monotonicity_check(d, 30), d
    report(5, "psi(d, delta, lambda) strictly increasing in delta=1..30, d<=30",
           time.monotonic() - t0, 10)


def test_criterion_06_general_family_reduction():
    t0 = time.monotonic()
    for d in range(1, 11):
        for delta in range(1, 6):
            for p in range(delta * d, 5 * delta * d + 1):
                assert phi(d, delta, p, p - delta + 1) == psi(d, delta, p)
                if d >= 2 and len(admissible_k_range(d, delta, p)) >= 2:
                    assert phi_monotonicity_check(d, delta, p).ok
    report(6, "phi(d,delta,p,p-delta+1) = psi exactly; phi strictly decreasing in k",
           time.monotonic() - t0, 10)


def _sympy_oracle_system_111():
    """Independent truncated-series solve of the (alpha=1, n=1, p=1) system."""
    x = sympy.symbols("x")
    c = sympy.symbols("c0:5")
    out = {}
    for ell, widths in ((0, (2, 1)), (1, (2, 2))):
        unknowns = list(c[:sum(widths)])
        p0 = unknowns[0] + unknowns[1] * x
        p1 = (unknowns[2] if widths[1] == 1 else unknowns[2] + unknowns[3] * x)
        series = sympy.series(p0 + p1 * sympy.exp(x), x, 0, 2 + ell + 1).removeO()
        eqs = [sympy.Eq(series.coeff(x, m), 0) for m in range(2 + ell)]
        sols = sympy.solve(eqs, unknowns[:-1], dict=True)
        assert len(sols) == 1
        sol = sols[0]
        free = unknowns[-1]
        out[ell] = [sympy.simplify(sol.get(u, u) / free) for u in unknowns]
    return out


def test_criterion_07_approximant_structure():
    t0 = time.monotonic()
    for alpha in (ONE, HALF, SQRT2, EYE):
        for n in (1, 2, 3):
            for p in (0, 1, 2, 3):
                system = build_system(alpha, n, p)
                for ell in range(p + 1):
                    assert system.columns[ell].vanishing_order == (p + 1) * n + ell
                    for k in range(p + 1):
                        want = n if k <= ell else n - 1
                        assert len(system.poly(k, ell)) - 1 == want
                assert len(system.det_poly) == (p + 1) * n + 1
                assert all(e.is_zero() for e in system.det_poly[:-1])
                assert not system.det_constant().is_zero()
                assert det_at_one_check(system)

    # hand-checked instance against the independent sympy solve
    system = build_system(ONE, 1, 1)
    oracle = _sympy_oracle_system_111()
    for ell in (0, 1):
        mine = [c.coords[0] for poly in
                (system.poly(0, ell), system.poly(1, ell)) for c in poly]
        reference = oracle[ell]
        ratios = {sympy.nsimplify(Fraction(m) / r)
                  for m, r in zip(mine, reference) if r != 0}
        assert len(ratios) == 1     # un-normalized oracle kernel, same ray
    report(7, "approximant structure for alpha in {1, 1/2, sqrt2, i}, n<=3, p<=3",
           time.monotonic() - t0, 60)


SCENARIOS = [
    ("x-1", ONE, 1, 1, range(1, 101)),
    ("x-1", ONE, 1, 2, range(1, 21)),
    ("x^2-2", SQRT2, 2, 1, range(1, 51)),
    ("2x-1", HALF, 1, 1, range(1, 101)),
]


def test_criterion_08_soundness_sentinel():
    t0 = time.monotonic()
    for name, alpha, d, delta, grid in SCENARIOS:
        rep = bound_vs_reality(alpha, d, delta, grid)
        assert all(r.log10_gap > 0 for r in rep.rows), name
        print(f"\n  scenario {name} delta={delta}: {len(rep.rows)} heights, "
              f"empirical exponent {rep.empirical_exponent:.3f} vs psi {rep.psi_lambda}")
    report(8, "certified bound below brute-force minimum on all four scenarios",
           time.monotonic() - t0, 600)


def test_criterion_09_n0_consistency():
    t0 = time.monotonic()
    for alpha, d in ((ONE, 1), (SQRT2, 2), (CBRT2, 3)):
        for delta in (1, 2):
            lam = optimal_p(d, delta).lam
            consts = constants(alpha, d, delta, lam)
            for H in (1, 10, 10 ** 3, 10 ** 6):
                info = find_n0(consts, H)
                # the search itself certifies the defining inequality at n0
                # and its failure at n0-1; cap per the closed form
                assert info.n0 >= 1 and info.cap_ok, (d, delta, H)
                assert Fraction(info.n0) <= info.cap[1]
    report(9, "n0 defining inequality + closed-form cap on the stated grid",
           time.monotonic() - t0, 10)


def test_criterion_10_siegel_chain_random_polynomials():
    t0 = time.monotonic()
    rng = random.Random(20260808)
    for name, alpha, d, delta, _grid in SCENARIOS:
        lam = optimal_p(d, delta).lam
        consts = constants(alpha, d, delta, lam)
        n0 = find_n0(consts, 10).n0
        n = min(n0, 6)
        system = build_system(alpha, n, lam)
        for _ in range(20):
            while True:
                coeffs = [rng.randint(-9, 9) for _ in range(delta + 1)]
                if any(coeffs):
                    break
            H = max(max(abs(a) for a in coeffs), 1)
            cert = build_D(coeffs, system, consts.q, delta)
            assert not cert.D.is_zero()
            chain = verify_chain(cert, system, consts, H)
            assert chain.check("D_bound").passed, (name, coeffs)
            assert chain.check("sigma_D_bound").passed, (name, coeffs)
            assert chain.check("norm_product").passed is not False
            assert chain.check("L0_lower").passed
            reduction = column_reduction_check(cert, system, symbolic=False)
            assert reduction["numeric_ok"], (name, coeffs)
    report(10, "Siegel chain on 20 random polynomials per scenario (n = min(n0, 6))",
           time.monotonic() - t0, 300)


def test_criterion_11_parity_scan_report():
    t0 = time.monotonic()
    rep = parity_scan(10, 10)
    assert len(rep.rows) == 81          # d, delta in [2, 10]
    for row in rep.rows:
        assert row.winner in ("p1", "p2", "tie")
    ties = [r for r in rep.rows if r.winner == "tie"]
    print(f"\n  parity grid 81 cells, {len(rep.counterexamples)} strict-pattern "
          f"counterexamples (ties: {[(r.d, r.delta) for r in ties]})")
    report(11, "parity scan d,delta in [2,10] completes with pattern table",
           time.monotonic() - t0, 60)
