"""Approximant systems: hand-checked instances, structure, independent oracle."""

from fractions import Fraction
from math import factorial

import pytest
import sympy

from expmeasure.algebraics import parse_algebraic
from expmeasure.approximants import (build_column, build_system,
                                     det_at_one_check, metric_bounds_report,
                                     poly_eval_one, scaled_values)
from expmeasure.errors import ExpMeasureError

ONE = parse_algebraic("x-1")
HALF = parse_algebraic("2x-1")
SQRT2 = parse_algebraic("x^2-2:+re")


def rational_poly(field_polys):
    """Field polynomials over a degree-1 field as plain Fraction tuples."""
    return [tuple(c.coords[0] for c in poly) for poly in field_polys]


def proportional(a, b):
    """a == scale * b for a single nonzero rational scale (flattened)."""
    flat_a = [c for poly in a for c in poly]
    flat_b = [c for poly in b for c in poly]
    assert len(flat_a) == len(flat_b)
    scale = None
    for x, y in zip(flat_a, flat_b):
        if (x == 0) != (y == 0):
            return False
        if x != 0:
            s = Fraction(x) / Fraction(y)
            if scale is None:
                scale = s
            elif s != scale:
                return False
    return scale is not None


def test_hand_system_alpha_one_ell0():
    col = build_column(ONE, 1, 1, 0)
    # spec values P00 = -1-x, P10 = 1, up to the canonical scalar
    assert proportional(rational_poly(col.polys), [(-1, -1), (1,)])
    assert col.vanishing_order == 2


def test_hand_system_alpha_one_ell1():
    col = build_column(ONE, 1, 1, 1)
    assert proportional(rational_poly(col.polys), [(-2, -1), (2, -1)])
    assert col.vanishing_order == 3


def test_remainder_series_against_sympy_oracle():
    """Independent check: expand sum_k P_k(x) e^{kx} with sympy and compare
    with the expected remainders e^x - 1 - x and -x^3/6 + ... up to scalar."""
    system = build_system(ONE, 1, 1)
    x = sympy.symbols("x")

    def remainder_series(ell, order):
        expr = 0
        for k in range(2):
            poly = sympy.Integer(0)
            for j, c in enumerate(system.poly(k, ell)):
                poly += sympy.Rational(c.coords[0]) * x ** j
            expr += poly * sympy.exp(k * x)
        return sympy.series(expr, x, 0, order).removeO()

    r0 = sympy.expand(remainder_series(0, 5))
    # e^x - 1 - x = x^2/2 + x^3/6 + x^4/24 + ...
    ref0 = x ** 2 / 2 + x ** 3 / 6 + x ** 4 / 24
    ratios = {sympy.simplify(r0.coeff(x, m) / ref0.coeff(x, m)) for m in (2, 3, 4)}
    assert len(ratios) == 1 and 0 not in ratios

    r1 = sympy.expand(remainder_series(1, 6))
    ref1 = -x ** 3 / 6 - x ** 4 / 12 - x ** 5 / 40  # series of (2-x)e^x - 2 - x
    ratios = {sympy.simplify(r1.coeff(x, m) / ref1.coeff(x, m)) for m in (3, 4, 5)}
    assert len(ratios) == 1 and 0 not in ratios
    assert r1.coeff(x, 0) == r1.coeff(x, 1) == r1.coeff(x, 2) == 0


def test_half_alpha_column_order_exact():
    col = build_column(HALF, 1, 1, 0)
    assert col.vanishing_order == 2


def test_degree_pattern_and_orders():
    for alpha in (ONE, SQRT2):
        for n in (1, 2):
            for p in (0, 1, 2):
                system = build_system(alpha, n, p)
                for ell in range(p + 1):
                    col = system.columns[ell]
                    assert col.vanishing_order == (p + 1) * n + ell
                    for k in range(p + 1):
                        expected = n if k <= ell else n - 1
                        assert len(system.poly(k, ell)) - 1 == expected
                        assert not system.poly(k, ell)[-1].is_zero()


def test_det_is_single_monomial():
    system = build_system(ONE, 1, 1)
    dets = rational_poly([system.det_poly])[0]
    assert dets == (0, 0, 1)    # det = x^2 exactly

    system = build_system(ONE, 2, 1)
    dets = rational_poly([system.det_poly])[0]
    assert len(dets) == 5 and all(c == 0 for c in dets[:-1]) and dets[-1] != 0

    system = build_system(SQRT2, 1, 2)
    assert len(system.det_poly) == 4
    assert all(c.is_zero() for c in system.det_poly[:-1])
    assert not system.det_constant().is_zero()


def test_det_at_one_nonzero():
    for alpha, n, p in [(ONE, 1, 1), (SQRT2, 1, 2), (HALF, 2, 2)]:
        assert det_at_one_check(build_system(alpha, n, p))


def test_scaled_values_alpha_one():
    system = build_system(ONE, 1, 1)
    A = scaled_values(system, 1)
    flat = [A[k][ell].coords[0] for k in range(2) for ell in range(2)]
    # spec matrix [[-2, -3], [1, 1]] up to per-column canonical scalar
    assert [abs(v) for v in flat] == [2, 3, 1, 1]
    # column proportionality to the hand-computed values
    assert flat[0] / -2 == flat[2] / 1 and flat[1] / -3 == flat[3] / 1


def test_scaled_determinant_is_scalar_multiple():
    system = build_system(ONE, 1, 1)
    q = 3
    A = scaled_values(system, q)
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    scale = Fraction(q ** 3 * factorial(1)) ** 2
    base = scaled_values(system, 1)
    det1 = base[0][0] * base[1][1] - base[0][1] * base[1][0]
    assert det.coords[0] == det1.coords[0] * scale
    assert det.coords[0] != 0


def test_invalid_parameters_raise():
    with pytest.raises(ExpMeasureError):
        build_column(ONE, 0, 1, 0)
    with pytest.raises(ExpMeasureError):
        build_column(ONE, 1, 1, 2)


def test_metric_bounds_small_slack_positive():
    system = build_system(ONE, 1, 1)
    rep = metric_bounds_report(system, 1)
    assert rep.entries_ok and rep.remainders_ok and rep.integrality_ok
    entry_rows = [r for r in rep.rows if r.kind == "entry"]
    assert all(r.log_slack > 0 for r in entry_rows)
    # R0 = e - 2 <= e * 1 * 1/1: slack ln(e/(e-2)) ~ 1.33
    rem0 = next(r for r in rep.rows if r.kind == "remainder" and r.ell == 0)
    assert rem0.log_slack == pytest.approx(1.33, abs=0.05)


def test_metric_bounds_sqrt2():
    system = build_system(SQRT2, 2, 2)
    rep = metric_bounds_report(system, 4)  # q = lcm(1,2)*den(1/sqrt2) = 4
    assert rep.entries_ok and rep.remainders_ok
    assert rep.integrality_ok


def test_json_serialization():
    system = build_system(SQRT2, 1, 1)
    doc = system.to_json_dict()
    assert doc["schema"].startswith("expmeasure.approximant_system/")
    assert doc["n"] == 1 and doc["p"] == 1
    assert len(doc["columns"]) == 2
    first_poly = doc["columns"][0]["polys"][0]
    assert all("/" in coord for coeff in first_poly for coord in coeff)


def test_poly_eval_one_matches_sum():
    system = build_system(ONE, 1, 1)
    field = ONE.field()
    val = poly_eval_one(field, system.poly(0, 1))
    assert val.coords[0] == sum(c.coords[0] for c in system.poly(0, 1))
