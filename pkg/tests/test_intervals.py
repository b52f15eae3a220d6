"""Containment and directed-rounding tests for the interval core."""

from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from expmeasure.intervals import (IntervalContext, IntervalDomainError,
                                  RInterval, mpfr_to_fraction, refine)
from expmeasure.errors import PrecisionExhausted

ctx = IntervalContext(64)

rationals = st.fractions(min_value=-1000, max_value=1000)
small_rationals = st.fractions(min_value=Fraction(-50), max_value=Fraction(50))


def contains(interval: RInterval, value: Fraction) -> bool:
    return interval.lo_fraction() <= value <= interval.hi_fraction()


def test_exact_roundtrip():
    x = ctx.exact(Fraction(1, 3))
    assert x.lo < x.hi
    assert contains(x, Fraction(1, 3))


def test_exact_dyadic_is_tight():
    x = ctx.exact(Fraction(5, 4))
    assert x.lo == x.hi == gmpy2.mpfr("1.25")
    assert mpfr_to_fraction(x.lo) == Fraction(5, 4)


@given(a=rationals, b=rationals)
@settings(max_examples=200)
def test_field_ops_contain_exact_value(a, b):
    ia, ib = ctx.exact(a), ctx.exact(b)
    assert contains(ctx.add(ia, ib), a + b)
    assert contains(ctx.sub(ia, ib), a - b)
    assert contains(ctx.mul(ia, ib), a * b)
    assert contains(ctx.neg(ia), -a)
    assert contains(ctx.abs(ia), abs(a))
    assert contains(ctx.sqr(ia), a * a)
    if b != 0:
        assert contains(ctx.div(ia, ib), a / b)


@given(a=small_rationals, k=st.integers(min_value=0, max_value=8))
@settings(max_examples=100)
def test_integer_powers(a, k):
    assert contains(ctx.pow_int(ctx.exact(a), k), a ** k)


@given(a=small_rationals)
@settings(max_examples=60)
def test_transcendental_nesting(a):
    # a finer enclosure must sit inside a coarser one
    coarse = IntervalContext(64)
    fine = IntervalContext(256)
    for f in ("exp", "sin", "cos"):
        wide = getattr(coarse, f)(coarse.exact(a))
        tight = getattr(fine, f)(fine.exact(a))
        assert wide.lo_fraction() <= tight.lo_fraction()
        assert tight.hi_fraction() <= wide.hi_fraction()


def test_exp_log_roundtrip_contains_identity():
    x = ctx.exact(Fraction(7, 3))
    assert contains(ctx.log(ctx.exp(x)), Fraction(7, 3))


def test_neg_preserves_full_precision():
    # regression: raw unary minus on mpfr rounds to the ambient 53-bit context
    hi_ctx = IntervalContext(192)
    e = hi_ctx.exp(hi_ctx.one())
    back = hi_ctx.neg(hi_ctx.neg(e))
    assert back.lo_fraction() <= e.lo_fraction()
    assert e.hi_fraction() <= back.hi_fraction()
    width = back.hi_fraction() - back.lo_fraction()
    assert width < Fraction(1, 2 ** 180)


def test_division_by_zero_interval_raises():
    with pytest.raises(IntervalDomainError):
        ctx.div(ctx.one(), ctx.interval(-1, 1))


def test_log_of_nonpositive_raises():
    with pytest.raises(IntervalDomainError):
        ctx.log(ctx.interval(0, 1))


def test_sin_interval_with_interior_extremum():
    # [1, 2.5] contains pi/2 where sin peaks; the Lipschitz enclosure must
    # cover the true range [sin(2.5), 1] and stay clamped at the maximum
    val = ctx.sin(ctx.interval(1, Fraction(5, 2)))
    assert val.hi_fraction() == 1
    assert val.lo_fraction() <= Fraction(59, 100)  # sin(2.5) ~ 0.5985


def test_complex_multiplication_contains_exact():
    z1 = ctx.complex_exact(Fraction(1, 3), Fraction(2, 7))
    z2 = ctx.complex_exact(Fraction(-5, 2), Fraction(1, 9))
    prod = ctx.cmul(z1, z2)
    re = Fraction(1, 3) * Fraction(-5, 2) - Fraction(2, 7) * Fraction(1, 9)
    im = Fraction(1, 3) * Fraction(1, 9) + Fraction(2, 7) * Fraction(-5, 2)
    assert contains(prod.re, re) and contains(prod.im, im)


def test_complex_exp_at_zero_is_one():
    z = ctx.cexp(ctx.complex_exact(0, 0))
    assert contains(z.re, Fraction(1)) and contains(z.im, Fraction(0))


def test_cabs_of_three_four_five():
    z = ctx.complex_exact(3, 4)
    assert contains(ctx.cabs(z), Fraction(5))


def test_refine_gives_up_at_cap():
    with pytest.raises(PrecisionExhausted):
        refine(lambda c: None, start_bits=64, cap_bits=256, what="nothing")


def test_refine_returns_first_success():
    calls = []

    def attempt(c):
        calls.append(c.precision)
        return "done" if c.precision >= 256 else None

    assert refine(attempt, start_bits=64, cap_bits=1024) == "done"
    assert calls == [64, 128, 256]
