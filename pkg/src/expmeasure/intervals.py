"""Rigorous real intervals and complex rectangles on top of gmpy2/MPFR.

Containment contract: every operation returns an enclosure of the exact
image of its inputs.  Endpoints are mpfr values produced under explicit
RoundDown/RoundUp contexts, so the contract holds including all rounding.
Values are immutable; an :class:`IntervalContext` is cheap to create and
owns no mutable state beyond its two gmpy2 contexts, which keeps every
operation a pure function of (inputs, precision).

The only transcendental functions needed downstream are exp, log, sqrt and
sin/cos (the last two solely for exp of a complex argument).  MPFR rounds
all of them correctly in a directed mode, so endpoint evaluation is exact
containment for the monotone ones; sin/cos use endpoint values widened by
the interval width, which is sound because both are 1-Lipschitz.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, TypeVar, Union

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import PrecisionExhausted

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, mpfr]

PRECISION_START = 128
PRECISION_CAP = 1 << 20


class IntervalDomainError(ArithmeticError):
    """Operation undefined on the given enclosure (division through zero,
    log of an interval touching zero, ...).  Refinement loops catch this
    and retry at higher precision."""


def _to_number(x):
    if isinstance(x, Fraction):
        return mpq(int(x.numerator), int(x.denominator))
    return x


def mpfr_to_fraction(v: mpfr) -> Fraction:
    """Exact rational value of an mpfr (always a dyadic rational)."""
    q = mpq(v)
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class RInterval:
    """Closed real interval [lo, hi] with mpfr endpoints."""

    lo: mpfr
    hi: mpfr

    def __post_init__(self):
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi) or self.lo > self.hi:
            raise IntervalDomainError(f"malformed interval [{self.lo}, {self.hi}]")

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"

    # -- exact views -------------------------------------------------------

    def lo_fraction(self) -> Fraction:
        return mpfr_to_fraction(self.lo)

    def hi_fraction(self) -> Fraction:
        return mpfr_to_fraction(self.hi)

    def mid_fraction(self) -> Fraction:
        return (self.lo_fraction() + self.hi_fraction()) / 2

    def width_fraction(self) -> Fraction:
        return self.hi_fraction() - self.lo_fraction()

    # -- certified predicates ---------------------------------------------

    def contains(self, x: Rational) -> bool:
        q = mpq(Fraction(x))
        return self.lo <= q <= self.hi

    def certainly_le(self, other: "RInterval") -> bool:
        return self.hi <= other.lo

    def certainly_lt(self, other: "RInterval") -> bool:
        return self.hi < other.lo

    def certainly_ge_scalar(self, x: Rational) -> bool:
        return self.lo >= mpq(Fraction(x))

    def certainly_le_scalar(self, x: Rational) -> bool:
        return self.hi <= mpq(Fraction(x))

    def certainly_gt_scalar(self, x: Rational) -> bool:
        return self.lo > mpq(Fraction(x))

    def certainly_lt_scalar(self, x: Rational) -> bool:
        return self.hi < mpq(Fraction(x))

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0


@dataclass(frozen=True)
class CRect:
    """Complex rectangle re + i*im with interval components."""

    re: RInterval
    im: RInterval

    def contains_zero_candidate(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)


class IntervalContext:
    """Directed-rounding workspace at a fixed mpfr precision."""

    def __init__(self, precision: int):
        if precision < 2:
            raise ValueError("precision must be >= 2 bits")
        self.precision = precision
        self._dn = gmpy2.context(precision=precision, round=gmpy2.RoundDown)
        self._up = gmpy2.context(precision=precision, round=gmpy2.RoundUp)
        self._zero = mpfr(0, precision=precision)

    # -- construction ------------------------------------------------------

    def down(self, x: Scalar) -> mpfr:
        return self._dn.add(self._zero, _to_number(x))

    def up(self, x: Scalar) -> mpfr:
        return self._up.add(self._zero, _to_number(x))

    def exact(self, x: Scalar) -> RInterval:
        return RInterval(self.down(x), self.up(x))

    def interval(self, lo: Scalar, hi: Scalar) -> RInterval:
        return RInterval(self.down(lo), self.up(hi))

    def zero(self) -> RInterval:
        return RInterval(self._zero, self._zero)

    def one(self) -> RInterval:
        one = mpfr(1, precision=self.precision)
        return RInterval(one, one)

    def complex_exact(self, re: Scalar, im: Scalar = 0) -> CRect:
        return CRect(self.exact(re), self.exact(im))

    # -- arithmetic --------------------------------------------------------

    def add(self, a: RInterval, b: RInterval) -> RInterval:
        return RInterval(self._dn.add(a.lo, b.lo), self._up.add(a.hi, b.hi))

    def sub(self, a: RInterval, b: RInterval) -> RInterval:
        return RInterval(self._dn.sub(a.lo, b.hi), self._up.sub(a.hi, b.lo))

    def neg(self, a: RInterval) -> RInterval:
        # raw unary minus on mpfr rounds to the ambient thread context, so
        # negate under the directed contexts like every other operation
        return RInterval(self._dn.minus(a.hi), self._up.minus(a.lo))

    def mul(self, a: RInterval, b: RInterval) -> RInterval:
        dn, up = self._dn, self._up
        lo = min(dn.mul(a.lo, b.lo), dn.mul(a.lo, b.hi),
                 dn.mul(a.hi, b.lo), dn.mul(a.hi, b.hi))
        hi = max(up.mul(a.lo, b.lo), up.mul(a.lo, b.hi),
                 up.mul(a.hi, b.lo), up.mul(a.hi, b.hi))
        return RInterval(lo, hi)

    def mul_scalar(self, a: RInterval, c: Scalar) -> RInterval:
        c = _to_number(c)
        if c >= 0:
            return RInterval(self._dn.mul(a.lo, c), self._up.mul(a.hi, c))
        return RInterval(self._dn.mul(a.hi, c), self._up.mul(a.lo, c))

    def div(self, a: RInterval, b: RInterval) -> RInterval:
        if b.lo <= 0 <= b.hi:
            raise IntervalDomainError("division by interval containing zero")
        dn, up = self._dn, self._up
        lo = min(dn.div(a.lo, b.lo), dn.div(a.lo, b.hi),
                 dn.div(a.hi, b.lo), dn.div(a.hi, b.hi))
        hi = max(up.div(a.lo, b.lo), up.div(a.lo, b.hi),
                 up.div(a.hi, b.lo), up.div(a.hi, b.hi))
        return RInterval(lo, hi)

    def inv(self, a: RInterval) -> RInterval:
        return self.div(self.one(), a)

    def abs(self, a: RInterval) -> RInterval:
        if a.lo >= 0:
            return a
        if a.hi <= 0:
            return self.neg(a)
        return RInterval(self._zero, max(self._up.minus(a.lo), a.hi))

    def sqr(self, a: RInterval) -> RInterval:
        m = self.abs(a)
        return RInterval(self._dn.mul(m.lo, m.lo), self._up.mul(m.hi, m.hi))

    def sqrt(self, a: RInterval) -> RInterval:
        if a.lo < 0:
            raise IntervalDomainError("sqrt of interval with negative part")
        return RInterval(self._dn.sqrt(a.lo), self._up.sqrt(a.hi))

    def exp(self, a: RInterval) -> RInterval:
        return RInterval(self._dn.exp(a.lo), self._up.exp(a.hi))

    def log(self, a: RInterval) -> RInterval:
        if a.lo <= 0:
            raise IntervalDomainError("log of interval touching (-inf, 0]")
        return RInterval(self._dn.log(a.lo), self._up.log(a.hi))

    def _lipschitz1(self, fn_dn, fn_up, a: RInterval) -> RInterval:
        # sound for any 1-Lipschitz f: image(f,[lo,hi]) within endpoint
        # values widened by the interval width
        w = self._up.sub(a.hi, a.lo)
        lo = min(fn_dn(a.lo), fn_dn(a.hi))
        hi = max(fn_up(a.lo), fn_up(a.hi))
        return RInterval(max(self._dn.sub(lo, w), mpfr(-1)),
                         min(self._up.add(hi, w), mpfr(1)))

    def sin(self, a: RInterval) -> RInterval:
        return self._lipschitz1(self._dn.sin, self._up.sin, a)

    def cos(self, a: RInterval) -> RInterval:
        return self._lipschitz1(self._dn.cos, self._up.cos, a)

    def pow_int(self, a: RInterval, k: int) -> RInterval:
        if k < 0:
            return self.inv(self.pow_int(a, -k))
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def pow_fraction(self, a: RInterval, e: Fraction) -> RInterval:
        """a**e for a > 0 via exp(e * log a); exact fast paths for integers."""
        e = Fraction(e)
        if e.denominator == 1:
            return self.pow_int(a, e.numerator)
        return self.exp(self.mul_scalar(self.log(a), e))

    def max2(self, a: RInterval, b: RInterval) -> RInterval:
        return RInterval(max(a.lo, b.lo), max(a.hi, b.hi))

    def min2(self, a: RInterval, b: RInterval) -> RInterval:
        return RInterval(min(a.lo, b.lo), min(a.hi, b.hi))

    def max_scalar(self, a: RInterval, c: Rational) -> RInterval:
        return self.max2(a, self.exact(Fraction(c)))

    def fsum(self, items) -> RInterval:
        total = self.zero()
        for it in items:
            total = self.add(total, it)
        return total

    def e(self) -> RInterval:
        return self.exp(self.one())

    def pi(self) -> RInterval:
        return RInterval(self._dn.const_pi(), self._up.const_pi())

    # -- complex rectangles --------------------------------------------------

    def cadd(self, a: CRect, b: CRect) -> CRect:
        return CRect(self.add(a.re, b.re), self.add(a.im, b.im))

    def csub(self, a: CRect, b: CRect) -> CRect:
        return CRect(self.sub(a.re, b.re), self.sub(a.im, b.im))

    def cneg(self, a: CRect) -> CRect:
        return CRect(self.neg(a.re), self.neg(a.im))

    def cmul(self, a: CRect, b: CRect) -> CRect:
        return CRect(self.sub(self.mul(a.re, b.re), self.mul(a.im, b.im)),
                     self.add(self.mul(a.re, b.im), self.mul(a.im, b.re)))

    def cmul_scalar(self, a: CRect, c: Scalar) -> CRect:
        return CRect(self.mul_scalar(a.re, c), self.mul_scalar(a.im, c))

    def cabs_sq(self, a: CRect) -> RInterval:
        return self.add(self.sqr(a.re), self.sqr(a.im))

    def cabs(self, a: CRect) -> RInterval:
        return self.sqrt(self.cabs_sq(a))

    def cinv(self, a: CRect) -> CRect:
        d = self.cabs_sq(a)
        if not d.is_positive():
            raise IntervalDomainError("complex inverse of rectangle touching 0")
        return CRect(self.div(a.re, d), self.neg(self.div(a.im, d)))

    def cdiv(self, a: CRect, b: CRect) -> CRect:
        return self.cmul(a, self.cinv(b))

    def cexp(self, a: CRect) -> CRect:
        r = self.exp(a.re)
        return CRect(self.mul(r, self.cos(a.im)), self.mul(r, self.sin(a.im)))

    def cpow_int(self, a: CRect, k: int) -> CRect:
        if k < 0:
            return self.cinv(self.cpow_int(a, -k))
        result = self.complex_exact(1)
        base = a
        while k:
            if k & 1:
                result = self.cmul(result, base)
            base = self.cmul(base, base)
            k >>= 1
        return result


T = TypeVar("T")


def refine(compute: Callable[[IntervalContext], T],
           start_bits: int = PRECISION_START,
           cap_bits: int = PRECISION_CAP,
           what: str = "computation") -> T:
    """Run ``compute`` under doubling precision until it returns non-None.

    ``compute`` signals "not yet decidable" by returning None or raising
    IntervalDomainError.  Raises PrecisionExhausted past the cap.
    """
    bits = start_bits
    while True:
        try:
            result = compute(IntervalContext(bits))
        except IntervalDomainError:
            result = None
        if result is not None:
            return result
        if bits >= cap_bits:
            raise PrecisionExhausted(
                f"{what}: undecidable at {bits} bits (cap {cap_bits})")
        bits = min(2 * bits, cap_bits)


def enclosure_to_fractions(x: RInterval) -> tuple[Fraction, Fraction]:
    return (x.lo_fraction(), x.hi_fraction())
