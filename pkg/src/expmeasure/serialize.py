"""Lossless and directed textual formats for rationals and enclosures.

Conventions (used by the API, the CLI and all file outputs):
  * exact rationals print as "num/den", always with an explicit denominator;
  * certified reals print as "[lo, hi]" decimal enclosures, lo rounded down
    and hi rounded up at 20 significant digits;
  * certified lower bounds print as a single decimal rounded down.
"""

from __future__ import annotations

import decimal
from fractions import Fraction

SIG_DIGITS = 20


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


def fraction_to_decimal(f: Fraction, sig: int = SIG_DIGITS,
                        direction: str = "nearest") -> str:
    """Decimal string of a Fraction with directed rounding.

    direction: "down" (toward -inf), "up" (toward +inf), or "nearest".
    """
    f = Fraction(f)
    rounding = {"down": decimal.ROUND_FLOOR,
                "up": decimal.ROUND_CEILING,
                "nearest": decimal.ROUND_HALF_EVEN}[direction]
    ctx = decimal.Context(prec=sig, rounding=rounding,
                          Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)
    return str(ctx.divide(decimal.Decimal(f.numerator), decimal.Decimal(f.denominator)))


def enclosure_str(enc: tuple[Fraction, Fraction], sig: int = SIG_DIGITS) -> str:
    lo, hi = enc
    return f"[{fraction_to_decimal(lo, sig, 'down')}, {fraction_to_decimal(hi, sig, 'up')}]"


def exp10_string_from_log(ln_value_lower: Fraction, digits: int = 17) -> str:
    """Decimal string s with s <= exp(ln_value_lower), built in log space.

    Handles magnitudes far beyond float/decimal exponent ranges (the certified
    bounds go down to exp(-10^100) and below).
    """
    # log10 = ln / ln(10), rounded down
    from .intervals import IntervalContext

    ctx = IntervalContext(128)
    t = ctx.div(ctx.exact(ln_value_lower), ctx.log(ctx.exact(10)))
    t_lo = t.lo_fraction()
    e10 = _floor_fraction(t_lo)
    frac_part = t_lo - e10  # in [0, 1)
    mant = ctx.exp(ctx.mul(ctx.exact(frac_part), ctx.log(ctx.exact(10))))
    # mathematical mantissa lies in [1, 10); truncate toward zero so the
    # printed value stays a lower bound
    scaled = mant.lo_fraction() * 10 ** (digits - 1)
    mant_int = scaled.numerator // scaled.denominator
    if mant_int < 10 ** (digits - 1):  # enclosure dipped below 1.0; renormalize
        mant_int *= 10
        e10 -= 1
    s = str(mant_int)[:digits]
    return f"{s[0]}.{s[1:]}e{e10:+d}"


def _floor_fraction(f: Fraction) -> int:
    return f.numerator // f.denominator
