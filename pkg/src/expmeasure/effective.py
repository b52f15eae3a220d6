"""Completely explicit lower bounds for |P(e^alpha)|.

Given alpha of degree d, a polynomial degree bound delta, an accessory
parameter p >= d*delta and a height ceiling H >= 1, this module produces a
certified positive number below |P(e^alpha)| for every nonzero integer
polynomial P with deg <= delta and height <= H.

All bound arithmetic is done in log space with interval enclosures: the
constants b^(1+v^2) overflow every fixed exponent range long before the
parameters stop being desk-scale, while their logarithms stay tame.  The
emitted bound uses the conservative end of every enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

from .algebraics import AlgebraicNumber, denominator_surrogate, house, inverse
from .errors import ConstraintViolated, PrecisionExhausted
from .exponents import optimal_p, psi
from .intervals import IntervalContext, PRECISION_CAP, RInterval
from .serialize import (enclosure_str, exp10_string_from_log, frac_str,
                        fraction_to_decimal)

Enc = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class EffectiveConstants:
    """The explicit constant bundle; all enclosures rounded toward validity."""

    alpha: AlgebraicNumber
    d: int
    delta: int
    p: int
    q: int
    t: Enc
    a: Enc
    b: Enc
    psi: Fraction
    abs_alpha: Enc
    rounding_mode: str = "toward_validity"


@dataclass(frozen=True)
class N0Search:
    """Outcome of the minimal-n search: certified threshold plus the cap."""

    n0: int
    n_min_true: int
    cap: Enc
    cap_ok: bool
    u: Enc
    v: Enc


@dataclass(frozen=True)
class BoundEvaluation:
    H: Fraction
    u: Enc
    v: Enc
    n0: int
    n0_cap: Enc
    n0_cap_ok: bool
    n_min_true: int
    ln_lower_bound: Enc          # enclosure of ln(emitted formula value)
    lower_bound_decimal: str     # decimal string, rounded down
    mahlerian_exponent: float | None  # psi + ln(rest)/ln(H), H > 1 only
    varpi: float | None          # implied Mahlerian coefficient at this H


def lcm_upto(p: int) -> int:
    return lcm(*range(1, p + 1)) if p >= 1 else 1


def _t_interval(ctx: IntervalContext, alpha: AlgebraicNumber) -> RInterval:
    return ctx.max_scalar(house(inverse(alpha), rel_bits=96), 1)


def _ab_intervals(ctx: IntervalContext, alpha: AlgebraicNumber, d: int,
                  delta: int, p: int, q: int) -> tuple[RInterval, RInterval, RInterval]:
    t = _t_interval(ctx, alpha)
    two_qt = ctx.mul_scalar(t, 2 * q)
    abs_alpha = alpha.abs_interval(ctx)
    a = ctx.mul_scalar(
        ctx.mul(ctx.exp(ctx.mul_scalar(abs_alpha, Fraction(p * (p + 1), 2))),
                ctx.pow_int(two_qt, p * delta)),
        factorial(p + 1))
    b = ctx.pow_int(two_qt, (p + 1) * delta)
    return t, a, b


def constants(alpha: AlgebraicNumber, d: int | None, delta: int, p: int,
              precision_bits: int = 192) -> EffectiveConstants:
    """q, t, a, b and psi for the bound; errors if p < d*delta.

    d defaults to deg(alpha); supplying any other value is rejected since the
    pipeline fixes the coefficient field to Q.
    """
    if alpha.is_zero():
        raise ConstraintViolated("alpha must be nonzero")
    if d is None:
        d = alpha.degree
    if d != alpha.degree:
        raise ConstraintViolated(
            f"d={d} does not match deg(alpha)={alpha.degree} (coefficient field is Q)")
    if delta < 1 or p < d * delta:
        raise ConstraintViolated(f"need p >= d*delta >= 1, got p={p}, d*delta={d * delta}")
    q = lcm_upto(p) * denominator_surrogate(inverse(alpha))
    ctx = IntervalContext(precision_bits)
    t, a, b = _ab_intervals(ctx, alpha, d, delta, p, q)
    abs_alpha = alpha.abs_interval(ctx)
    return EffectiveConstants(
        alpha=alpha, d=d, delta=delta, p=p, q=q,
        t=(t.lo_fraction(), t.hi_fraction()),
        a=(a.lo_fraction(), a.hi_fraction()),
        b=(b.lo_fraction(), b.hi_fraction()),
        psi=psi(d, delta, p),
        abs_alpha=(abs_alpha.lo_fraction(), abs_alpha.hi_fraction()),
    )


def _ln_T(ctx, consts: EffectiveConstants, H: Fraction, ln_a: RInterval) -> RInterval:
    """ln(2 a^d H^{(p-delta+1)d})."""
    d, delta, p = consts.d, consts.delta, consts.p
    ln_H = ctx.log(ctx.exact(H)) if H != 1 else ctx.zero()
    return ctx.fsum([
        ctx.log(ctx.exact(2)),
        ctx.mul_scalar(ln_a, d),
        ctx.mul_scalar(ln_H, (p - delta + 1) * d),
    ])


def _stirling_pred(ctx, n: int, m: int, d: int, ln_b: RInterval, lnT: RInterval):
    """Decide m*n*ln(n) - m*n - d*n*ln(b) >= lnT; None if the enclosure straddles."""
    if n < 1:
        return False
    lhs = ctx.fsum([
        ctx.mul_scalar(ctx.log(ctx.exact(n)), m * n),
        ctx.exact(-m * n),
        ctx.mul_scalar(ln_b, -d * n),
    ])
    if lhs.lo > lnT.hi:
        return True
    if lhs.hi < lnT.lo:
        return False
    return None


def _truefact_pred(ctx, n: int, m: int, d: int, ln_b: RInterval, lnT: RInterval):
    """Same predicate with ln(n!) via certified Stirling-Robbins bounds."""
    if n < 1:
        return False
    ln_n = ctx.log(ctx.exact(n))
    two_pi_n = ctx.mul_scalar(ctx.pi(), 2 * n)
    base = ctx.fsum([
        ctx.mul_scalar(ctx.log(two_pi_n), Fraction(1, 2)),
        ctx.mul_scalar(ln_n, n),
        ctx.exact(-n),
    ])
    lnfact = RInterval(
        ctx.add(base, ctx.exact(Fraction(1, 12 * n + 1))).lo,
        ctx.add(base, ctx.exact(Fraction(1, 12 * n))).hi,
    )
    lhs = ctx.add(ctx.mul_scalar(lnfact, m), ctx.mul_scalar(ln_b, -d * n))
    if lhs.lo > lnT.hi:
        return True
    if lhs.hi < lnT.lo:
        return False
    return None


def _certified(pred, n: int, start_bits: int = 192) -> bool:
    bits = start_bits
    while True:
        res = pred(IntervalContext(bits), n)
        if res is not None:
            return res
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"predicate undecidable at n={n}")
        bits *= 2


def _threshold_search(pred, false_region_end: Fraction, what: str) -> int:
    """Minimal n >= 1 with pred(n).

    Callers guarantee pred is false for every integer n <= false_region_end
    and monotone (false then true) beyond it, so gallop + bisection is exact.
    false_region_end must be a LOWER enclosure endpoint of the analytic
    boundary, keeping lo inside the provably-false region.
    """
    lo = max(1, false_region_end.numerator // false_region_end.denominator)
    step = 1
    hi = lo + step
    while not _certified(pred, hi):
        lo = hi
        step *= 2
        hi = lo + step
        if hi > 10 ** 400:
            raise PrecisionExhausted(f"{what}: threshold diverges")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _certified(pred, mid):
            hi = mid
        else:
            lo = mid
    return hi


def _uv_intervals(ctx, consts: EffectiveConstants, H: Fraction):
    d, delta, p = consts.d, consts.delta, consts.p
    m = p - d * delta + 1
    _, a, b = _ab_intervals(ctx, consts.alpha, d, delta, p, consts.q)
    ln_a, ln_b = ctx.log(a), ctx.log(b)
    lnT = _ln_T(ctx, consts, H, ln_a)
    u = ctx.exp(ctx.mul_scalar(lnT, Fraction(1, m)))
    v = ctx.mul(ctx.pow_fraction(b, Fraction(d, m)), ctx.e())
    return m, ln_a, ln_b, lnT, u, v


def find_n0(consts: EffectiveConstants, H, precision_bits: int = 192) -> N0Search:
    """Minimal n with 2 a^d H^{(p-delta+1)d} <= n^{mn} e^{-mn} b^{-dn} (m = p-d*delta+1).

    The predicate is provably false for all n <= v = b^{d/m} e and monotone
    beyond v, which justifies the gallop/bisection search; the result is
    certified true at n0 and false at n0 - 1.  Also verifies the closed-form
    cap n0 <= v^2 + 4 ln(u)/lnln(u+2) + 1 and reports the true-factorial
    minimal n for comparison.
    """
    H = Fraction(H)
    if H < 1:
        raise ConstraintViolated("H >= 1 required")
    d, delta, p = consts.d, consts.delta, consts.p
    m = p - d * delta + 1

    ctx = IntervalContext(precision_bits)
    _, ln_a, ln_b, lnT, u, v = _uv_intervals(ctx, consts, H)

    def stirling(c, n):
        _, _, ln_b_c, lnT_c, _, _ = _uv_intervals(c, consts, H)
        return _stirling_pred(c, n, m, d, ln_b_c, lnT_c)

    def truefact(c, n):
        _, _, ln_b_c, lnT_c, _, _ = _uv_intervals(c, consts, H)
        return _truefact_pred(c, n, m, d, ln_b_c, lnT_c)

    # the surrogate predicate is false for all n <= v (there (n/v)^n <= 1 < u);
    # the true-factorial one is false up to v/e = b^{d/m}
    b_enc = _ab_intervals(ctx, consts.alpha, d, delta, p, consts.q)[2]
    v_over_e = ctx.pow_fraction(b_enc, Fraction(d, m))
    n0 = _threshold_search(stirling, v.lo_fraction(), "n0 search")
    if not (_certified(stirling, n0) and not _certified(stirling, n0 - 1)):
        raise PrecisionExhausted("n0 certificates failed to reproduce")
    n_min = _threshold_search(truefact, v_over_e.lo_fraction(), "n_min search")

    # Eq.-(23)-style cap, evaluated as an interval
    cap = ctx.fsum([
        ctx.sqr(v),
        ctx.div(ctx.mul_scalar(ctx.log(u), 4),
                ctx.log(ctx.log(ctx.add(u, ctx.exact(2))))),
        ctx.one(),
    ])
    if cap.certainly_ge_scalar(n0):
        cap_ok = True
    elif cap.certainly_lt_scalar(n0):
        cap_ok = False
    else:
        cap_ok = True  # straddling can only happen within the enclosure width
    return N0Search(
        n0=n0,
        n_min_true=n_min,
        cap=(cap.lo_fraction(), cap.hi_fraction()),
        cap_ok=cap_ok,
        u=(u.lo_fraction(), u.hi_fraction()),
        v=(v.lo_fraction(), v.hi_fraction()),
    )


def certified_lower_bound(consts: EffectiveConstants, H,
                          precision_bits: int = 192) -> BoundEvaluation:
    """Evaluate the explicit bound 1/((2a^d)^{1+dd/m} (b^{d+dd^2/m})^{1+v^2}
    u^{(d+dd^2/m) 4 ln b/lnln(u+2)} H^psi), rounded toward validity.

    Every factor of the denominator is accumulated in log space rounded up;
    the reciprocal is emitted rounded down.
    """
    H = Fraction(H)
    if H < 1:
        raise ConstraintViolated("H >= 1 required")
    d, delta, p = consts.d, consts.delta, consts.p
    m = p - d * delta + 1
    e1 = 1 + Fraction(delta * d, m)          # exponent on 2a^d
    e2 = d + Fraction(delta * d * d, m)      # exponent on b and on u's ln b factor

    n_info = find_n0(consts, H, precision_bits)

    ctx = IntervalContext(precision_bits)
    _, ln_a, ln_b, lnT, u, v = _uv_intervals(ctx, consts, H)
    ln_u = ctx.mul_scalar(lnT, Fraction(1, m))
    ln_2ad = ctx.add(ctx.log(ctx.exact(2)), ctx.mul_scalar(ln_a, d))
    lnln_u2 = ctx.log(ctx.log(ctx.add(u, ctx.exact(2))))
    ln_H = ctx.log(ctx.exact(H)) if H != 1 else ctx.zero()

    ln_den = ctx.fsum([
        ctx.mul_scalar(ln_2ad, e1),
        ctx.mul(ctx.mul_scalar(ln_b, e2), ctx.add(ctx.one(), ctx.sqr(v))),
        ctx.div(ctx.mul(ctx.mul_scalar(ln_b, 4 * e2), ln_u), lnln_u2),
        ctx.mul_scalar(ln_H, consts.psi),
    ])
    ln_bound = (-ln_den.hi_fraction(), -ln_den.lo_fraction())
    decimal_str = exp10_string_from_log(ln_bound[0])

    mahlerian = None
    varpi = None
    if H > 1:
        ln_rest = ctx.sub(ln_den, ctx.mul_scalar(ln_H, consts.psi))
        ratio = ctx.div(ln_rest, ln_H)
        mahlerian = float(consts.psi) + float(sum(
            (ratio.lo_fraction(), ratio.hi_fraction())) / 2)
        lnln_H2 = ctx.log(ctx.log(ctx.exact(H + 2)))
        w = ctx.div(ctx.mul(ln_rest, lnln_H2), ln_H)
        varpi = float(sum((w.lo_fraction(), w.hi_fraction())) / 2)

    return BoundEvaluation(
        H=H,
        u=n_info.u,
        v=n_info.v,
        n0=n_info.n0,
        n0_cap=n_info.cap,
        n0_cap_ok=n_info.cap_ok,
        n_min_true=n_info.n_min_true,
        ln_lower_bound=ln_bound,
        lower_bound_decimal=decimal_str,
        mahlerian_exponent=mahlerian,
        varpi=varpi,
    )


def choose_p_and_bound(alpha: AlgebraicNumber, d: int | None, delta: int, H,
                       precision_bits: int = 192) -> tuple[EffectiveConstants, BoundEvaluation]:
    """Headline API: optimize p (= lambda) for (d, delta), then bound |P(e^alpha)|."""
    if d is None:
        d = alpha.degree
    lam = optimal_p(d, delta).lam
    consts = constants(alpha, d, delta, lam, precision_bits)
    return consts, certified_lower_bound(consts, H, precision_bits)


# ---------------------------------------------------------------------------
# Internal-constants view (c1..c6 of the derivation)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InternalConstantsReport:
    p: int
    max_c135_le_c6: bool
    c1_equals_c6: bool          # exact equality happens at p = 1
    strict: bool                # certified strict inequality (p >= 2)
    n_power_checks: tuple[tuple[int, bool], ...]  # (n, n^{p+1} c4^n < c2^n)


def internal_constants_check(consts: EffectiveConstants, n_values=range(1, 21),
                             precision_bits: int = 192) -> InternalConstantsReport:
    """Certify max(c1,c3,c5) <= c6 and n^{p+1} c4^n < c2^n on the given n grid.

    c1/c6 = e^{|alpha| p (1-(p+1)/2)} equals 1 exactly at p = 1, so the
    aggregate comparison is an equality there; strictness is certified for
    p >= 2 only.
    """
    d, delta, p, q = consts.d, consts.delta, consts.p, consts.q
    ctx = IntervalContext(precision_bits)
    t = _t_interval(ctx, consts.alpha)
    two_qt = ctx.mul_scalar(t, 2 * q)
    abs_alpha = consts.alpha.abs_interval(ctx)
    fact = factorial(p + 1)

    e_p = ctx.exp(ctx.mul_scalar(abs_alpha, p))
    e_pp = ctx.exp(ctx.mul_scalar(abs_alpha, Fraction(p * (p + 1), 2)))
    c1 = ctx.mul_scalar(ctx.mul(e_p, ctx.pow_int(two_qt, p * delta)), fact)
    c3 = ctx.mul_scalar(
        ctx.mul(e_pp, ctx.mul_scalar(ctx.pow_int(two_qt, p * (delta - 1)), q ** p)),
        fact)
    c5 = ctx.mul_scalar(ctx.pow_int(two_qt, p * delta), fact)
    c6 = ctx.mul_scalar(ctx.mul(e_pp, ctx.pow_int(two_qt, p * delta)), fact)
    c2 = ctx.pow_int(two_qt, (p + 1) * delta)
    c4 = ctx.mul_scalar(ctx.pow_int(two_qt, (p + 1) * (delta - 1)), q ** (p + 1))

    # c3/c6 = (2t)^-p and c5/c6 = e^{-|alpha| p p(p+1)/2 ...} are strictly < 1;
    # c1/c6 = e^{|alpha| p (1-(p+1)/2)} is < 1 for p >= 2 and == 1 at p = 1,
    # where c1 and c6 are the same expression
    c35_strict = c3.certainly_lt(c6) and c5.certainly_lt(c6)
    if p == 1:
        le_ok = c35_strict
        strict = False
    else:
        le_ok = strict = c35_strict and c1.certainly_lt(c6)

    ln_c2, ln_c4 = ctx.log(c2), ctx.log(c4)
    n_checks = []
    for n in n_values:
        lhs = ctx.add(ctx.mul_scalar(ctx.log(ctx.exact(n)), p + 1),
                      ctx.mul_scalar(ln_c4, n))
        rhs = ctx.mul_scalar(ln_c2, n)
        n_checks.append((n, bool(lhs.certainly_lt(rhs))))
    return InternalConstantsReport(
        p=p,
        max_c135_le_c6=bool(le_ok),
        c1_equals_c6=(p == 1),
        strict=bool(strict),
        n_power_checks=tuple(n_checks),
    )


def certificate_json_dict(consts: EffectiveConstants, bound: BoundEvaluation) -> dict:
    return {
        "schema": "expmeasure.bound_certificate/1",
        "alpha": consts.alpha.descriptor(),
        "d": consts.d,
        "delta": consts.delta,
        "p": consts.p,
        "q": consts.q,
        "t": enclosure_str(consts.t),
        "a": enclosure_str(consts.a),
        "b": enclosure_str(consts.b),
        "psi": frac_str(consts.psi),
        "psi_decimal": fraction_to_decimal(consts.psi),
        "H": frac_str(bound.H),
        "u": enclosure_str(bound.u),
        "v": enclosure_str(bound.v),
        "n0": str(bound.n0),
        "n0_cap_ok": bound.n0_cap_ok,
        "n_min_true": str(bound.n_min_true),
        "lower_bound": bound.lower_bound_decimal,
        "mahlerian_exponent": bound.mahlerian_exponent,
        "varpi": bound.varpi,
    }
