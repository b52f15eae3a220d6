"""Exponent algebra for the transcendence measure.

Everything here is exact rational arithmetic except the sandwich bounds,
which involve sqrt(d^2 - d) and are certified with interval enclosures.
The optimized accessory parameter is computed with integer square roots
only: floor(delta * sqrt(d^2-d)) = isqrt(delta^2 * (d^2 - d)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import ConstraintViolated, DegenerateDenominator, PrecisionExhausted
from .intervals import IntervalContext, PRECISION_CAP, RInterval


def psi(d: int, delta: int, p: int) -> Fraction:
    """delta*d^2*(p-delta+1)/(p-delta*d+1) + d*(p-delta+1) - 1, exact."""
    if d < 1 or delta < 1:
        raise ConstraintViolated("need d >= 1 and delta >= 1")
    if p < delta:
        raise ConstraintViolated(f"need p >= delta, got p={p} < delta={delta}")
    if p - delta * d + 1 == 0:
        raise DegenerateDenominator(f"psi pole at p = delta*d - 1 = {p}")
    return (Fraction(delta * d * d * (p - delta + 1), p - delta * d + 1)
            + d * (p - delta + 1) - 1)


def floor_delta_sqrt(d: int, delta: int) -> int:
    """floor(delta * sqrt(d^2 - d)) by exact integer square root."""
    return isqrt(delta * delta * (d * d - d))


@dataclass(frozen=True)
class OptimalChoice:
    """The optimized accessory parameter and its competitors."""

    d: int
    delta: int
    p1: int
    p2: int
    lam: int
    psi_lambda: Fraction
    x0_enclosure: tuple[Fraction, Fraction] | None  # None when d = 1


def optimal_p(d: int, delta: int) -> OptimalChoice:
    """Minimize p -> psi(d, delta, p) over integers p >= delta*d.

    For d = 1 the function is constant in the valid range, so lambda = delta.
    For d >= 2 the minimum is at p1 or p2 around x0 = delta*d - 1 +
    delta*sqrt(d^2-d); ties resolve to p1.
    """
    if d < 1 or delta < 1:
        raise ConstraintViolated("need d >= 1 and delta >= 1")
    if d == 1:
        lam = delta
        return OptimalChoice(d, delta, lam, lam, lam, psi(1, delta, lam), None)
    fl = floor_delta_sqrt(d, delta)
    p1 = delta * d - 1 + fl
    p2 = p1 + 1
    v1, v2 = psi(d, delta, p1), psi(d, delta, p2)
    lam, val = (p1, v1) if v1 <= v2 else (p2, v2)
    x0 = _x0_enclosure(d, delta, p1, p2)
    return OptimalChoice(d, delta, p1, p2, lam, val, x0)


def _x0_enclosure(d: int, delta: int, p1: int, p2: int) -> tuple[Fraction, Fraction]:
    """Enclosure of x0 = delta*d - 1 + delta*sqrt(d^2-d), certified inside (p1, p2)."""
    bits = 64
    while True:
        ctx = IntervalContext(bits)
        root = ctx.sqrt(ctx.exact(d * d - d))
        x0 = ctx.add(ctx.mul_scalar(root, delta), ctx.exact(delta * d - 1))
        if x0.certainly_gt_scalar(p1) and x0.certainly_lt_scalar(p2):
            return (x0.lo_fraction(), x0.hi_fraction())
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"x0 enclosure for d={d}, delta={delta}")
        bits *= 2


def floor_identity_check(d: int, delta: int) -> bool:
    """floor(delta*sqrt(d^2-d)) == delta*d - ceil((delta+1)/2), exactly."""
    if d < 2:
        raise ConstraintViolated("identity regime needs d >= 2")
    return floor_delta_sqrt(d, delta) == delta * d - (delta + 2) // 2


@dataclass(frozen=True)
class CompetingExponents:
    zheng: int
    mahler: int
    lang_galochkin: int
    kappe_applicable: bool


def competing_exponents(d: int, delta: int) -> CompetingExponents:
    base = (4 * d * d - 2 * d) * delta
    return CompetingExponents(
        zheng=base - 1,
        mahler=base + 2 * d - 1,
        lang_galochkin=4 * delta * d * d,
        kappe_applicable=(delta == 1),
    )


@dataclass(frozen=True)
class PsiBoundsReport:
    """Certified sandwich and dominance checks for psi(d, delta, lambda)."""

    d: int
    delta: int
    psi_lambda: Fraction
    lower_ok: bool
    upper_ok: bool
    zheng_ok: bool
    zheng_equality: bool
    quarter_ok: bool | None  # tested only for delta >= 2
    lower_enclosure: tuple[Fraction, Fraction]
    upper_enclosure: tuple[Fraction, Fraction]


def _decide_le(value: Fraction, target: RInterval) -> bool | None:
    """Is value <= target (exact reals)?  None when the enclosure cannot tell."""
    if target.certainly_ge_scalar(value):
        return True
    if target.certainly_lt_scalar(value):
        return False
    return None


def psi_bounds_check(d: int, delta: int) -> PsiBoundsReport:
    """Verify Eq.-(2)-style bounds with certified enclosures of sqrt(d^2-d).

    lower:  (2d^2 + 2d*sqrt(d^2-d) - d)*delta - 1 <= psi(lambda)
    upper:  psi(lambda) <= lower + d/(delta*sqrt(d^2-d) - 1)
    plus exact dominance checks against Zheng's exponent.
    """
    if d < 2:
        raise ConstraintViolated("bounds regime needs d >= 2")
    choice = optimal_p(d, delta)
    value = choice.psi_lambda

    bits = 128
    while True:
        ctx = IntervalContext(bits)
        root = ctx.sqrt(ctx.exact(d * d - d))
        # (2d^2 + 2d*root - d)*delta - 1
        lower = ctx.sub(
            ctx.mul_scalar(ctx.add(ctx.mul_scalar(root, 2 * d),
                                   ctx.exact(2 * d * d - d)),
                           delta),
            ctx.one())
        denom = ctx.sub(ctx.mul_scalar(root, delta), ctx.one())
        upper = ctx.add(lower, ctx.div(ctx.exact(d), denom))
        # lower_ok means lower <= value
        if lower.certainly_le_scalar(value):
            lower_ok = True
        elif lower.certainly_gt_scalar(value):
            lower_ok = False
        else:
            lower_ok = None
        upper_ok = _decide_le(value, upper)
        if lower_ok is not None and upper_ok is not None:
            lower_enc = (lower.lo_fraction(), lower.hi_fraction())
            upper_enc = (upper.lo_fraction(), upper.hi_fraction())
            break
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"psi bounds for d={d}, delta={delta}")
        bits *= 2

    comp = competing_exponents(d, delta)
    zheng_ok = value <= comp.zheng
    zheng_equality = value == comp.zheng
    quarter_ok = None
    if delta >= 2:
        quarter_ok = value <= Fraction(4 * d * d - 2 * d) * delta - Fraction(1, 4) * delta
    return PsiBoundsReport(d, delta, value, lower_ok, upper_ok, zheng_ok,
                           zheng_equality, quarter_ok, lower_enc, upper_enc)


def monotonicity_check(d: int, delta_max: int) -> bool:
    """True iff delta -> psi(d, delta, lambda_delta) strictly increases to delta_max."""
    if delta_max < 2:
        raise ConstraintViolated("need delta_max >= 2")
    values = [optimal_p(d, delta).psi_lambda for delta in range(1, delta_max + 1)]
    return all(a < b for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class ClosedFormCheck:
    d: int
    which: int
    computed: Fraction
    paper_value: Fraction
    matches_paper: bool
    alt_value: Fraction | None = None
    matches_alt: bool | None = None


def closed_form_check(d: int, which: int) -> ClosedFormCheck:
    """Compare psi at the stated optimal p against the printed closed forms.

    which=3 evaluates the printed numerator over both denominators 3d-1 and
    3d-2 and reports which one matches; the computed psi is never replaced
    by either printed form.
    """
    if d < 2:
        raise ConstraintViolated("closed forms stated for d >= 2")
    if which == 1:
        computed = psi(d, 1, 2 * d - 2)
        paper = Fraction(4 * d * d - 2 * d - 1)
        return ClosedFormCheck(d, 1, computed, paper, computed == paper)
    if which == 2:
        computed = psi(d, 2, 4 * d - 2)
        paper = Fraction(16 * d ** 3 - 16 * d * d + d + 1, 2 * d - 1)
        return ClosedFormCheck(d, 2, computed, paper, computed == paper)
    if which == 3:
        computed = psi(d, 3, 6 * d - 3)
        numerator = 36 * d ** 3 - 42 * d * d + 7 * d + 2
        printed = Fraction(numerator, 3 * d - 1)
        alt = Fraction(numerator, 3 * d - 2)
        return ClosedFormCheck(d, 3, computed, printed, computed == printed,
                               alt, computed == alt)
    raise ConstraintViolated("which must be 1, 2 or 3")


@dataclass(frozen=True)
class ParityRow:
    d: int
    delta: int
    psi_p1: Fraction
    psi_p2: Fraction
    winner: str          # "p1" | "p2" | "tie"
    expected: str | None  # conjectured winner, None outside the conjecture
    matches: bool | None


@dataclass(frozen=True)
class ParityScanReport:
    rows: tuple[ParityRow, ...]
    counterexamples: tuple[ParityRow, ...]


def parity_scan(d_max: int, delta_max: int) -> ParityScanReport:
    """Record sign(psi(p1) - psi(p2)) over the grid; report, do not assert.

    Conjectured pattern: odd delta >= 3 -> p1 wins; even delta >= 2 -> p2 wins.
    """
    if d_max < 2 or delta_max < 2:
        raise ConstraintViolated("scan needs d_max >= 2 and delta_max >= 2")
    rows = []
    for d in range(2, d_max + 1):
        for delta in range(2, delta_max + 1):
            choice = optimal_p(d, delta)
            v1, v2 = psi(d, delta, choice.p1), psi(d, delta, choice.p2)
            winner = "tie" if v1 == v2 else ("p1" if v1 < v2 else "p2")
            if delta >= 3 and delta % 2 == 1:
                expected = "p1"
            elif delta % 2 == 0:
                expected = "p2"
            else:
                expected = None
            matches = (winner == expected) if expected is not None else None
            rows.append(ParityRow(d, delta, v1, v2, winner, expected, matches))
    bad = tuple(r for r in rows if r.matches is False)
    return ParityScanReport(tuple(rows), bad)


def phi(d: int, delta: int, p: int, k: int) -> Fraction:
    """d*k - 1 + d^2*k*(p-k+1)/(p + k*d - d*(p+1) + 1), exact."""
    if d < 1:
        raise ConstraintViolated("d >= 1 failed")
    if not (p >= delta >= 1):
        raise ConstraintViolated(f"p >= delta >= 1 failed for p={p}, delta={delta}")
    if not (1 <= k <= p - delta + 1):
        raise ConstraintViolated(f"1 <= k <= p - delta + 1 failed for k={k}")
    denom = p + k * d - d * (p + 1) + 1
    if denom <= 0:
        raise ConstraintViolated(f"p + k*d - d*(p+1) + 1 > 0 failed (= {denom})")
    return d * k - 1 + Fraction(d * d * k * (p - k + 1), denom)


def admissible_k_range(d: int, delta: int, p: int) -> range:
    """Integers k with 1 <= k <= p - delta + 1 and positive phi denominator."""
    k_min = max(1, ((d - 1) * (p + 1)) // d + 1)
    return range(k_min, p - delta + 2)


@dataclass(frozen=True)
class PhiMonotonicity:
    ok: bool
    constant: bool
    k_values: tuple[int, ...]


def phi_monotonicity_check(d: int, delta: int, p: int) -> PhiMonotonicity:
    """phi strictly decreasing over admissible k (d >= 2); constant for d = 1."""
    ks = tuple(admissible_k_range(d, delta, p))
    if len(ks) < 2:
        raise ConstraintViolated("need at least two admissible k values")
    values = [phi(d, delta, p, k) for k in ks]
    if d == 1:
        return PhiMonotonicity(ok=all(v == values[0] for v in values),
                               constant=True, k_values=ks)
    strict = all(a > b for a, b in zip(values, values[1:]))
    return PhiMonotonicity(ok=strict, constant=False, k_values=ks)


# ---------------------------------------------------------------------------
# Table emission
# ---------------------------------------------------------------------------

TABLE_COLUMNS = ("d", "delta", "p1", "p2", "lambda", "psi_lambda", "zheng",
                 "mahler", "lang_galochkin", "lower_bound_float", "upper_bound_float")


def exponent_table_rows(d_values, delta_values) -> list[dict]:
    """Fixed-column rows for CSV emission; d=1 rows leave the Eq.-(2) columns empty."""
    rows = []
    for d in d_values:
        for delta in delta_values:
            choice = optimal_p(d, delta)
            comp = competing_exponents(d, delta)
            row = {
                "d": d,
                "delta": delta,
                "p1": choice.p1,
                "p2": choice.p2,
                "lambda": choice.lam,
                "psi_lambda": f"{choice.psi_lambda.numerator}/{choice.psi_lambda.denominator}",
                "zheng": comp.zheng,
                "mahler": comp.mahler,
                "lang_galochkin": comp.lang_galochkin,
                "lower_bound_float": "",
                "upper_bound_float": "",
            }
            if d >= 2:
                report = psi_bounds_check(d, delta)
                row["lower_bound_float"] = float(sum(report.lower_enclosure) / 2)
                row["upper_bound_float"] = float(sum(report.upper_enclosure) / 2)
            rows.append(row)
    return rows
