"""The determinant certificate behind the lower bound.

For a concrete integer polynomial P = a_0 + ... + a_delta X^delta and an
approximant system at (alpha, n, p), build the (p+1)x(p+1) determinant D whose
first p-delta+1 rows are the shifted coefficient rows and whose last delta
rows are scaled approximant value rows, then verify the inequality chain that
turns |Norm(D)| >= 1 into a lower bound on |L_0| = |P(e^alpha)|.

If D vanishes for the leading column subset {0..delta-1}, the construction
retries with the lexicographically next delta-subset of {0..p}; a nonzero
choice exists because det((P_{k,l}(1))) != 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial, gcd, lcm

from .approximants import (ApproximantSystem, FieldPoly, _det_poly_matrix,
                           poly_eval_one)
from .effective import EffectiveConstants, _ab_intervals
from .errors import AllSubsetsSingular, ConstraintViolated, PrecisionExhausted
from .intervals import CRect, IntervalContext, PRECISION_CAP
from .numberfield import NumberField, NumberFieldElement

Enc = tuple[Fraction, Fraction]


def reduced_value_matrix(system: ApproximantSystem) -> list[list[NumberFieldElement]]:
    """The (p+1)x(p+1) value matrix P_{k,l}(1), each column at its minimal
    integral scaling (k row, l column).

    The classical size bounds are stated for a normalization whose scaled
    values are algebraic integers; the minimal integral representative of
    each value column is entrywise dominated by any such scaling, so the
    stated bounds remain valid for it.
    """
    field = system.alpha.field()
    p = system.p
    columns = []
    for ell in range(p + 1):
        vals = [poly_eval_one(field, system.poly(k, ell)) for k in range(p + 1)]
        denom = 1
        for v in vals:
            for c in v.coords:
                denom = lcm(denom, c.denominator)
        ints = [int(c * denom) for v in vals for c in v.coords]
        content = 0
        for i in ints:
            content = gcd(content, abs(i))
        content = content or 1
        scale = Fraction(denom, content)
        columns.append([v * scale for v in vals])
    return [[columns[ell][k] for ell in range(p + 1)] for k in range(p + 1)]


def det_nfe(field: NumberField, rows: list[list[NumberFieldElement]]) -> NumberFieldElement:
    """Exact determinant over the field by Gaussian elimination."""
    m = [row[:] for row in rows]
    size = len(m)
    det = field.one()
    for c in range(size):
        pivot = next((r for r in range(c, size) if not m[r][c].is_zero()), None)
        if pivot is None:
            return field.zero()
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det = field.mul(det, m[c][c])
        inv = field.inv(m[c][c])
        for r in range(c + 1, size):
            if m[r][c].is_zero():
                continue
            factor = field.mul(m[r][c], inv)
            m[r] = [er - field.mul(factor, ec) for er, ec in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class SiegelCertificate:
    P_coeffs: tuple[int, ...]
    n: int
    p: int
    delta: int
    q: int
    ell_subset: tuple[int, ...]
    D: NumberFieldElement
    norm_D: Fraction
    conjugate_moduli: tuple[Enc, ...]

    def to_json_dict(self) -> dict:
        from .serialize import enclosure_str, frac_str
        return {
            "schema": "expmeasure.siegel_certificate/1",
            "P": list(self.P_coeffs),
            "n": self.n,
            "p": self.p,
            "delta": self.delta,
            "q": self.q,
            "ell_subset": list(self.ell_subset),
            "D_coords": [frac_str(c) for c in self.D.coords],
            "norm_D": frac_str(self.norm_D),
            "conjugate_moduli": [enclosure_str(e) for e in self.conjugate_moduli],
        }


def _coefficient_rows(field, P_coeffs, p: int, delta: int):
    rows = []
    for shift in range(p - delta + 1):
        row = [field.zero()] * (p + 1)
        for i, a in enumerate(P_coeffs):
            row[shift + i] = field.scalar(a)
        rows.append(row)
    return rows


def build_D(P_coeffs, system: ApproximantSystem, q: int, delta: int,
            precision_bits: int = 192) -> SiegelCertificate:
    """Assemble the determinant, retrying column subsets until D != 0.

    The approximant rows use the minimal integral scaling of each value
    column (see reduced_value_matrix): integrality and the classical size
    bounds then hold simultaneously, which the q^{(p+1)n+p} n! rescaling of
    an already-integral kernel column would break.
    """
    P_coeffs = tuple(int(a) for a in P_coeffs)
    p, n = system.p, system.n
    if len(P_coeffs) != delta + 1:
        raise ConstraintViolated(f"need exactly delta+1={delta + 1} coefficients")
    if all(a == 0 for a in P_coeffs):
        raise ConstraintViolated("P must be nonzero")
    if p < delta:
        raise ConstraintViolated(f"need p >= delta, got p={p} < {delta}")
    field = system.alpha.field()
    amat = reduced_value_matrix(system)
    coeff_rows = _coefficient_rows(field, P_coeffs, p, delta)
    for subset in combinations(range(p + 1), delta):
        rows = coeff_rows + [[amat[k][ell] for k in range(p + 1)] for ell in subset]
        D = det_nfe(field, rows)
        if not D.is_zero():
            ctx = IntervalContext(precision_bits)
            moduli = []
            from .algebraics import certified_root_balls
            for ball in certified_root_balls(system.alpha.minpoly, precision_bits):
                mod = ctx.cabs(D.eval_at(ctx, ball.rect(ctx)))
                moduli.append((mod.lo_fraction(), mod.hi_fraction()))
            return SiegelCertificate(
                P_coeffs=P_coeffs, n=n, p=p, delta=delta, q=q,
                ell_subset=subset, D=D, norm_D=field.norm(D),
                conjugate_moduli=tuple(moduli))
    raise AllSubsetsSingular(
        "every column subset gave D = 0; the approximant system is broken")


@dataclass(frozen=True)
class ChainCheck:
    name: str
    passed: bool | None      # None = not applicable
    log_slack: float | None
    detail: str = ""


@dataclass(frozen=True)
class ChainReport:
    checks: tuple[ChainCheck, ...]
    integrality_ok: bool
    all_passed: bool

    def check(self, name: str) -> ChainCheck:
        return next(c for c in self.checks if c.name == name)


def _decide(lhs, rhs, ctx) -> bool | None:
    """lhs <= rhs for interval values; None when undecided."""
    if lhs.certainly_le(rhs):
        return True
    if rhs.certainly_lt(lhs):
        return False
    return None


def verify_chain(cert: SiegelCertificate, system: ApproximantSystem,
                 consts: EffectiveConstants, H,
                 precision_bits: int = 192) -> ChainReport:
    """Certify the determinant inequalities with the explicit constants.

    (i)   |D|      <= a b^n H^{p-delta} n!^delta (|L_0| + H/n!^{p+1})
    (ii)  |sig(D)| <= a b^n H^{p-delta+1} n!^delta   for every embedding
    (iii) |Norm(D)| >= 1 when all matrix entries are algebraic integers
    (iv)  |L_0| >= M = 1/(a^d b^{dn} H^{(p-delta+1)(d-1)+p-delta} n!^{delta d})
                   - H/n!^{p+1}
    """
    from .algebraics import certified_root_balls, charpoly_integrality_check

    H = Fraction(H)
    p, n, delta, d = cert.p, cert.n, cert.delta, consts.d
    if H < max(abs(a) for a in cert.P_coeffs):
        raise ConstraintViolated("H must dominate the coefficients of P")
    field = system.alpha.field()
    nfact_delta = Fraction(factorial(n)) ** delta

    bits = precision_bits
    while True:
        ctx = IntervalContext(bits)
        _, a_enc, b_enc = _ab_intervals(ctx, consts.alpha, d, consts.delta,
                                        consts.p, consts.q)
        ab_n = ctx.mul(a_enc, ctx.pow_int(b_enc, n))
        balls = certified_root_balls(system.alpha.minpoly, bits)
        ident_ball = system.alpha.selected_ball(bits)
        ident = ident_ball.rect(ctx)

        exp_alpha = ctx.cexp(ident)
        L0 = ctx.complex_exact(0)
        for k, a_k in enumerate(cert.P_coeffs):
            L0 = ctx.cadd(L0, ctx.cmul_scalar(ctx.cpow_int(exp_alpha, k), a_k))
        absL0 = ctx.cabs(L0)

        absD = ctx.cabs(cert.D.eval_at(ctx, ident))
        rhs_i = ctx.mul(ctx.mul_scalar(ab_n, Fraction(H ** (p - delta)) * nfact_delta),
                        ctx.add(absL0, ctx.exact(H / factorial(n) ** (p + 1))))
        check_i = _decide(absD, rhs_i, ctx)

        rhs_ii = ctx.mul_scalar(ab_n, Fraction(H ** (p - delta + 1)) * nfact_delta)
        sigma_results = []
        for ball in balls:
            mod = ctx.cabs(cert.D.eval_at(ctx, ball.rect(ctx)))
            sigma_results.append(_decide(mod, rhs_ii, ctx))
        check_ii = (False if any(r is False for r in sigma_results)
                    else None if any(r is None for r in sigma_results) else True)

        # (iv): |L_0| >= M, with M possibly negative (then trivially true)
        inv_main = ctx.inv(ctx.mul(
            ctx.mul(ctx.pow_int(a_enc, d), ctx.pow_int(b_enc, d * n)),
            ctx.exact(Fraction(H ** ((p - delta + 1) * (d - 1) + p - delta))
                      * Fraction(factorial(n)) ** (delta * d))))
        M = ctx.sub(inv_main, ctx.exact(H / factorial(n) ** (p + 1)))
        if M.hi < 0:
            check_iv = True
        else:
            check_iv = _decide(M, absL0, ctx)

        if None not in (check_i, check_ii, check_iv):
            slack_i = _log_slack(ctx, rhs_i, absD)
            slack_ii = _log_slack(ctx, rhs_ii, _max_interval(ctx, [
                ctx.cabs(cert.D.eval_at(ctx, b.rect(ctx))) for b in balls]))
            break
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted("chain inequalities undecidable at cap")
        bits *= 2

    amat = reduced_value_matrix(system)
    integ = all(charpoly_integrality_check(amat[k][ell])
                for k in range(p + 1) for ell in cert.ell_subset)
    if integ:
        norm_ok = abs(cert.norm_D) >= 1
        check_iii = ChainCheck("norm_product", norm_ok,
                               float(abs(cert.norm_D)) if norm_ok else None,
                               detail=f"|Norm(D)| = {cert.norm_D}")
    else:
        check_iii = ChainCheck("norm_product", None, None,
                               detail="not applicable: entries not all algebraic integers")

    checks = (
        ChainCheck("D_bound", check_i, slack_i),
        ChainCheck("sigma_D_bound", check_ii, slack_ii),
        check_iii,
        ChainCheck("L0_lower", check_iv, None),
    )
    all_passed = all(c.passed for c in checks if c.passed is not None)
    return ChainReport(checks, integ, all_passed)


def _max_interval(ctx, intervals):
    out = intervals[0]
    for x in intervals[1:]:
        out = ctx.max2(out, x)
    return out


def _log_slack(ctx, bound, value) -> float | None:
    from .intervals import IntervalDomainError
    try:
        r = ctx.log(ctx.div(bound, value))
        return float((r.lo_fraction() + r.hi_fraction()) / 2)
    except IntervalDomainError:
        return None


# ---------------------------------------------------------------------------
# Column-reduction identity
# ---------------------------------------------------------------------------

def column_reduction_check(cert: SiegelCertificate, system: ApproximantSystem,
                           symbolic: bool = True,
                           precision_bits: int = 192) -> dict:
    """det is unchanged when the first column is replaced by the L_j / R_l column.

    symbolic: treat e^alpha as an indeterminate E and compare determinants in
    Q(alpha)[E] exactly.  numeric: evaluate both at E = e^alpha in ball
    arithmetic and require the enclosures to overlap.
    """
    field = system.alpha.field()
    p, delta = cert.p, cert.delta
    amat = reduced_value_matrix(system)
    coeff_rows = _coefficient_rows(field, cert.P_coeffs, p, delta)
    a_rows = [[amat[k][ell] for k in range(p + 1)] for ell in cert.ell_subset]
    plain_rows = coeff_rows + a_rows

    result = {"symbolic_ok": None, "numeric_ok": None}
    if symbolic:
        # entries become polynomials in E; original entries are constants
        def const(e) -> FieldPoly:
            return (e,) if not e.is_zero() else ()

        modified: list[list[FieldPoly]] = []
        for j, row in enumerate(plain_rows):
            if j < p - delta + 1:
                # L_j = sum_k a_k E^{k+j}
                poly = [field.zero()] * (j + delta + 1)
                for i, a in enumerate(cert.P_coeffs):
                    poly[j + i] = field.scalar(a)
                first: FieldPoly = tuple(poly)
            else:
                ell = cert.ell_subset[j - (p - delta + 1)]
                first = tuple(amat[k][ell] for k in range(p + 1))
            modified.append([first] + [const(e) for e in row[1:]])
        det_mod = _det_poly_matrix(field, modified)
        det_plain = det_nfe(field, plain_rows)
        expected: FieldPoly = (det_plain,) if not det_plain.is_zero() else ()
        result["symbolic_ok"] = (tuple(det_mod) == expected)

    ctx = IntervalContext(precision_bits)
    ident = system.alpha.selected_rect(ctx)
    exp_alpha = ctx.cexp(ident)
    exp_pows = [ctx.cpow_int(exp_alpha, k) for k in range(2 * p + 2)]

    def crect_of(e: NumberFieldElement) -> CRect:
        return e.eval_at(ctx, ident)

    rows_numeric: list[list[CRect]] = []
    for j, row in enumerate(plain_rows):
        if j < p - delta + 1:
            first = ctx.complex_exact(0)
            for i, a in enumerate(cert.P_coeffs):
                first = ctx.cadd(first, ctx.cmul_scalar(exp_pows[j + i], a))
        else:
            ell = cert.ell_subset[j - (p - delta + 1)]
            first = ctx.complex_exact(0)
            for k in range(p + 1):
                first = ctx.cadd(first, ctx.cmul(crect_of(amat[k][ell]), exp_pows[k]))
        rows_numeric.append([first] + [crect_of(e) for e in row[1:]])
    det_numeric = _det_crect(ctx, rows_numeric)
    d_enclosure = crect_of(cert.D)
    result["numeric_ok"] = _rects_overlap(det_numeric, d_enclosure)
    return result


def _det_crect(ctx: IntervalContext, rows: list[list[CRect]]) -> CRect:
    size = len(rows)
    if size == 1:
        return rows[0][0]
    total = ctx.complex_exact(0)
    for c in range(size):
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = ctx.cmul(rows[0][c], _det_crect(ctx, minor))
        if c % 2 == 1:
            term = ctx.cneg(term)
        total = ctx.cadd(total, term)
    return total


def _rects_overlap(a: CRect, b: CRect) -> bool:
    return (a.re.lo <= b.re.hi and b.re.lo <= a.re.hi
            and a.im.lo <= b.im.hi and b.im.lo <= a.im.hi)
