"""Simultaneous approximants to powers of the exponential, by exact kernel solve.

For a column index ell the polynomials P_{0,ell}, ..., P_{p,ell} over Q(alpha)
(degree n for k <= ell, n-1 for k > ell) make

    R_ell(x) = sum_k P_{k,ell}(x) e^{k alpha x}

vanish to order exactly (p+1)n + ell at x = 0.  The coefficients are the
one-dimensional kernel of the exact Taylor-constraint system; we certify the
vanishing order by recomputing the series and exhibiting a nonzero next
coefficient, and we verify det(P_{k,ell}(x)) = c x^{(p+1)n} as an exact
polynomial identity.

Canonical normalization per column: clear coordinate denominators to integers,
divide by the gcd of all integer coordinates, and flip sign so the first
nonzero coordinate in (k, degree, basis-index) order is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm

from .algebraics import AlgebraicNumber, certified_root_balls, house, inverse
from .errors import (DeterminantShapeViolation, ExpMeasureError,
                     KernelDimensionUnexpected, PrecisionExhausted,
                     VanishingOrderExcess)
from .intervals import IntervalContext, IntervalDomainError, PRECISION_CAP
from .numberfield import NumberField, NumberFieldElement

FieldPoly = tuple[NumberFieldElement, ...]  # coefficients low -> high


class ExpSeriesEngine:
    """Exact Taylor coefficients of x^j e^{k alpha x} over Q(alpha).

    coefficient of x^m is k^{m-j} alpha^{m-j} / (m-j)! for m >= j, else 0.
    """

    def __init__(self, field: NumberField, truncation_order: int):
        self.field = field
        self.truncation_order = truncation_order
        self._alpha_pows = [field.one()]
        alpha = field.alpha()
        for _ in range(truncation_order):
            self._alpha_pows.append(self.field.mul(self._alpha_pows[-1], alpha))

    def basis_coefficient(self, k: int, j: int, m: int) -> NumberFieldElement:
        if m < j:
            return self.field.zero()
        t = m - j
        return self._alpha_pows[t] * Fraction(k ** t, factorial(t))

    def remainder_coefficient(self, polys: tuple[FieldPoly, ...], m: int) -> NumberFieldElement:
        """Taylor coefficient of sum_k P_k(x) e^{k alpha x} at order m."""
        total = self.field.zero()
        for k, poly in enumerate(polys):
            for j, c in enumerate(poly):
                if not c.is_zero() and m >= j:
                    total = total + self.field.mul(c, self.basis_coefficient(k, j, m))
        return total


@dataclass(frozen=True)
class NormalizationRecord:
    denominator_cleared: int
    content_divided: int
    sign_flipped: bool


@dataclass(frozen=True)
class Column:
    ell: int
    polys: tuple[FieldPoly, ...]          # index k = 0..p
    vanishing_order: int
    normalization: NormalizationRecord


@dataclass(frozen=True)
class ApproximantSystem:
    alpha: AlgebraicNumber
    n: int
    p: int
    columns: tuple[Column, ...]           # index ell = 0..p
    det_poly: FieldPoly

    def poly(self, k: int, ell: int) -> FieldPoly:
        return self.columns[ell].polys[k]

    @property
    def vanishing_orders(self) -> tuple[int, ...]:
        return tuple(c.vanishing_order for c in self.columns)

    def det_constant(self) -> NumberFieldElement:
        """The c in det = c x^{(p+1)n}; equals the determinant evaluated at 1."""
        return self.det_poly[-1]

    def to_json_dict(self) -> dict:
        def coords_str(e: NumberFieldElement):
            return [f"{c.numerator}/{c.denominator}" for c in e.coords]

        return {
            "schema": "expmeasure.approximant_system/1",
            "alpha": self.alpha.descriptor(),
            "n": self.n,
            "p": self.p,
            "columns": [
                {
                    "ell": col.ell,
                    "vanishing_order": col.vanishing_order,
                    "normalization": {
                        "denominator_cleared": col.normalization.denominator_cleared,
                        "content_divided": col.normalization.content_divided,
                        "sign_flipped": col.normalization.sign_flipped,
                    },
                    "polys": [[coords_str(c) for c in poly] for poly in col.polys],
                }
                for col in self.columns
            ],
        }


def _degrees(n: int, p: int, ell: int) -> list[int]:
    return [n if k <= ell else n - 1 for k in range(p + 1)]


def _kernel_vector(field: NumberField, rows: list[list[NumberFieldElement]],
                   ncols: int) -> list[NumberFieldElement]:
    """One kernel vector of an exact matrix whose kernel must be 1-dimensional.

    Gauss-Jordan with deterministic pivoting (first nonzero entry, fixed
    column order).  Raises KernelDimensionUnexpected if nullity != 1.
    """
    m = [row[:] for row in rows]
    nrows = len(m)
    pivot_of_col: dict[int, int] = {}
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, e) for e in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [ei - field.mul(factor, rj) for ei, rj in zip(m[i], m[r])]
        pivot_of_col[c] = r
        r += 1
    free_cols = [c for c in range(ncols) if c not in pivot_of_col]
    if len(free_cols) != 1:
        raise KernelDimensionUnexpected(
            f"kernel dimension {len(free_cols)}, expected 1")
    free = free_cols[0]
    vec = [field.zero()] * ncols
    vec[free] = field.one()
    for c, pr in pivot_of_col.items():
        vec[c] = -m[pr][free]
    return vec


def _normalize_column(field: NumberField, vec: list[NumberFieldElement]):
    """Canonical scaling: integer coordinates, content 1, first nonzero positive."""
    denom = 1
    for e in vec:
        for c in e.coords:
            denom = lcm(denom, c.denominator)
    ints: list[int] = []
    for e in vec:
        for c in e.coords:
            ints.append(int(c * denom))
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    content = content or 1
    first = next((v for v in ints if v != 0), 1)
    sign = -1 if first < 0 else 1
    scale = Fraction(sign * denom, content)
    record = NormalizationRecord(denominator_cleared=denom,
                                 content_divided=content,
                                 sign_flipped=(sign < 0))
    return [e * scale for e in vec], record


def build_column(alpha: AlgebraicNumber, n: int, p: int, ell: int) -> Column:
    """Solve the exact vanishing system for one column and certify its order."""
    if n < 1 or p < 0 or not (0 <= ell <= p):
        raise ExpMeasureError(f"invalid column parameters n={n}, p={p}, ell={ell}")
    if alpha.is_zero():
        raise ExpMeasureError("alpha must be nonzero")
    field = alpha.field()
    order = (p + 1) * n + ell
    engine = ExpSeriesEngine(field, order + 1)
    degrees = _degrees(n, p, ell)
    unknowns = [(k, j) for k in range(p + 1) for j in range(degrees[k] + 1)]
    assert len(unknowns) == order + 1
    rows = [[engine.basis_coefficient(k, j, m) for (k, j) in unknowns]
            for m in range(order)]
    vec = _kernel_vector(field, rows, len(unknowns))
    vec, record = _normalize_column(field, vec)

    polys: list[FieldPoly] = []
    pos = 0
    for k in range(p + 1):
        width = degrees[k] + 1
        polys.append(tuple(vec[pos:pos + width]))
        pos += width
    polys = tuple(polys)

    for k, poly in enumerate(polys):
        if poly[-1].is_zero():
            raise ExpMeasureError(
                f"degree pattern violated: P_{k},{ell} has degree < {degrees[k]}")
    for m in range(order):
        if not engine.remainder_coefficient(polys, m).is_zero():
            raise ExpMeasureError(f"vanishing failed at order {m} (solver fault)")
    if engine.remainder_coefficient(polys, order).is_zero():
        raise VanishingOrderExcess(
            f"remainder vanishes beyond order {order} for ell={ell}")
    return Column(ell, polys, order, record)


# -- polynomial ring over the field (dense, low -> high) ----------------------

def _poly_add(field, a: FieldPoly, b: FieldPoly) -> FieldPoly:
    out = list(a) + [field.zero()] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = out[i] + c
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def _poly_mul(field, a: FieldPoly, b: FieldPoly) -> FieldPoly:
    if not a or not b:
        return ()
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if not bj.is_zero():
                out[i + j] = out[i + j] + field.mul(ai, bj)
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def _poly_neg(field, a: FieldPoly) -> FieldPoly:
    return tuple(-c for c in a)


def _det_poly_matrix(field, matrix: list[list[FieldPoly]]) -> FieldPoly:
    """Determinant of a matrix of field polynomials by minor expansion with
    memoization on column subsets."""
    size = len(matrix)
    cache: dict[tuple[int, ...], FieldPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> FieldPoly:
        if not cols:
            return (field.one(),)
        key = cols
        if row == size - len(cols) and key in cache:
            return cache[key]
        acc: FieldPoly = ()
        for idx, c in enumerate(cols):
            term = _poly_mul(field, matrix[row][c],
                             minor(row + 1, cols[:idx] + cols[idx + 1:]))
            if idx % 2 == 1:
                term = _poly_neg(field, term)
            acc = _poly_add(field, acc, term)
        if row == size - len(cols):
            cache[key] = acc
        return acc

    return minor(0, tuple(range(size)))


def build_system(alpha: AlgebraicNumber, n: int, p: int) -> ApproximantSystem:
    """All p+1 columns plus the determinant identity det = c x^{(p+1)n}, c != 0."""
    columns = tuple(build_column(alpha, n, p, ell) for ell in range(p + 1))
    field = alpha.field()
    matrix = [[columns[ell].polys[k] for ell in range(p + 1)] for k in range(p + 1)]
    det = _det_poly_matrix(field, matrix)
    top = (p + 1) * n
    if len(det) != top + 1 or any(not c.is_zero() for c in det[:-1]) or det[-1].is_zero():
        raise DeterminantShapeViolation(
            f"det has degree {len(det) - 1} and lower-order terms; expected c*x^{top}")
    return ApproximantSystem(alpha, n, p, columns, det)


def det_at_one_check(system: ApproximantSystem) -> bool:
    """det((P_{k,l}(1))) != 0, evaluated exactly."""
    total = system.alpha.field().zero()
    for c in system.det_poly:
        total = total + c
    return not total.is_zero()


def poly_eval_one(field, poly: FieldPoly) -> NumberFieldElement:
    total = field.zero()
    for c in poly:
        total = total + c
    return total


def scaled_values(system: ApproximantSystem, q: int) -> list[list[NumberFieldElement]]:
    """A_{k,l} = q^{(p+1)n+p} n! P_{k,l}(1), as a (p+1)x(p+1) matrix (k row, l col)."""
    field = system.alpha.field()
    scale = Fraction(q ** ((system.p + 1) * system.n + system.p) * factorial(system.n))
    return [[poly_eval_one(field, system.poly(k, ell)) * scale
             for ell in range(system.p + 1)]
            for k in range(system.p + 1)]


@dataclass(frozen=True)
class MetricCheckRow:
    kind: str                 # "entry" | "remainder" | "integrality"
    k: int | None
    ell: int
    embedding: int | None     # conjugate index for entry checks
    passed: bool
    log_slack: float | None   # ln(bound) - ln(|value|); None when value is 0


@dataclass(frozen=True)
class MetricBoundsReport:
    q: int
    rows: tuple[MetricCheckRow, ...]
    entries_ok: bool
    remainders_ok: bool
    integrality_ok: bool


def metric_bounds_report(system: ApproximantSystem, q: int,
                         precision_bits: int = 192) -> MetricBoundsReport:
    """Diagnostic size/integrality checks for the scaled values.

    The stated bounds are for the classical normalization of the approximants;
    the canonical kernel normalization may differ by a column scalar, so
    failures are recorded with their slack rather than raised.
    """
    from .algebraics import charpoly_integrality_check

    alpha, n, p = system.alpha, system.n, system.p
    field = alpha.field()
    amat = scaled_values(system, q)
    exponent = (p + 1) * n + p

    rows: list[MetricCheckRow] = []
    bits = precision_bits
    while True:
        ctx = IntervalContext(bits)
        t_enc = ctx.max_scalar(house(inverse(alpha), rel_bits=64), 1)
        two_qt = ctx.mul_scalar(t_enc, 2 * q)
        entry_bound = ctx.mul_scalar(ctx.pow_int(two_qt, exponent),
                                     factorial(n + 1))
        abs_alpha = alpha.abs_interval(ctx)
        rem_bound = ctx.mul_scalar(
            ctx.exp(ctx.mul_scalar(abs_alpha, Fraction(p * (p + 1), 2))),
            Fraction(n ** (p + 1) * q ** exponent, factorial(n) ** p))
        embeddings = certified_root_balls(alpha.minpoly, bits)
        pending = False
        rows = []
        for sigma, ball in enumerate(embeddings):
            rect = ball.rect(ctx)
            for k in range(p + 1):
                for ell in range(p + 1):
                    mod = ctx.cabs(amat[k][ell].eval_at(ctx, rect))
                    if mod.certainly_le(entry_bound):
                        ok, slack = True, _log_ratio(ctx, entry_bound, mod)
                    elif entry_bound.certainly_lt(mod):
                        ok, slack = False, _log_ratio(ctx, entry_bound, mod)
                    else:
                        pending = True
                        ok, slack = False, None
                    rows.append(MetricCheckRow("entry", k, ell, sigma, ok, slack))
        ident = alpha.selected_rect(ctx)
        exp_k = [ctx.cexp(ctx.cmul_scalar(ident, k)) for k in range(p + 1)]
        scale = Fraction(q ** exponent * factorial(n))
        for ell in range(p + 1):
            acc = ctx.complex_exact(0)
            for k in range(p + 1):
                val = poly_eval_one(field, system.poly(k, ell)).eval_at(ctx, ident)
                acc = ctx.cadd(acc, ctx.cmul(val, exp_k[k]))
            mod = ctx.cabs(ctx.cmul_scalar(acc, scale))
            if mod.certainly_le(rem_bound):
                ok, slack = True, _log_ratio(ctx, rem_bound, mod)
            elif rem_bound.certainly_lt(mod):
                ok, slack = False, _log_ratio(ctx, rem_bound, mod)
            else:
                pending = True
                ok, slack = False, None
            rows.append(MetricCheckRow("remainder", None, ell, None, ok, slack))
        if not pending:
            break
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted("metric bounds undecidable at cap")
        bits *= 2

    integ_ok = True
    for k in range(p + 1):
        for ell in range(p + 1):
            ok = charpoly_integrality_check(amat[k][ell])
            integ_ok &= ok
            rows.append(MetricCheckRow("integrality", k, ell, None, ok, None))

    entries_ok = all(r.passed for r in rows if r.kind == "entry")
    remainders_ok = all(r.passed for r in rows if r.kind == "remainder")
    return MetricBoundsReport(q, tuple(rows), entries_ok, remainders_ok, integ_ok)


def _log_ratio(ctx: IntervalContext, bound, value) -> float | None:
    """Midpoint estimate of ln(bound/value); None for zero values."""
    try:
        ratio = ctx.div(bound, value)
        if not ratio.is_positive():
            return None
        mid = ctx.log(ratio)
        return float((mid.lo_fraction() + mid.hi_fraction()) / 2)
    except IntervalDomainError:
        return None
