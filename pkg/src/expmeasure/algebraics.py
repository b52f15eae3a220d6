"""Algebraic numbers with certified complex embeddings.

An :class:`AlgebraicNumber` is an exact object: a primitive integer minimal
polynomial plus a rational isolating rectangle selecting one root.  All
numerical questions about it (conjugate moduli, house, |alpha|) are answered
with certified enclosures.

Root certification never trusts the numerical solver.  mpmath supplies
approximations z_i only; the classical residual bound

    min_i |z - zeta_i|  <=  deg(p) * |p(z)| / |p'(z)|

(from p'/p = sum 1/(z - zeta_i)) turns each approximation into a disk that
provably contains a root, and exact rational disjointness of the disks plus
the pigeonhole principle certifies exactly one root per disk.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import ParseError, PrecisionExhausted, ZeroInput
from .intervals import (CRect, IntervalContext, PRECISION_CAP, RInterval,
                        mpfr_to_fraction)
from .numberfield import NumberField, NumberFieldElement
from .polynomials import (IntPoly, degree, derivative, eval_crect,
                          is_squarefree, normalize_primitive, poly_to_str,
                          rational_roots, reverse, trim)


@dataclass(frozen=True)
class Box:
    """Closed rational rectangle in the complex plane."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def __post_init__(self):
        if self.re_lo > self.re_hi or self.im_lo > self.im_hi:
            raise ValueError("malformed box")

    def as_tuple(self):
        return (self.re_lo, self.re_hi, self.im_lo, self.im_hi)

    def __str__(self):
        return ",".join(str(v) for v in self.as_tuple())


@dataclass(frozen=True)
class Ball:
    """Certified complex disk: contains exactly one root of its polynomial.

    Midpoint coordinates and radius are exact dyadic rationals, so all
    disk-vs-disk and disk-vs-box predicates are decided exactly.
    """

    mid_re: Fraction
    mid_im: Fraction
    radius: Fraction

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("negative radius")

    def conj(self) -> "Ball":
        return Ball(self.mid_re, -self.mid_im, self.radius)

    def disjoint(self, other: "Ball") -> bool:
        d2 = (self.mid_re - other.mid_re) ** 2 + (self.mid_im - other.mid_im) ** 2
        return d2 > (self.radius + other.radius) ** 2

    def intersects(self, other: "Ball") -> bool:
        return not self.disjoint(other)

    def inside_box(self, box: Box) -> bool:
        return (box.re_lo <= self.mid_re - self.radius
                and self.mid_re + self.radius <= box.re_hi
                and box.im_lo <= self.mid_im - self.radius
                and self.mid_im + self.radius <= box.im_hi)

    def outside_box(self, box: Box) -> bool:
        dx = max(box.re_lo - self.mid_re, self.mid_re - box.re_hi, Fraction(0))
        dy = max(box.im_lo - self.mid_im, self.mid_im - box.im_hi, Fraction(0))
        return dx * dx + dy * dy > self.radius ** 2

    def intersects_box(self, box: Box) -> bool:
        return not self.outside_box(box)

    def circumscribed_box(self) -> Box:
        r = self.radius
        return Box(self.mid_re - r, self.mid_re + r, self.mid_im - r, self.mid_im + r)

    def rect(self, ctx: IntervalContext) -> CRect:
        r = self.radius
        return CRect(ctx.interval(self.mid_re - r, self.mid_re + r),
                     ctx.interval(self.mid_im - r, self.mid_im + r))

    def abs_interval(self, ctx: IntervalContext) -> RInterval:
        """Enclosure of |root|: |midpoint| +- radius, floored at 0."""
        m = ctx.sqrt(ctx.exact(self.mid_re ** 2 + self.mid_im ** 2))
        r = ctx.exact(self.radius)
        lo_part = ctx.sub(m, r)
        hi_part = ctx.add(m, r)
        return RInterval(max(lo_part.lo, ctx.zero().lo), hi_part.hi)

    def midpoint_complex(self) -> complex:
        return complex(self.mid_re, self.mid_im)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    f = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -f if sign else f


@lru_cache(maxsize=256)
def certified_root_balls(minpoly: IntPoly, precision_bits: int) -> tuple[Ball, ...]:
    """Pairwise-disjoint certified root disks for a squarefree integer polynomial.

    Radii satisfy radius <= 2^-precision_bits * (1 + |midpoint|); the list is
    sorted by descending approximate real part, then descending imaginary part.
    """
    minpoly = trim(minpoly)
    d = degree(minpoly)
    if d < 1:
        raise ValueError("need a nonconstant polynomial")
    if d == 1:
        root = Fraction(-minpoly[0], minpoly[1])
        return (Ball(root, Fraction(0), Fraction(0)),)

    dpoly = derivative(minpoly)
    work = max(64, precision_bits) + 32
    while True:
        balls = _try_certify(minpoly, dpoly, d, work, precision_bits)
        if balls is not None:
            return balls
        if work >= PRECISION_CAP:
            raise PrecisionExhausted(
                f"root isolation for {minpoly} at {precision_bits} target bits")
        work *= 2


def _try_certify(minpoly, dpoly, d, work_bits, target_bits):
    hi_first = list(reversed(minpoly))
    try:
        with mpmath.workprec(work_bits + 8 * d):
            approx = mpmath.polyroots(hi_first, maxsteps=200, extraprec=work_bits)
            # read exact dyadic midpoints straight off the mantissas; going
            # through mpmath constructors would re-round to the active precision
            mids = [(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag))
                    for z in approx]
    except (mpmath.libmp.NoConvergence, ZeroDivisionError):
        return None

    ctx = IntervalContext(work_bits)
    balls = []
    tol = Fraction(1, 2 ** target_bits)
    for mid_re, mid_im in mids:
        point = CRect(ctx.exact(mid_re), ctx.exact(mid_im))
        pv = ctx.cabs(eval_crect(ctx, minpoly, point))
        dv = ctx.cabs(eval_crect(ctx, dpoly, point))
        if not dv.is_positive():
            return None
        eps_hi = ctx.mul_scalar(ctx.div(pv, dv), d).hi
        eps = mpfr_to_fraction(eps_hi)
        if eps > tol * (1 + max(abs(mid_re), abs(mid_im))):
            return None
        balls.append(Ball(mid_re, mid_im, eps))

    for i in range(d):
        for j in range(i + 1, d):
            if not balls[i].disjoint(balls[j]):
                return None
    balls.sort(key=lambda b: (-b.mid_re, -b.mid_im))
    return tuple(balls)


def _select_by_rule(minpoly: IntPoly, rule: str) -> Ball:
    """Deterministic root selection: extremal real or imaginary part.

    Ties between the two members of a complex-conjugate pair (certified via
    the conjugation symmetry of real polynomials) resolve to the larger
    imaginary part for re-rules, larger real part for im-rules.
    """
    axis = "re" if rule in ("+re", "-re") else "im"
    sign = 1 if rule.startswith("+") else -1

    def axis_range(ball: Ball) -> tuple[Fraction, Fraction]:
        v = sign * (ball.mid_re if axis == "re" else ball.mid_im)
        return (v - ball.radius, v + ball.radius)

    def attempt(bits):
        balls = list(certified_root_balls(minpoly, bits))
        candidates = [b for b in balls
                      if not any(axis_range(o)[0] > axis_range(b)[1]
                                 for o in balls if o is not b)]
        if len(candidates) == 1:
            return candidates[0]
        if len(candidates) == 2:
            a, b = candidates
            if a.conj().intersects(b) and all(
                    a.conj().disjoint(o) for o in balls if o is not b and o is not a):
                # certified conjugate pair: the tie is exact, break on the other axis
                if axis == "re":
                    return a if a.mid_im > b.mid_im else b
                return a if a.mid_re > b.mid_re else b
        return None

    bits = 64
    while True:
        selected = attempt(bits)
        if selected is not None:
            return selected
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(
                f"root selection '{rule}' for {minpoly}: extremal root not separable")
        bits *= 2


def _select_by_box(minpoly: IntPoly, box: Box) -> Ball:
    bits = 64
    while True:
        balls = certified_root_balls(minpoly, bits)
        inside = [b for b in balls if b.inside_box(box)]
        outside = [b for b in balls if b.outside_box(box)]
        if len(inside) + len(outside) == len(balls):
            if len(inside) == 1:
                return inside[0]
            raise ParseError(
                f"box {box} isolates {len(inside)} roots of {minpoly}; need exactly 1")
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(
                f"box {box} cannot be certified against the roots of {minpoly} "
                "(a root may lie on the boundary)")
        bits *= 2


def _tight_box(minpoly: IntPoly, ball: Ball) -> Box:
    """Rational box around one certified disk, isolated from all other disks."""
    bits = 64
    while True:
        balls = certified_root_balls(minpoly, bits)
        matches = [b for b in balls if not b.disjoint(ball)]
        if len(matches) == 1:
            candidate = matches[0].circumscribed_box()
            others = [b for b in balls if b is not matches[0]]
            if all(b.outside_box(candidate) for b in others):
                return candidate
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"cannot synthesize isolating box for {minpoly}")
        bits *= 2


@dataclass(frozen=True)
class AlgebraicNumber:
    """Exact algebraic number = primitive minimal polynomial + isolating box."""

    minpoly: IntPoly
    root_box: Box

    @property
    def degree(self) -> int:
        return degree(self.minpoly)

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.minpoly)

    def is_zero(self) -> bool:
        return self.minpoly == (0, 1)

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(-self.minpoly[0], self.minpoly[1])

    def field(self) -> NumberField:
        return NumberField(self.minpoly)

    def selected_ball(self, precision_bits: int = 128) -> Ball:
        """The certified disk for this number's own embedding."""
        if self.degree == 1:
            return certified_root_balls(self.minpoly, precision_bits)[0]
        bits = max(64, precision_bits)
        while True:
            balls = certified_root_balls(self.minpoly, bits)
            hits = [b for b in balls if b.intersects_box(self.root_box)]
            if len(hits) == 1:
                return hits[0]
            if bits >= PRECISION_CAP:
                raise PrecisionExhausted(
                    f"embedding lookup in box {self.root_box} of {self.minpoly}")
            bits *= 2

    def selected_rect(self, ctx: IntervalContext) -> CRect:
        return self.selected_ball(ctx.precision).rect(ctx)

    def abs_interval(self, ctx: IntervalContext) -> RInterval:
        return self.selected_ball(ctx.precision).abs_interval(ctx)

    def descriptor(self) -> str:
        return f"{poly_to_str(self.minpoly)}:box={self.root_box}"

    def __str__(self):
        return self.descriptor()


def make_algebraic(minpoly, box: Box | None = None, rule: str = "+re") -> AlgebraicNumber:
    """Validate and construct an AlgebraicNumber.

    The polynomial is normalized to primitive/positive-leading-coefficient
    form, checked squarefree, and (for degree >= 2) checked to have no
    rational root.  Full irreducibility remains a caller obligation.
    """
    coeffs = normalize_primitive(minpoly)
    if degree(coeffs) < 1:
        raise ParseError("minimal polynomial must be nonconstant")
    if not is_squarefree(coeffs):
        raise ParseError(f"{poly_to_str(coeffs)} is not squarefree")
    if degree(coeffs) >= 2 and rational_roots(coeffs):
        raise ParseError(
            f"{poly_to_str(coeffs)} has a rational root, so it is reducible")
    if degree(coeffs) == 1:
        root = Fraction(-coeffs[0], coeffs[1])
        synth = Box(root, root, Fraction(0), Fraction(0))
        if box is not None:
            if not (box.re_lo <= root <= box.re_hi and box.im_lo <= 0 <= box.im_hi):
                raise ParseError(f"box {box} does not contain the root {root}")
            synth = box
        return AlgebraicNumber(coeffs, synth)
    ball = _select_by_box(coeffs, box) if box is not None else _select_by_rule(coeffs, rule)
    stored_box = box if box is not None else _tight_box(coeffs, ball)
    return AlgebraicNumber(coeffs, stored_box)


_POLY_TERM = _re.compile(r"([+-]?)\s*(\d+)?\s*\*?\s*(x(?:\^(\d+))?)?\s*")


def parse_poly(text: str) -> IntPoly:
    text = text.strip().replace(" ", "")
    if not text:
        raise ParseError("empty polynomial")
    pos = 0
    coeffs: dict[int, int] = {}
    while pos < len(text):
        m = _POLY_TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError(f"cannot parse polynomial {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) is not None else 1
        if m.group(3) is None:
            power = 0
        elif m.group(4) is not None:
            power = int(m.group(4))
        else:
            power = 1
        coeffs[power] = coeffs.get(power, 0) + sign * coeff
        pos = m.end()
    top = max(coeffs)
    return trim(tuple(coeffs.get(i, 0) for i in range(top + 1)))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def parse_algebraic(text: str) -> AlgebraicNumber:
    """Parse "<int poly in x>[:box=<re_lo>,<re_hi>,<im_lo>,<im_hi> | :+re|:-re|:+im|:-im]".

    Without a selector the root with the largest real part is chosen (exact
    conjugate-pair ties resolve to the larger imaginary part).
    """
    text = text.strip()
    poly_part, sep, sel = text.partition(":")
    coeffs = parse_poly(poly_part)
    if not sep:
        return make_algebraic(coeffs)
    sel = sel.strip()
    if sel.startswith("box="):
        parts = sel[4:].split(",")
        if len(parts) != 4:
            raise ParseError("box needs four rational endpoints")
        return make_algebraic(coeffs, box=Box(*(parse_rational(p) for p in parts)))
    if sel in ("+re", "-re", "+im", "-im"):
        return make_algebraic(coeffs, rule=sel)
    raise ParseError(f"unknown root selector {sel!r}")


# ---------------------------------------------------------------------------
# Spec operations
# ---------------------------------------------------------------------------

def conjugates(alpha: AlgebraicNumber, precision_bits: int = 128) -> list[Ball]:
    """All deg(alpha) embeddings as pairwise-disjoint certified disks."""
    return list(certified_root_balls(alpha.minpoly, precision_bits))


def house(alpha: AlgebraicNumber, rel_bits: int = 64) -> RInterval:
    """Certified enclosure [lo, hi] of max |conjugate|, hi - lo <= 2^-rel_bits * hi."""
    bits = max(128, rel_bits + 16)
    while True:
        ctx = IntervalContext(bits)
        vals = [b.abs_interval(ctx) for b in certified_root_balls(alpha.minpoly, bits)]
        enclosure = vals[0]
        for v in vals[1:]:
            enclosure = ctx.max2(enclosure, v)
        width = enclosure.hi_fraction() - enclosure.lo_fraction()
        if width <= Fraction(1, 2 ** rel_bits) * abs(enclosure.hi_fraction()):
            return enclosure
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"house({alpha}) at {rel_bits} relative bits")
        bits *= 2


def denominator_surrogate(alpha: AlgebraicNumber) -> int:
    """Leading coefficient of the normalized minimal polynomial.

    A valid (not necessarily minimal) denominator: lc * alpha is an algebraic
    integer.
    """
    if alpha.is_zero():
        raise ZeroInput("denominator of 0 requested")
    return int(alpha.minpoly[-1])


@lru_cache(maxsize=128)
def inverse(alpha: AlgebraicNumber) -> AlgebraicNumber:
    """1/alpha: reversed minimal polynomial, embedding matched through z -> 1/z."""
    if alpha.is_zero():
        raise ZeroInput("inverse of 0")
    rev = normalize_primitive(reverse(alpha.minpoly))
    if alpha.is_rational():
        val = 1 / alpha.as_fraction()
        return make_algebraic(rev, box=Box(val, val, Fraction(0), Fraction(0)))
    bits = 128
    while True:
        ctx = IntervalContext(bits)
        image = ctx.cinv(alpha.selected_ball(bits).rect(ctx))
        re_lo, re_hi = image.re.lo_fraction(), image.re.hi_fraction()
        im_lo, im_hi = image.im.lo_fraction(), image.im.hi_fraction()
        balls = certified_root_balls(rev, bits)
        img_box = Box(re_lo, re_hi, im_lo, im_hi)
        hits = [b for b in balls if b.intersects_box(img_box)]
        if len(hits) == 1:
            return make_algebraic(rev, box=_tight_box(rev, hits[0]))
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"embedding of 1/({alpha})")
        bits *= 2


def house_den_bound_check(alpha: AlgebraicNumber) -> dict:
    """Check den(1/alpha) and house(1/alpha) against H(alpha)*sqrt(1+deg alpha)."""
    if alpha.is_zero():
        raise ZeroInput("house_den_bound_check(0)")
    inv = inverse(alpha)
    den = denominator_surrogate(inv)
    bound_sq = Fraction(alpha.height) ** 2 * (1 + alpha.degree)
    den_ok = Fraction(den) ** 2 <= bound_sq

    rel = 64
    while True:
        h = house(inv, rel_bits=rel)
        if h.hi_fraction() ** 2 <= bound_sq:
            house_ok = True
            break
        if h.lo_fraction() ** 2 > bound_sq:
            house_ok = False
            break
        rel *= 2
        if rel > PRECISION_CAP:
            raise PrecisionExhausted("house bound comparison")
    return {
        "denominator_ok": den_ok,
        "house_ok": house_ok,
        "denominator": den,
        "bound_squared": bound_sq,
    }


def charpoly_integrality_check(beta: NumberFieldElement) -> bool:
    """True iff beta is an algebraic integer (monic charpoly has integer coefficients)."""
    return all(c.denominator == 1 for c in beta.field.charpoly(beta))
