"""Exact arithmetic in Q[x]/(minpoly) with power-basis coordinates.

The modulus is the (primitive, positive-leading-coefficient) integer minimal
polynomial of the algebraic number alpha; elements are coordinate vectors of
Fractions in the power basis 1, alpha, ..., alpha^{d-1}.  The modulus need
not be monic; reduction and inversion work over Q.

Irreducibility of the modulus is a caller obligation.  If it is secretly
reducible, inversion of a zero divisor raises NotInvertible instead of
returning garbage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import NotInvertible
from .intervals import CRect, IntervalContext
from .polynomials import (QPoly, _q_divmod, degree, lagrange_interpolate,
                          sylvester_resultant, trim)


def q_xgcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Extended Euclid over Q[x]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)

    def _sub_mul(u, q, v):
        # u - q*v
        prod = [Fraction(0)] * (len(q) + len(v))
        for i, qi in enumerate(q):
            for j, vj in enumerate(v):
                prod[i + j] += qi * vj
        out = list(u) + [Fraction(0)] * max(0, len(prod) - len(u))
        for i, p in enumerate(prod):
            out[i] -= p
        return trim(out)

    while r1:
        q, r = _q_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub_mul(s0, q, s1)
        t0, t1 = t1, _sub_mul(t0, q, t1)
    return r0, s0, t0


class NumberField:
    """Q(alpha) presented as Q[x]/(minpoly)."""

    def __init__(self, minpoly):
        minpoly = trim(tuple(int(c) for c in minpoly))
        if degree(minpoly) < 1:
            raise ValueError("modulus must be nonconstant")
        self.minpoly = minpoly
        self.degree = degree(minpoly)
        self._minpoly_q = tuple(Fraction(c) for c in minpoly)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(("NumberField", self.minpoly))

    def __repr__(self):
        return f"NumberField({self.minpoly})"

    # -- element constructors ------------------------------------------------

    def element(self, coords) -> "NumberFieldElement":
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            coords = list(self._reduce(tuple(coords)))
        coords += [Fraction(0)] * (self.degree - len(coords))
        return NumberFieldElement(self, tuple(coords))

    def zero(self) -> "NumberFieldElement":
        return self.element([])

    def one(self) -> "NumberFieldElement":
        return self.element([1])

    def scalar(self, c) -> "NumberFieldElement":
        return self.element([Fraction(c)])

    def alpha(self) -> "NumberFieldElement":
        """The generator as an element: coordinates of x mod minpoly."""
        if self.degree == 1:
            a0, a1 = self.minpoly[0], self.minpoly[1]
            return self.element([Fraction(-a0, a1)])
        return self.element([0, 1])

    def _reduce(self, coords: QPoly) -> QPoly:
        _, rem = _q_divmod(coords, self._minpoly_q)
        return rem

    # -- ring/field operations -------------------------------------------------

    def mul(self, a: "NumberFieldElement", b: "NumberFieldElement") -> "NumberFieldElement":
        n = self.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, ai in enumerate(a.coords):
            if ai == 0:
                continue
            for j, bj in enumerate(b.coords):
                if bj == 0:
                    continue
                prod[i + j] += ai * bj
        return self.element(self._reduce(trim(prod)))

    def inv(self, a: "NumberFieldElement") -> "NumberFieldElement":
        rep = trim(a.coords)
        if not rep:
            raise NotInvertible("zero element")
        g, s, _ = q_xgcd(rep, self._minpoly_q)
        if degree(g) != 0:
            raise NotInvertible(
                "element shares a factor with the modulus; modulus is reducible")
        return self.element(tuple(c / g[0] for c in s))

    # -- characteristic polynomial / norm ------------------------------------

    def charpoly(self, a: "NumberFieldElement") -> QPoly:
        """Monic characteristic polynomial of ``a`` over Q, degree = field degree.

        Computed as res_y(minpoly(y), x - rep(y)) / lc(minpoly)^{deg rep},
        the resultant being evaluated at deg+1 rational points and
        interpolated.  Constant elements short-circuit to (x - c)^d.
        """
        rep = trim(a.coords)
        d = self.degree
        if degree(rep) <= 0:
            c = rep[0] if rep else Fraction(0)
            return tuple(Fraction(comb(d, k)) * (-c) ** (d - k) for k in range(d + 1))
        pts = [Fraction(i) for i in range(d + 1)]
        vals = []
        for x0 in pts:
            h = tuple(x0 - rep[0] if i == 0 else -rep[i] for i in range(len(rep)))
            vals.append(sylvester_resultant(self._minpoly_q, trim(h)))
        res_poly = lagrange_interpolate(pts, vals)
        scale = Fraction(self.minpoly[-1]) ** degree(rep)
        out = tuple(c / scale for c in res_poly)
        assert len(out) == d + 1 and out[-1] == 1, "charpoly must be monic of full degree"
        return out

    def norm(self, a: "NumberFieldElement") -> Fraction:
        cp = self.charpoly(a)
        return (-1) ** self.degree * cp[0]


@dataclass(frozen=True)
class NumberFieldElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        other = self._coerce(other)
        return self.field.element([a + b for a, b in zip(self.coords, other.coords)])

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        return self.field.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return self.field.element([-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field.element([a * other for a in self.coords])
        other = self._coerce(other)
        return self.field.mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field.element([a / other for a in self.coords])
        other = self._coerce(other)
        return self.field.mul(self, self.field.inv(other))

    def _coerce(self, other) -> "NumberFieldElement":
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.scalar(other)

    def as_fraction(self) -> Fraction:
        """The value as a rational; requires all higher coordinates zero."""
        if any(c != 0 for c in self.coords[1:]):
            raise ValueError("element is not rational")
        return self.coords[0]

    def eval_at(self, ctx: IntervalContext, embedding: CRect) -> CRect:
        """Certified image of the element under the embedding alpha -> rect."""
        acc = ctx.complex_exact(0)
        for c in reversed(self.coords):
            acc = ctx.cadd(ctx.cmul(acc, embedding), ctx.complex_exact(c))
        return acc

    def __repr__(self):
        return f"NFE{list(self.coords)}"
