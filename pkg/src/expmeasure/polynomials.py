"""Dense univariate polynomial helpers over Z and Q.

Coefficients are stored low-to-high in tuples; the zero polynomial is the
empty tuple.  Everything here is exact arithmetic (int / Fraction); interval
evaluation of integer polynomials lives here too since root certification
needs it.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .intervals import CRect, IntervalContext, RInterval

IntPoly = tuple[int, ...]
QPoly = tuple[Fraction, ...]


def trim(coeffs) -> tuple:
    coeffs = tuple(coeffs)
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


def degree(coeffs) -> int:
    """Degree with deg(0) = -1."""
    return len(trim(coeffs)) - 1


def content(coeffs: IntPoly) -> int:
    c = 0
    for a in coeffs:
        c = gcd(c, abs(a))
    return c


def normalize_primitive(coeffs) -> IntPoly:
    """Divide by content and make the leading coefficient positive."""
    coeffs = trim(int(a) for a in coeffs)
    if not coeffs:
        return coeffs
    c = content(coeffs)
    coeffs = tuple(a // c for a in coeffs)
    if coeffs[-1] < 0:
        coeffs = tuple(-a for a in coeffs)
    return coeffs


def derivative(coeffs) -> tuple:
    return trim(tuple(i * coeffs[i] for i in range(1, len(coeffs))))


def reverse(coeffs) -> tuple:
    return trim(tuple(reversed(trim(coeffs))))


def eval_fraction(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def eval_crect(ctx: IntervalContext, coeffs, z: CRect) -> CRect:
    acc = ctx.complex_exact(0)
    for a in reversed(coeffs):
        acc = ctx.cadd(ctx.cmul(acc, z), ctx.complex_exact(Fraction(a)))
    return acc


def eval_rinterval(ctx: IntervalContext, coeffs, x: RInterval) -> RInterval:
    acc = ctx.zero()
    for a in reversed(coeffs):
        acc = ctx.add(ctx.mul(acc, x), ctx.exact(Fraction(a)))
    return acc


def _q_divmod(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(trim(a))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = factor
        for i, bc in enumerate(b):
            a[shift + i] -= factor * bc
        a = list(trim(a))
        if not a:
            break
    return trim(q), trim(a)


def q_gcd(a, b) -> QPoly:
    """Monic gcd over Q (Euclid); used for the squarefreeness test."""
    a = trim(Fraction(x) for x in a)
    b = trim(Fraction(x) for x in b)
    while b:
        _, r = _q_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = tuple(x / lead for x in a)
    return a


def is_squarefree(coeffs: IntPoly) -> bool:
    f = trim(coeffs)
    if len(f) <= 1:
        return False  # constants have no roots to be squarefree about
    return degree(q_gcd(f, derivative(f))) == 0


def divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def rational_roots(coeffs: IntPoly) -> list[Fraction]:
    """All rational roots of a primitive integer polynomial (exact test)."""
    f = trim(coeffs)
    if not f:
        raise ValueError("zero polynomial")
    # strip powers of x: 0 is a root iff constant term vanishes
    roots = []
    k = 0
    while f[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        f = f[k:]
    if len(f) == 1:
        return roots
    for p in divisors(f[0]):
        for q in divisors(f[-1]):
            if gcd(p, q) != 1:
                continue
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if eval_fraction(f, cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))


def q_matrix_det(rows: list[list[Fraction]]) -> Fraction:
    """Determinant of a square rational matrix by exact Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    return det


def sylvester_resultant(f: QPoly, g: QPoly) -> Fraction:
    """res(f, g) via the Sylvester matrix; deg f, deg g >= 1."""
    f, g = trim(f), trim(g)
    n, m = degree(f), degree(g)
    if n < 1 or m < 1:
        raise ValueError("resultant needs two nonconstant polynomials")
    size = n + m
    rows = []
    frow = list(reversed(f))
    grow = list(reversed(g))
    for i in range(m):
        rows.append([Fraction(0)] * i + [Fraction(c) for c in frow]
                    + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + [Fraction(c) for c in grow]
                    + [Fraction(0)] * (size - m - 1 - i))
    return q_matrix_det(rows)


def lagrange_interpolate(points: list[Fraction], values: list[Fraction]) -> QPoly:
    """Unique interpolating polynomial through (points[i], values[i])."""
    assert len(points) == len(values)
    result: list[Fraction] = []
    for i, (xi, yi) in enumerate(zip(points, values)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(points):
            if j == i:
                continue
            # basis *= (x - xj)
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        scale = yi / denom
        if len(result) < len(basis):
            result += [Fraction(0)] * (len(basis) - len(result))
        for k, b in enumerate(basis):
            result[k] += scale * b
    return trim(result)


def poly_to_str(coeffs, var: str = "x") -> str:
    f = trim(coeffs)
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        a = f[i]
        if a == 0:
            continue
        if i == 0:
            term = str(a)
        else:
            mag = "" if abs(a) == 1 else str(abs(a))
            sign = "-" if a < 0 else ""
            xpow = var if i == 1 else f"{var}^{i}"
            term = f"{sign}{mag}{xpow}"
            if parts and a > 0:
                term = "+" + term
        if parts and i == 0 and a > 0:
            term = "+" + term
        parts.append(term)
    return "".join(parts)
