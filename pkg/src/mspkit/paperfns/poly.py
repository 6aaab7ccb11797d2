"""Polynomials with ``p + q log 2`` coefficients: a rational lower bound of h near 0."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..bernd import LinLog2, linlog2_sign
from ..rigor import Dyadic, Interval, to_fraction

__all__ = [
    "PolyLinLog2",
    "p_poly",
    "p_eval",
    "denominator_poly",
    "p_roots",
    "prove_positive",
    "lemma1_check",
]


class PolyLinLog2:
    """Polynomial with :class:`LinLog2` coefficients in ascending powers."""

    def __init__(self, coefficients: Sequence):
        coeffs = [c if isinstance(c, LinLog2) else LinLog2(c, 0) for c in coefficients]
        if not coeffs:
            raise ValueError("need at least one coefficient")
        self.coefficients = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> LinLog2:
        """Exact value at a rational point."""
        x = to_fraction(x)
        acc = LinLog2()
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def sign_at(self, x) -> int:
        return linlog2_sign(self(x))

    def enclose(self, x: Interval, prec: int = 64) -> Interval:
        """Horner enclosure over an interval."""
        x = Interval.coerce(x, prec)
        acc = Interval(0)
        for c in reversed(self.coefficients):
            acc = (acc * x + c.enclose(prec)).round(prec)
        return acc


def p_poly() -> PolyLinLog2:
    """p(x) = 4x^8 + (20 log2 - 212)x^6 - (1020 log2 + 1947)x^4
    + (7380 - 12480 log2)x^2 + (46080 log2 - 31680)."""
    zero = LinLog2()
    return PolyLinLog2(
        [
            LinLog2(-31680, 46080),
            zero,
            LinLog2(7380, -12480),
            zero,
            LinLog2(-1947, -1020),
            zero,
            LinLog2(-212, 20),
            zero,
            LinLog2(4, 0),
        ]
    )


def denominator_poly() -> PolyLinLog2:
    """23040 + 1440 x^2 - 30 x^4."""
    return PolyLinLog2([23040, 0, 1440, 0, -30])


def p_eval(x) -> LinLog2:
    return p_poly()(x)


def p_roots(search=(0, 10), tol=Dyadic(1, -30), poly: PolyLinLog2 | None = None, grid_bits: int = 6):
    """Enclosures of the sign changes of ``poly`` (default p) in ``search``.

    Scans a dyadic grid of spacing ``2**-grid_bits`` (the search range is
    widened to grid points) and bisects every sign change with exact signs
    until the bracket is no wider than ``tol``.  Roots come back in
    increasing order as dyadic intervals.
    """
    poly = poly or p_poly()
    tol = to_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = 2**grid_bits
    i0 = math.floor(to_fraction(search[0]) * scale)
    i1 = math.ceil(to_fraction(search[1]) * scale)
    grid = [Fraction(i, scale) for i in range(i0, i1 + 1)]
    signs = [poly.sign_at(x) for x in grid]
    roots = []
    for i, x in enumerate(grid):
        if signs[i] == 0:
            roots.append(Interval(Dyadic.coerce(x)))
        elif i + 1 < len(grid) and signs[i] * signs[i + 1] < 0:
            a, b = x, grid[i + 1]
            while b - a > tol:
                m = (a + b) / 2
                sm = poly.sign_at(m)
                if sm == 0:
                    a = b = m
                elif sm == signs[i]:
                    a = m
                else:
                    b = m
            roots.append(Interval(Dyadic.coerce(a), Dyadic.coerce(b)))
    return roots


def prove_positive(poly: PolyLinLog2, lo, hi, prec: int = 64, max_depth: int = 30) -> bool:
    """True if interval bisection shows ``poly > 0`` on ``[lo, hi]``."""
    stack = [(Dyadic.coerce(lo), Dyadic.coerce(hi), 0)]
    while stack:
        a, b, depth = stack.pop()
        enc = poly.enclose(Interval(a, b), prec)
        if enc.lo.mantissa > 0:
            continue
        if enc.hi.mantissa <= 0 or depth >= max_depth:
            return False
        m = (a + b).ldexp(-1)
        stack.append((a, m, depth + 1))
        stack.append((m, b, depth + 1))
    return True


def lemma1_check(prec: int = 64) -> bool:
    """p > 0 and the denominator > 0 on [0, 1/3], and p's first positive root exceeds 1/3.

    Together with ``h(phi) > phi^2 p(phi) / (23040 + 1440 phi^2 - 30 phi^4)``
    this gives h > 0 on (0, 1/3].
    """
    p = p_poly()
    third = Fraction(1, 3)
    upper = Dyadic(3, -3)  # 3/8 > 1/3, still left of the first root
    if p.sign_at(0) <= 0 or p.sign_at(third) <= 0 or p.sign_at(upper) <= 0:
        return False
    if not prove_positive(p, 0, upper, prec):
        return False
    if not prove_positive(denominator_poly(), 0, upper, prec):
        return False
    roots = p_roots((0, 10), Dyadic(1, -20), p)
    return bool(roots) and roots[0].lo > third
