"""Closed intervals with dyadic endpoints.

``+``, ``-`` and ``*`` between intervals are exact (dyadics are closed under
them).  Division and anything that leaves the dyadics takes an explicit
precision and rounds outward.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .dyadic import Dyadic, round_dir, to_fraction

__all__ = [
    "Interval",
    "DivisionByIntervalContainingZero",
    "DomainError",
    "interval_arith",
    "div",
    "hull",
    "check_precision",
]

MIN_PRECISION = 16


class DivisionByIntervalContainingZero(ZeroDivisionError):
    pass


class DomainError(ValueError):
    pass


def check_precision(prec: int) -> int:
    if isinstance(prec, bool) or not isinstance(prec, int):
        raise TypeError("precision must be an int number of bits")
    if prec < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {prec}")
    return prec


class Interval:
    """Closed interval ``[lo, hi]`` with exact dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Dyadic.coerce(lo)
        hi = lo if hi is None else Dyadic.coerce(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @classmethod
    def coerce(cls, value, prec: int | None = None) -> "Interval":
        """Interval from a number; non-dyadic rationals need ``prec``."""
        if isinstance(value, Interval):
            return value
        if isinstance(value, (Dyadic, int)):
            return cls(value)
        if isinstance(value, (Rational, float, str)):
            if isinstance(value, str):
                from .dyadic import parse_rational

                value = parse_rational(value)
            q = Fraction(value)
            den = q.denominator
            if not den & (den - 1):
                return cls(Dyadic.coerce(q))
            if prec is None:
                raise ValueError(f"{q} is not dyadic; a precision is needed")
            return cls(round_dir(q, prec, "down"), round_dir(q, prec, "up"))
        raise TypeError(f"cannot convert {type(value).__name__} to Interval")

    # queries --------------------------------------------------------------

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def mid(self) -> Dyadic:
        return (self.lo + self.hi).ldexp(-1)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        q = to_fraction(x)
        return self.lo.to_fraction() <= q <= self.hi.to_fraction()

    __contains__ = contains

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains_zero(self) -> bool:
        return self.lo.mantissa <= 0 <= self.hi.mantissa

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo}, {self.hi})"

    def __str__(self) -> str:
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"

    # exact ring operations -------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        other = _operand(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = _operand(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        other = _operand(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _operand(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a.mantissa >= 0 and c.mantissa >= 0:
            return Interval(a * c, b * d)
        products = (a * c, a * d, b * c, b * d)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def sqr(self) -> "Interval":
        """Square; tighter than ``x * x`` when ``x`` straddles zero."""
        if self.lo.mantissa >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi.mantissa <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        m = max(-self.lo, self.hi)
        return Interval(Dyadic(0), m * m)

    def __abs__(self) -> "Interval":
        if self.lo.mantissa >= 0:
            return self
        if self.hi.mantissa <= 0:
            return -self
        return Interval(Dyadic(0), max(-self.lo, self.hi))

    def ldexp(self, n: int) -> "Interval":
        return Interval(self.lo.ldexp(n), self.hi.ldexp(n))

    def round(self, prec: int) -> "Interval":
        """Outward rounding of both endpoints to ``prec`` bits."""
        return Interval(round_dir(self.lo, prec, "down"), round_dir(self.hi, prec, "up"))


def _operand(x):
    if isinstance(x, Interval):
        return x
    if isinstance(x, Dyadic) or (isinstance(x, int) and not isinstance(x, bool)):
        return Interval(x)
    if isinstance(x, Fraction) and not x.denominator & (x.denominator - 1):
        return Interval(Dyadic.coerce(x))
    return NotImplemented


def hull(*intervals: Interval) -> Interval:
    return Interval(min(i.lo for i in intervals), max(i.hi for i in intervals))


def div(x, y, prec: int) -> Interval:
    """Outward-rounded enclosure of ``x / y``; ``y`` must exclude zero."""
    x = Interval.coerce(x, prec)
    y = Interval.coerce(y, prec)
    if y.contains_zero():
        raise DivisionByIntervalContainingZero(f"divisor {y!r} contains zero")
    xl, xh = x.lo.to_fraction(), x.hi.to_fraction()
    yl, yh = y.lo.to_fraction(), y.hi.to_fraction()
    quotients = (xl / yl, xl / yh, xh / yl, xh / yh)
    return Interval(round_dir(min(quotients), prec, "down"), round_dir(max(quotients), prec, "up"))


def interval_arith(x: Interval, y: Interval, op: str, prec: int) -> Interval:
    """``add``/``sub``/``mul``/``div`` with endpoints rounded outward to ``prec``."""
    check_precision(prec)
    if op == "add":
        return (x + y).round(prec)
    if op == "sub":
        return (x - y).round(prec)
    if op == "mul":
        return (x * y).round(prec)
    if op == "div":
        return div(x, y, prec)
    raise ValueError(f"unknown interval op {op!r}")
