"""Exact base-2 numbers and directed rounding.

A :class:`Dyadic` is ``mantissa * 2**exponent`` with a Python int mantissa.
Dyadics are closed under ``+``, ``-`` and ``*``, so those operators are exact.
Rationals are plain :class:`fractions.Fraction` objects.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Dyadic",
    "dyadic_arith",
    "round_dir",
    "parse_dyadic",
    "parse_rational",
    "to_fraction",
]

_DYADIC_RE = re.compile(r"^\s*([+-]?\d+)\s*\*\s*2\s*\^\s*\(?\s*([+-]?\d+)\s*\)?\s*$")
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")


class Dyadic:
    """Exact number ``mantissa * 2**exponent`` kept in canonical form.

    Canonical form has an odd mantissa, or mantissa 0 with exponent 0, so two
    dyadics are equal exactly when their fields are equal.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # construction ---------------------------------------------------------

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        """Convert ints, dyadic Fractions, finite floats and dyadic strings."""
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a number here")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, float):
            m, e = value.as_integer_ratio()
            return cls.coerce(Fraction(m, e))
        if isinstance(value, Rational):
            q = Fraction(value)
            den = q.denominator
            if den & (den - 1):
                raise ValueError(f"{q} is not dyadic")
            return cls(q.numerator, -(den.bit_length() - 1))
        if isinstance(value, str):
            return parse_dyadic(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    # conversions ----------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __int__(self) -> int:
        return int(self.to_fraction())

    def __str__(self) -> str:
        return f"{self.mantissa}*2^{self.exponent}"

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def magnitude(self) -> int:
        """Exponent ``E`` with ``2**E <= |self| < 2**(E+1)``; undefined for 0."""
        return self.exponent + abs(self.mantissa).bit_length() - 1

    def fixed(self, bits: int, up: bool = False) -> int:
        """``floor`` (or ``ceil``) of ``self * 2**bits``."""
        shift = self.exponent + bits
        if shift >= 0:
            return self.mantissa << shift
        if up:
            return -((-self.mantissa) >> -shift)
        return self.mantissa >> -shift

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.mantissa, self.exponent)

    def __pos__(self) -> "Dyadic":
        return self

    def __abs__(self) -> "Dyadic":
        return self if self.mantissa >= 0 else -self

    def __add__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.mantissa:
            return other
        if not other.mantissa:
            return self
        e = min(self.exponent, other.exponent)
        return Dyadic(
            (self.mantissa << (self.exponent - e)) + (other.mantissa << (other.exponent - e)), e
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return NotImplemented
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def ldexp(self, n: int) -> "Dyadic":
        """Exact multiplication by ``2**n``."""
        return Dyadic(self.mantissa, self.exponent + n) if self.mantissa else self

    # comparisons ----------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            d = self - other
            return d.sign()
        a, b = self.to_fraction(), Fraction(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        if isinstance(other, (int, Rational)):
            return self.to_fraction() == other
        if isinstance(other, float):
            return self.to_fraction() == Fraction(other)
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


def _maybe(x):
    if isinstance(x, Dyadic):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Dyadic(x)
    return NotImplemented


def dyadic_arith(a: Dyadic, b: Dyadic, op: str) -> Dyadic:
    """Exact ``add``, ``sub`` or ``mul`` of two dyadics."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown dyadic op {op!r}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Dyadic):
        return x.to_fraction()
    return Fraction(x)


def _quantum_exponent(num: int, den: int, prec: int) -> int:
    """Exponent of the rounding grid for ``num/den`` (``num != 0``) at ``prec``.

    Values below 1 use the absolute grid ``2**-prec``; larger values keep
    ``prec`` significant bits.
    """
    num = abs(num)
    e = num.bit_length() - den.bit_length()
    # 2**e <= num/den < 2**(e+1) after this correction
    if (num << -e if e < 0 else num) < (den << e if e > 0 else den):
        e -= 1
    return max(0, e) - prec


def round_dir(x, prec: int, direction: str) -> Dyadic:
    """Round a rational (or dyadic) to a dyadic in the given direction.

    ``direction`` is ``"down"`` or ``"up"``.  The result ``d`` satisfies
    ``d <= x`` (down) or ``d >= x`` (up) and ``|d - x| <= 2**-prec * max(1, |x|)``.
    """
    if direction not in ("down", "up"):
        raise ValueError(f"direction must be 'down' or 'up', got {direction!r}")
    up = direction == "up"
    if isinstance(x, Dyadic):
        if not x.mantissa:
            return x
        q = max(0, x.magnitude()) - prec
        if x.exponent >= q:
            return x
        return Dyadic(x.fixed(-q, up), q)
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    if num == 0:
        return Dyadic(0)
    q = _quantum_exponent(num, den, prec)
    if q <= 0:
        scaled_num, scaled_den = num << -q, den
    else:
        scaled_num, scaled_den = num, den << q
    m = -((-scaled_num) // scaled_den) if up else scaled_num // scaled_den
    return Dyadic(m, q)


def parse_dyadic(text: str) -> Dyadic:
    """Parse ``m*2^e``, an integer, or a rational ``p/q`` with power-of-two ``q``."""
    m = _DYADIC_RE.match(text)
    if m:
        return Dyadic(int(m.group(1)), int(m.group(2)))
    return Dyadic.coerce(parse_rational(text))


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer, a decimal literal or ``m*2^e`` exactly."""
    m = _RATIONAL_RE.match(text)
    if m:
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ValueError("zero denominator")
        return Fraction(int(m.group(1)), den)
    m = _DYADIC_RE.match(text)
    if m:
        return Dyadic(int(m.group(1)), int(m.group(2))).to_fraction()
    if _DECIMAL_RE.match(text):
        return Fraction(text.strip())
    raise ValueError(f"not an exact number: {text!r}")
