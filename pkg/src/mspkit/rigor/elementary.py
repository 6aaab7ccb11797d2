"""Rigorous enclosures of sin, cos, log, atan and the constants pi, log 2.

Series are summed in fixed point on Python ints with two rounding chains:
one rounded toward zero, one away from zero, so every partial sum has a
guaranteed lower and upper bound.  Truncation is covered by the first omitted
term (alternating series) or a geometric tail (atanh).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .dyadic import Dyadic
from .interval import DomainError, Interval, check_precision, hull

__all__ = [
    "cos",
    "sin",
    "log",
    "atan",
    "enclose_elem",
    "const_enclosure",
    "pi_enclosure",
    "log2_enclosure",
]

GUARD_BITS = 24
_REDUCE_ABOVE = 4
_MAX_TRIG_ARG = 1 << 20
_UNIT = Interval(-1, 1)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _frac_fixed(q: Fraction, bits: int) -> tuple[int, int]:
    """floor and ceil of ``q * 2**bits`` for ``q >= 0``."""
    num = q.numerator << bits
    return num // q.denominator, _ceil_div(num, q.denominator)


def _fixed_interval(lo: int, hi: int, bits: int) -> Interval:
    return Interval(Dyadic(lo, -bits), Dyadic(hi, -bits))


# --- series kernels ---------------------------------------------------------


def _trig_kernel(ax: Dyadic, bits: int, odd: bool) -> tuple[int, int]:
    """Bounds on ``sum (-1)^k ax^(2k+odd)/(2k+odd)!`` scaled by ``2**bits``; ``ax >= 0``."""
    x2 = ax * ax
    x2_lo, x2_hi = x2.fixed(bits), x2.fixed(bits, up=True)
    x2_cap = x2_hi >> bits
    if odd:
        t_lo, t_hi, n = ax.fixed(bits), ax.fixed(bits, up=True), 1
    else:
        t_lo = t_hi = 1 << bits
        n = 0
    s_lo = s_hi = 0
    positive = True
    while True:
        # once x^2 <= (n+1)(n+2) the remaining terms decrease in magnitude
        if t_hi <= 1 and x2_cap < (n + 1) * (n + 2):
            return s_lo - t_hi, s_hi + t_hi
        if positive:
            s_lo += t_lo
            s_hi += t_hi
        else:
            s_lo -= t_hi
            s_hi -= t_lo
        d = ((n + 1) * (n + 2)) << bits
        t_lo = (t_lo * x2_lo) // d
        t_hi = _ceil_div(t_hi * x2_hi, d)
        n += 2
        positive = not positive


def _atanh_kernel(s: Fraction, bits: int) -> tuple[int, int]:
    """Bounds on ``atanh(s) * 2**bits`` for ``|s| < 1``."""
    if s < 0:
        lo, hi = _atanh_kernel(-s, bits)
        return -hi, -lo
    if s == 0:
        return 0, 0
    p_lo, p_hi = _frac_fixed(s, bits)
    s2_lo = (p_lo * p_lo) >> bits
    s2_hi = _ceil_div(p_hi * p_hi, 1 << bits)
    total_lo = total_hi = 0
    j = 1
    while p_hi > 1:
        total_lo += p_lo // j
        total_hi += _ceil_div(p_hi, j)
        p_lo = (p_lo * s2_lo) >> bits
        p_hi = _ceil_div(p_hi * s2_hi, 1 << bits)
        j += 2
    num, den = s.numerator, s.denominator
    # sum_{i>=0} s^(j+2i)/(j+2i) <= s^j / (j (1 - s^2))
    tail = _ceil_div(p_hi * den * den, j * (den * den - num * num))
    return total_lo, total_hi + tail


def _atan_kernel(s: Fraction, bits: int) -> tuple[int, int]:
    """Bounds on ``atan(s) * 2**bits`` for ``|s| <= 1/2``."""
    if s < 0:
        lo, hi = _atan_kernel(-s, bits)
        return -hi, -lo
    if s == 0:
        return 0, 0
    p_lo, p_hi = _frac_fixed(s, bits)
    s2_lo = (p_lo * p_lo) >> bits
    s2_hi = _ceil_div(p_hi * p_hi, 1 << bits)
    total_lo = total_hi = 0
    j = 1
    positive = True
    while True:
        t_lo, t_hi = p_lo // j, _ceil_div(p_hi, j)
        if t_hi <= 1:
            return total_lo - t_hi, total_hi + t_hi
        if positive:
            total_lo += t_lo
            total_hi += t_hi
        else:
            total_lo -= t_hi
            total_hi -= t_lo
        p_lo = (p_lo * s2_lo) >> bits
        p_hi = _ceil_div(p_hi * s2_hi, 1 << bits)
        j += 2
        positive = not positive


# --- constants ---------------------------------------------------------------


@lru_cache(maxsize=None)
def pi_enclosure(prec: int) -> Interval:
    """Enclosure of pi from Machin's formula ``16 atan(1/5) - 4 atan(1/239)``."""
    bits = prec + GUARD_BITS
    a_lo, a_hi = _atan_kernel(Fraction(1, 5), bits)
    b_lo, b_hi = _atan_kernel(Fraction(1, 239), bits)
    return _fixed_interval(16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo, bits).round(prec)


@lru_cache(maxsize=None)
def log2_enclosure(prec: int) -> Interval:
    """Enclosure of log 2 as ``2 atanh(1/3)``."""
    bits = prec + GUARD_BITS
    lo, hi = _atanh_kernel(Fraction(1, 3), bits)
    return _fixed_interval(2 * lo, 2 * hi, bits).round(prec)


def const_enclosure(name: str, prec: int) -> Interval:
    check_precision(prec)
    if name == "pi":
        return pi_enclosure(prec)
    if name == "log2":
        return log2_enclosure(prec)
    raise ValueError(f"unknown constant {name!r}")


# --- point evaluations -------------------------------------------------------


def _trig_point(x: Dyadic, prec: int, odd: bool) -> Interval:
    if abs(x) > _MAX_TRIG_ARG:
        raise DomainError(f"trig argument {float(x):g} outside the supported range")
    if abs(x) > _REDUCE_ABOVE:
        n = round(float(x) / math.pi)
        pi_iv = pi_enclosure(prec + GUARD_BITS + abs(n).bit_length())
        y = x - n * pi_iv
        val = _trig_interval(y, prec, odd)
        return -val if n % 2 else val
    bits = prec + GUARD_BITS
    lo, hi = _trig_kernel(abs(x), bits, odd)
    val = _fixed_interval(lo, hi, bits)
    if odd and x.mantissa < 0:
        val = -val
    return _clip_unit(val).round(prec)


def _clip_unit(v: Interval) -> Interval:
    lo = max(v.lo, _UNIT.lo)
    hi = min(v.hi, _UNIT.hi)
    return Interval(lo, hi)


def _trig_interval(x: Interval, prec: int, odd: bool) -> Interval:
    if x.is_point():
        return _trig_point(x.lo, prec, odd)
    pi_iv = pi_enclosure(prec)
    if x.width >= 2 * pi_iv.lo:
        return _UNIT
    val = hull(_trig_point(x.lo, prec, odd), _trig_point(x.hi, prec, odd))
    lo, hi = val.lo, val.hi
    # extrema sit at multiples of pi/2: cos peaks at j = 0 mod 4, sin at j = 1 mod 4
    half_pi = pi_iv.ldexp(-1)
    j0 = math.floor(float(x.lo) / (math.pi / 2)) - 1
    j1 = math.ceil(float(x.hi) / (math.pi / 2)) + 1
    for j in range(j0, j1 + 1):
        if not (j * half_pi).overlaps(x):
            continue
        phase = (j - odd) % 4
        if phase == 0:
            hi = Dyadic(1)
        elif phase == 2:
            lo = Dyadic(-1)
    return Interval(lo, hi)


def cos(x, prec: int) -> Interval:
    return _trig_interval(Interval.coerce(x, prec + GUARD_BITS), prec, odd=False)


def sin(x, prec: int) -> Interval:
    return _trig_interval(Interval.coerce(x, prec + GUARD_BITS), prec, odd=True)


def _log_point(t: Dyadic, prec: int) -> Interval:
    if t.mantissa <= 0:
        raise DomainError(f"log of non-positive value {t}")
    if t == 1:
        return Interval(0)
    e = t.magnitude()
    y = t.ldexp(-e)
    if y > Dyadic(3, -1):
        y = y.ldexp(-1)
        e += 1
    bits = prec + GUARD_BITS
    yq = y.to_fraction()
    lo, hi = _atanh_kernel((yq - 1) / (yq + 1), bits)
    val = _fixed_interval(2 * lo, 2 * hi, bits)
    if e:
        val = val + e * log2_enclosure(bits + abs(e).bit_length())
    return val.round(prec)


def log(x, prec: int) -> Interval:
    """Enclosure of ``log x``; raises :class:`DomainError` unless ``x > 0``."""
    x = Interval.coerce(x, prec + GUARD_BITS)
    if x.lo.mantissa <= 0:
        raise DomainError(f"log of interval {x} that is not strictly positive")
    if x.is_point():
        return _log_point(x.lo, prec)
    return Interval(_log_point(x.lo, prec).lo, _log_point(x.hi, prec).hi)


def _atan_fraction(s: Fraction, bits: int) -> Interval:
    """atan for ``0 <= s <= 1`` at ``bits`` fixed-point bits."""
    if s <= Fraction(1, 2):
        return _fixed_interval(*_atan_kernel(s, bits), bits)
    quarter_pi = pi_enclosure(bits).ldexp(-2)
    return quarter_pi + _fixed_interval(*_atan_kernel((s - 1) / (s + 1), bits), bits)


def _atan_point(x: Dyadic, prec: int) -> Interval:
    if x.mantissa < 0:
        return -_atan_point(-x, prec)
    bits = prec + GUARD_BITS
    q = x.to_fraction()
    if q <= 1:
        val = _atan_fraction(q, bits)
    else:
        val = pi_enclosure(bits).ldexp(-1) - _atan_fraction(1 / q, bits)
    return val.round(prec)


def atan(x, prec: int) -> Interval:
    x = Interval.coerce(x, prec + GUARD_BITS)
    if x.is_point():
        return _atan_point(x.lo, prec)
    return Interval(_atan_point(x.lo, prec).lo, _atan_point(x.hi, prec).hi)


_ELEMENTARY = {"sin": sin, "cos": cos, "log": log, "atan": atan}


def enclose_elem(x, fn: str, prec: int) -> Interval:
    """Enclosure of ``fn(x)`` for ``fn`` in ``sin``, ``cos``, ``log``, ``atan``."""
    check_precision(prec)
    try:
        func = _ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return func(x, prec)
