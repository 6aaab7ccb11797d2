"""Flett's function, R_23, the log-convexity quotient Q and the u-series."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from ..rigor import Dyadic, Interval, cos, div, log, pi_enclosure, sin, to_fraction

__all__ = [
    "RadiusError",
    "flett_eval",
    "flett_first_zero",
    "r23_eval",
    "r23_enclose",
    "r23_zeros",
    "q_log",
    "q_logconvex_check",
    "u_series",
    "u_series_terms_for",
    "main_inequality_holds",
]

FLETT_TERMS = 200
_FLETT_GUARD = 16


class RadiusError(ValueError):
    pass


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, Dyadic):
        return mpmath.ldexp(mpmath.mpf(x.mantissa), x.exponent)
    return mpmath.mpf(x)


@lru_cache(maxsize=64)
def _inverses(count: int, bits: int) -> tuple[Interval, ...]:
    return tuple(Interval.coerce(Fraction(1, n), bits) for n in range(1, count + 1))


@lru_cache(maxsize=64)
def _zeta_tails(N: int, bits: int) -> tuple[Interval, Interval, Interval, Interval]:
    """Enclosures of ``sum_{n>N} n^-k`` for k = 2, 4, 6 (via zeta) and 8 (integral bound)."""
    pi = pi_enclosure(bits)
    pi2 = (pi * pi).round(bits)
    zetas = (
        div(pi2, 6, bits),
        div(pi2 * pi2, 90, bits),
        div(pi2 * pi2 * pi2, 945, bits),
    )
    tails = []
    for k, z in zip((2, 4, 6), zetas):
        partial = Interval(0)
        for n in range(1, N + 1):
            partial = partial + Interval.coerce(Fraction(1, n**k), bits)
        tails.append((z - partial).round(bits))
    tails.append(Interval(Dyadic(0), Interval.coerce(Fraction(1, 7 * N**7), bits).hi))
    return tuple(tails)


def flett_eval(t, N: int = FLETT_TERMS, prec: int = 64) -> Interval:
    """Enclosure of ``F(t) = sum_n sin(t/n)/n`` for ``t >= 0``.

    The first ``N`` terms are summed directly.  The tail obeys the crude bound
    ``|tail| <= t/N`` and, tighter, the Taylor bounds of ``sin`` on
    ``x = t/n``: ``x - x^3/6 + x^5/120 - x^7/5040 <= sin x <= x - x^3/6 + x^5/120``.
    """
    bits = prec + _FLETT_GUARD
    t = Interval.coerce(t, bits)
    if t.lo.mantissa < 0:
        raise ValueError("flett_eval needs t >= 0")
    if N < math.ceil(t.hi.to_fraction()):
        raise ValueError(f"need N >= ceil(t.hi) = {math.ceil(t.hi.to_fraction())}")
    inv = _inverses(N, bits)
    total = Interval(0)
    for inv_n in inv:
        x = (t * inv_n).round(bits)
        total = (total + sin(x, bits) * inv_n).round(bits)

    s2, s4, s6, s8 = _zeta_tails(N, bits)
    t2 = t.sqr()
    t3 = (t2 * t).round(bits)
    t5 = (t3 * t2).round(bits)
    t7 = (t5 * t2).round(bits)
    base = t * s2 - div(t3 * s4, 6, bits) + div(t5 * s6, 120, bits)
    slack = div(t7 * s8, 5040, bits).hi
    tail = Interval(base.lo - slack, base.hi)
    crude = div(t.hi, N, bits).hi
    tail = Interval(max(tail.lo, -crude), min(tail.hi, crude))
    return (total + tail).round(prec)


def flett_first_zero(
    tol=Dyadic(1, -24),
    bracket=(48, Fraction(97, 2)),
    N: int = FLETT_TERMS,
    prec: int = 64,
) -> Interval:
    """Dyadic bracket around the first zero of F beyond 48.

    Bisection stops when the bracket is no wider than ``tol`` or when the sign
    at the midpoint cannot be decided at this precision.
    """
    lo, hi = Dyadic.coerce(bracket[0]), Dyadic.coerce(bracket[1])
    if not (flett_eval(Interval(lo), N, prec).lo.mantissa > 0 and flett_eval(Interval(hi), N, prec).hi.mantissa < 0):
        raise ValueError(f"no certified sign change of F on [{lo}, {hi}]")
    tol = to_fraction(tol)
    while (hi - lo).to_fraction() > tol:
        mid = (lo + hi).ldexp(-1)
        v = flett_eval(Interval(mid), N, prec)
        if v.lo.mantissa > 0:
            lo = mid
        elif v.hi.mantissa < 0:
            hi = mid
        else:
            break
    return Interval(lo, hi)


def r23_eval(t, dps: int = 30):
    """``R_23(t) = sum_{n=1}^{23} cos(t log n)/n`` (approximation tier)."""
    with mpmath.workdps(dps):
        t = _mpf(t)
        return +mpmath.fsum(mpmath.cos(t * mpmath.log(n)) / n for n in range(1, 24))


def r23_enclose(t, prec: int = 64) -> Interval:
    """Rigorous enclosure of ``R_23`` over an interval."""
    bits = prec + 8
    t = Interval.coerce(t, bits)
    total = Interval(1)
    for n in range(2, 24):
        arg = (t * log(n, bits)).round(bits)
        total = (total + div(cos(arg, bits), n, bits)).round(bits)
    return total.round(prec)


def r23_zeros(search=(0, 50), tol: float = 1e-20, step: float = 1e-3, dps: int = 30) -> list:
    """Zeros of R_23 in ``search``: float64 sign scan, then bisection at ``dps`` digits.

    Returned in increasing order, with zeros closer than ``tol`` merged.
    Zeros where R_23 touches 0 without changing sign between scan points are
    not detected.
    """
    lo, hi = float(search[0]), float(search[1])
    if not hi > lo:
        raise ValueError("empty search range")
    count = max(1, int(math.ceil((hi - lo) / step)))
    xs = np.linspace(lo, hi, count + 1)
    logs = np.log(np.arange(1, 24))
    vals = (np.cos(np.outer(xs, logs)) / np.arange(1, 24)).sum(axis=1)
    zeros: list = []
    with mpmath.workdps(dps):
        for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
            a, b = _mpf(float(xs[i])), _mpf(float(xs[i + 1]))
            fa = r23_eval(a, dps)
            if r23_eval(b, dps) * fa > 0:
                continue
            while b - a > tol:
                m = (a + b) / 2
                fm = r23_eval(m, dps)
                if fm == 0:
                    a = b = m
                elif (fm < 0) == (fa < 0):
                    a, fa = m, fm
                else:
                    b = m
            z = (a + b) / 2
            if not zeros or z - zeros[-1] > tol:
                zeros.append(+z)
    return zeros


def q_log(n: int, x, dps: int = 30):
    """``log Q(x)`` with ``Q = (1^x + ... + (n+1)^x) / (1^x + ... + n^x)``."""
    with mpmath.workdps(dps):
        x = _mpf(x)
        num = mpmath.fsum(mpmath.power(k, x) for k in range(1, n + 2))
        den = num - mpmath.power(n + 1, x)
        return +(mpmath.log(num) - mpmath.log(den))


def q_logconvex_check(n: int, grid: Sequence, tol: float = 1e-12, invert: bool = False, dps: int = 30) -> bool:
    """Numerical log-convexity of Q: second differences of ``log Q`` are ``>= -tol``.

    ``invert=True`` tests ``1/Q`` instead, which must fail for a log-convex Q.
    """
    if not 2 <= n <= 10:
        raise ValueError("n must be in [2, 10]")
    if len(grid) < 3:
        raise ValueError("grid needs at least three points")
    with mpmath.workdps(dps):
        xs = [_mpf(x) for x in grid]
        steps = [b - a for a, b in zip(xs, xs[1:])]
        if min(steps) <= 0 or max(steps) - min(steps) > mpmath.mpf(10) ** (-dps // 2):
            raise ValueError("grid must be sorted with uniform spacing")
        sign = -1 if invert else 1
        ys = [sign * q_log(n, x, dps) for x in xs]
        return all(ys[i - 1] - 2 * ys[i] + ys[i + 1] >= -tol for i in range(1, len(ys) - 1))


def u_series(r, phi, N: int, dps: int = 30):
    """Partial sum of ``sum (-1)^(n-1) r^n cos(n phi)/(n+2)`` and its tail bound.

    The tail bound ``r^(N+1) / ((N+3)(1-r))`` needs ``r < 1``; at ``r = 1`` the
    closed form u_closed is the right tool.
    """
    with mpmath.workdps(dps):
        r, phi = _mpf(r), _mpf(phi)
        if not 0 < r <= 1:
            raise RadiusError("r must lie in (0, 1]")
        if r == 1:
            raise RadiusError("no geometric tail bound at r = 1; use u_closed")
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for n in range(1, N + 1):
            power *= r
            term = power * mpmath.cos(n * phi) / (n + 2)
            total += term if n % 2 else -term
        tail = r ** (N + 1) / ((N + 3) * (1 - r))
        return +total, +tail


def u_series_terms_for(r, target: float = 1e-25) -> int:
    """Smallest N with tail bound below ``target``."""
    r = float(r)
    if not 0 < r < 1:
        raise RadiusError("r must lie in (0, 1)")
    N = 1
    while r ** (N + 1) / ((N + 3) * (1 - r)) > target:
        N += 1
    return N


def main_inequality_holds(r, phi, N: int | None = None) -> bool:
    """``series(r, phi) < series(r, 0)`` with both tails accounted for."""
    N = N or u_series_terms_for(r)
    v, tv = u_series(r, phi, N)
    v0, t0 = u_series(r, 0, N)
    return v + tv < v0 - t0
