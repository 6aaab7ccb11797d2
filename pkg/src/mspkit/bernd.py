"""Taylor coefficients of h as exact ``p + q*log 2`` quantities.

h(phi) = sum_k d_k (2 phi)^(2k) / (2k)!, and every d_k has the form
``p + q log 2`` with rational ``p`` and ``q = (-1)^(k+1)``.  Signs are decided
rigorously by comparing ``-p/q`` with an enclosure of log 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Optional

import mpmath

from .rigor import Interval, div, log2_enclosure, pi_enclosure

__all__ = [
    "LinLog2",
    "bernoulli",
    "d_closed",
    "d_recur",
    "coeff_table",
    "linlog2_sign",
    "dk_extremes",
    "dk_asymptotic_check",
    "h_taylor",
    "zeta_even_identity_check",
]

SIGN_START_BITS = 64
SIGN_MAX_BITS = 1 << 16


@dataclass(frozen=True)
class LinLog2:
    """Exact number ``p + q*log 2``."""

    p: Fraction = Fraction(0)
    q: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))

    @classmethod
    def log2(cls) -> "LinLog2":
        return cls(0, 1)

    def __add__(self, other):
        other = _as_linlog2(other)
        if other is NotImplemented:
            return NotImplemented
        return LinLog2(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __neg__(self):
        return LinLog2(-self.p, -self.q)

    def __sub__(self, other):
        other = _as_linlog2(other)
        if other is NotImplemented:
            return NotImplemented
        return LinLog2(self.p - other.p, self.q - other.q)

    def __rsub__(self, other):
        other = _as_linlog2(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, c):
        # the ring is only closed under rational scaling
        if isinstance(c, (int, Fraction)):
            return LinLog2(self.p * c, self.q * c)
        return NotImplemented

    __rmul__ = __mul__

    def enclose(self, prec: int) -> Interval:
        p = Interval.coerce(self.p, prec)
        if not self.q:
            return p
        q = Interval.coerce(self.q, prec)
        return (p + q * log2_enclosure(prec)).round(prec)

    def to_mpf(self):
        return mpmath.mpf(self.p.numerator) / self.p.denominator + (
            mpmath.mpf(self.q.numerator) / self.q.denominator
        ) * mpmath.log(2)

    def __float__(self) -> float:
        with mpmath.workdps(30):
            return float(self.to_mpf())

    def __str__(self) -> str:
        return f"{self.p} + ({self.q})*log2"


def _as_linlog2(x):
    if isinstance(x, LinLog2):
        return x
    if isinstance(x, (int, Fraction)):
        return LinLog2(x, 0)
    return NotImplemented


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(comb(m + 1, j) * table[j] for j in range(m))
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` for even ``n >= 2``."""
    if n < 2 or n % 2:
        raise ValueError(f"bernoulli needs an even n >= 2, got {n}")
    return _bernoulli_table(n)[n]


def _bernoulli_term(j: int, bern: Optional[Callable[[int], Fraction]]) -> Fraction:
    # (1 - 2^(-2j)) B_{2j} / (2j); the module-level lookup keeps bernoulli patchable
    bern = bern or bernoulli
    return (1 - Fraction(1, 4**j)) * bern(2 * j) / (2 * j)


def d_closed(k: int, bern: Optional[Callable[[int], Fraction]] = None) -> LinLog2:
    """d_k from the closed sum over Bernoulli numbers."""
    if k < 1:
        raise ValueError("k must be >= 1")
    s = (-1) ** k
    total = sum(_bernoulli_term(j, bern) for j in range(1, k + 1))
    return LinLog2(s * Fraction(3, 4) - s * total, -s)


def d_recur(k: int, bern: Optional[Callable[[int], Fraction]] = None) -> LinLog2:
    """d_k from ``d_{k+1} = -d_k + (-1)^k (1 - 2^(-2k-2)) B_{2k+2}/(2k+2)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d = LinLog2(Fraction(-11, 16), 1)
    for j in range(1, k):
        d = -d + (-1) ** j * _bernoulli_term(j + 1, bern)
    return d


def coeff_table(kmax: int, bern: Optional[Callable[[int], Fraction]] = None) -> list[tuple[int, LinLog2]]:
    """``[(k, d_k)]`` for ``k = 1..kmax``, built by the recurrence."""
    out = []
    d = LinLog2(Fraction(-11, 16), 1)
    for k in range(1, kmax + 1):
        if k > 1:
            d = -d + (-1) ** (k - 1) * _bernoulli_term(k, bern)
        out.append((k, d))
    return out


def linlog2_sign(x: LinLog2, prec: int = SIGN_START_BITS) -> int:
    """Exact sign (-1, 0 or 1) of ``p + q log 2``.

    Precision doubles until the enclosure excludes zero; this terminates for
    ``q != 0`` because log 2 is irrational.
    """
    if not x.q:
        return (x.p > 0) - (x.p < 0)
    bits = prec
    while bits <= SIGN_MAX_BITS:
        v = x.enclose(bits)
        if v.lo.mantissa > 0:
            return 1
        if v.hi.mantissa < 0:
            return -1
        bits *= 2
    raise ArithmeticError(f"sign of {x} undecided at {SIGN_MAX_BITS} bits")


def dk_extremes(kmax: int, bern: Optional[Callable[[int], Fraction]] = None) -> tuple[Fraction, Optional[Fraction]]:
    """Largest ``r`` and smallest ``s`` with ``d_k > 0 <=> log2 > r`` or ``log2 < s``.

    ``s`` is ``None`` when no coefficient with ``q = -1`` occurs (``kmax = 1``).
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    max_r: Optional[Fraction] = None
    min_s: Optional[Fraction] = None
    for _, d in coeff_table(kmax, bern):
        if d.q > 0:
            r = -d.p / d.q
            max_r = r if max_r is None else max(max_r, r)
        else:
            s = d.p / -d.q
            min_s = s if min_s is None else min(min_s, s)
    return max_r, min_s


def _two_pi_power(n: int, prec: int) -> Interval:
    two_pi = pi_enclosure(prec).ldexp(1)
    out = Interval(1)
    for _ in range(n):
        out = (out * two_pi).round(prec)
    return out


def dk_asymptotic_check(k: int, prec: int = 64) -> bool:
    """Check the chain of estimates that makes ``d_k > 0`` automatic at index ``k``.

    Verified with interval arithmetic at this ``k``: the last term of
    ``sum_{j<k} (2j-1)!/(2 pi)^(2j)`` dominates, the bound on ``3/4 - log 2``,
    ``1 - 2^(-2k) >= 1 - 2^(-16)``, and finally
    ``2^16/(2^16-1) (2 pi)^2 zeta(2) < 2k - 1``.
    """
    if k < 8:
        raise ValueError("the estimate chain needs k >= 8")
    pi = pi_enclosure(prec)
    zeta2 = div(pi * pi, 6, prec)

    terms = [div(factorial(2 * j - 1), _two_pi_power(2 * j, prec), prec) for j in range(1, k)]
    last = terms[-1]
    if any(t.hi > last.lo for t in terms[:-1]):
        return False

    head = div(zeta2 * factorial(2 * k - 2), _two_pi_power(2 * k - 2, prec), prec)
    gap = Interval.coerce(Fraction(3, 4)) - log2_enclosure(prec)
    if not head.lo > gap.hi:
        return False

    if 1 - Fraction(1, 4**k) < Fraction(2**16 - 1, 2**16):
        return False

    lhs = div(Interval(2**16) * (pi.ldexp(1) * pi.ldexp(1)) * zeta2, 2**16 - 1, prec)
    return lhs.hi < 2 * k - 1


def h_taylor(phi, K: int, dps: int = 40):
    """Partial sum ``sum_{k<=K} d_k (2 phi)^(2k)/(2k)!`` (approximation tier)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    with mpmath.workdps(dps):
        if isinstance(phi, Fraction):
            phi = mpmath.mpf(phi.numerator) / phi.denominator
        x2 = (2 * mpmath.mpf(phi)) ** 2
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for k, d in coeff_table(K):
            power *= x2
            total += d.to_mpf() * power / factorial(2 * k)
        return +total


def zeta_even_identity_check(
    n: int,
    prec: int = 64,
    terms: int = 256,
    bern: Optional[Callable[[int], Fraction]] = None,
) -> bool:
    """Compare ``(-1)^(n+1) (2 pi)^(2n) B_2n / (2 (2n)!)`` with ``sum m^(-2n)``.

    The series side is a partial sum plus the integral bounds
    ``[1/((2n-1)(M+1)^(2n-1)), 1/((2n-1) M^(2n-1))]`` on its tail.
    """
    if not 1 <= n <= 20:
        raise ValueError("n must be in [1, 20]")
    bits = prec + 16
    b = (bern or bernoulli)(2 * n)
    rhs = (-1) ** (n + 1) * Interval.coerce(b, bits) * _two_pi_power(2 * n, bits)
    rhs = div(rhs, 2 * factorial(2 * n), prec)

    partial = Interval(0)
    for m in range(1, terms + 1):
        partial = partial + Interval.coerce(Fraction(1, m ** (2 * n)), bits)
    e = 2 * n - 1
    tail = Interval(
        Interval.coerce(Fraction(1, e * (terms + 1) ** e), bits).lo,
        Interval.coerce(Fraction(1, e * terms**e), bits).hi,
    )
    lhs = (partial + tail).round(prec)
    return lhs.overlaps(rhs)
