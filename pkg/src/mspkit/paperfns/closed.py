"""Closed forms of u, h and h' with rigorous enclosures, and the lemma checks."""

from __future__ import annotations

from fractions import Fraction

from ..rigor import (
    DomainError,
    Interval,
    cos,
    div,
    log,
    log2_enclosure,
    pi_enclosure,
    sin,
)

__all__ = [
    "u_closed",
    "h_closed",
    "hprime_closed",
    "lemma2_check",
    "lemma2_hypotheses",
    "lemma3_chain_values",
    "lemma3_chain_check",
    "ode_residual",
    "hprime_fd_error",
]

_GUARD = 8


def _pieces(phi, prec: int):
    work = prec + _GUARD
    phi = Interval.coerce(phi, work + 16)
    two_phi = phi.ldexp(1)
    half = cos(phi.ldexp(-1), work)
    if half.lo.mantissa <= 0:
        raise DomainError(f"cos(phi/2) is not bounded away from 0 on {phi}")
    log_term = log(half.ldexp(1), work)
    return phi, work, two_phi, half, log_term


def u_closed(phi, prec: int = 64) -> Interval:
    """``cos 2phi log(2 cos(phi/2)) + (phi/2) sin 2phi - cos phi + 1/2``."""
    phi, work, two_phi, _, log_term = _pieces(phi, prec)
    val = (
        cos(two_phi, work) * log_term
        + phi.ldexp(-1) * sin(two_phi, work)
        - cos(phi, work)
        + Fraction(1, 2)
    )
    return val.round(prec)


def h_closed(phi, prec: int = 64) -> Interval:
    """``h = u(0) - u(phi)``, positive on ``(0, pi)``."""
    phi, work, two_phi, _, log_term = _pieces(phi, prec)
    val = (
        log2_enclosure(work)
        - 1
        + cos(phi, work)
        - phi.ldexp(-1) * sin(two_phi, work)
        - cos(two_phi, work) * log_term
    )
    return val.round(prec)


def hprime_closed(phi, prec: int = 64) -> Interval:
    """Derivative of h in real form.

    h'(phi) = -sin phi - sin(2phi)/2 - phi cos 2phi
              + 2 sin 2phi log(2 cos(phi/2)) + cos(2phi) tan(phi/2) / 2
    """
    phi, work, two_phi, half, log_term = _pieces(phi, prec)
    s2 = sin(two_phi, work)
    c2 = cos(two_phi, work)
    tan_half = div(sin(phi.ldexp(-1), work), half, work)
    val = (
        -sin(phi, work)
        - s2.ldexp(-1)
        - phi * c2
        + s2.ldexp(1) * log_term
        + (c2 * tan_half).ldexp(-1)
    )
    return val.round(prec)


def lemma2_check(prec: int = 64) -> Interval:
    """Enclosure of ``log 2 - 2 - cos 6 * log(2 cos(3/2))``, a lower bound of h on [3, pi)."""
    work = prec + _GUARD
    val = log2_enclosure(work) - 2 - cos(6, work) * log(cos(Fraction(3, 2), work).ldexp(1), work)
    return val.round(prec)


def lemma2_hypotheses(prec: int = 64) -> bool:
    """Sign facts used on [3, pi): 0 < 2cos(3/2) < 1, 0 < cos 6, sin 6 < 0, cos 3 < 0."""
    two_cos = cos(Fraction(3, 2), prec).ldexp(1)
    return (
        two_cos.lo.mantissa > 0
        and two_cos.hi < 1
        and log(two_cos, prec).hi.mantissa < 0
        and cos(6, prec).lo.mantissa > 0
        and sin(6, prec).hi.mantissa < 0
        and cos(3, prec).hi.mantissa < 0
        and cos(3, prec).lo > -1
    )


def lemma3_chain_values(prec: int = 64) -> dict[str, Interval]:
    work = prec + _GUARD
    two_cos = cos(Fraction(3, 2), work).ldexp(1)
    c3, s3 = cos(3, work), sin(3, work)
    modulus_sq = (c3 + 1).sqr() + s3.sqr()
    log_abs = -log(two_cos, work)
    log_top = log(cos(Fraction(1, 6), work).ldexp(1), work)
    log_term = (log_abs + pi_enclosure(work)).ldexp(1)
    recip = div(1, two_cos, work)
    return {
        "2cos(3/2)": two_cos.round(prec),
        "|1+e^3i|^2": modulus_sq.round(prec),
        "(2cos(3/2))^2": two_cos.sqr().round(prec),
        "|log 2cos(3/2)|": log_abs.round(prec),
        "log 2cos(1/6)": log_top.round(prec),
        "2(|log|+pi)": log_term.round(prec),
        "1/(2cos(3/2))": recip.round(prec),
        "bound": (log_term + recip + 1).round(prec),
    }


def lemma3_chain_check(prec: int = 64) -> bool:
    """|h'| < 20 on [1/3, 3] via ``2(|log|1+z||+pi) + 1/|1+z| + 1 < 11 + 8 + 1``.

    ``|1 + e^(i phi)| = 2 cos(phi/2)`` is smallest at phi = 3 and at most
    ``2 cos(1/6)`` on the interval, so ``|log|1+z||`` peaks at phi = 3.
    """
    v = lemma3_chain_values(prec)
    return (
        v["2cos(3/2)"].lo.mantissa > 0
        and v["|1+e^3i|^2"].overlaps(v["(2cos(3/2))^2"])
        and v["log 2cos(1/6)"].hi < v["|log 2cos(3/2)|"].lo
        and v["2(|log|+pi)"].hi < 11
        and v["1/(2cos(3/2))"].hi < 8
        and v["bound"].hi < 20
    )


def _mid(x: Interval) -> Fraction:
    return x.mid.to_fraction()


def ode_residual(phi, step=Fraction(1, 10000), prec: int = 96) -> float:
    """``u'' + 4u - (1 - 1/(2(1 + cos phi)))`` with u'' from a 5-point stencil of u_closed."""
    phi = Fraction(phi) if not isinstance(phi, float) else Fraction(str(phi))
    step = Fraction(step)
    u = {k: _mid(u_closed(phi + k * step, prec)) for k in (-2, -1, 0, 1, 2)}
    u2 = (-u[2] + 16 * u[1] - 30 * u[0] + 16 * u[-1] - u[-2]) / (12 * step * step)
    rhs = 1 - 1 / (2 * (1 + _mid(cos(phi, prec))))
    return float(u2 + 4 * u[0] - rhs)


def hprime_fd_error(phi, delta=Fraction(1, 10**6), prec: int = 96) -> float:
    """``|h'(phi) - (h(phi+delta) - h(phi-delta)) / (2 delta)|`` using the enclosure midpoints."""
    phi = Fraction(phi) if not isinstance(phi, float) else Fraction(str(phi))
    delta = Fraction(delta)
    fd = (_mid(h_closed(phi + delta, prec)) - _mid(h_closed(phi - delta, prec))) / (2 * delta)
    return float(abs(_mid(hprime_closed(phi, prec)) - fd))
