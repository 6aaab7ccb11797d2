"""Exact dyadic arithmetic and interval enclosures."""

from .dyadic import Dyadic, dyadic_arith, parse_dyadic, parse_rational, round_dir, to_fraction
from .elementary import (
    atan,
    const_enclosure,
    cos,
    enclose_elem,
    log,
    log2_enclosure,
    pi_enclosure,
    sin,
)
from .interval import (
    DivisionByIntervalContainingZero,
    DomainError,
    Interval,
    check_precision,
    div,
    hull,
    interval_arith,
)

__all__ = [
    "Dyadic",
    "Interval",
    "DivisionByIntervalContainingZero",
    "DomainError",
    "atan",
    "check_precision",
    "const_enclosure",
    "cos",
    "div",
    "dyadic_arith",
    "enclose_elem",
    "hull",
    "interval_arith",
    "log",
    "log2_enclosure",
    "parse_dyadic",
    "parse_rational",
    "pi_enclosure",
    "round_dir",
    "sin",
    "to_fraction",
]
