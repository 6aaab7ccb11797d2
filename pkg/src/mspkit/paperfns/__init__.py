"""The concrete functions of the problem and the registry used by certificates.

Registry names: ``h``, ``hprime``, ``u``, ``p_lemma1``, ``flett``, ``r23``.
"""

from types import MappingProxyType

from ..msp import RigorFn
from .closed import (
    h_closed,
    hprime_closed,
    hprime_fd_error,
    ode_residual,
    lemma2_check,
    lemma2_hypotheses,
    lemma3_chain_check,
    lemma3_chain_values,
    u_closed,
)
from .gallery import (
    FLETT_TERMS,
    RadiusError,
    flett_eval,
    flett_first_zero,
    main_inequality_holds,
    q_log,
    q_logconvex_check,
    r23_enclose,
    r23_eval,
    r23_zeros,
    u_series,
    u_series_terms_for,
)
from .poly import PolyLinLog2, denominator_poly, lemma1_check, p_eval, p_poly, p_roots, prove_positive


def _p_lemma1(x, prec):
    return p_poly().enclose(x, prec)


def _flett(x, prec):
    return flett_eval(x, FLETT_TERMS, prec)


h = RigorFn("h", h_closed)
hprime = RigorFn("hprime", hprime_closed)
u = RigorFn("u", u_closed)
p_lemma1 = RigorFn("p_lemma1", _p_lemma1)
flett = RigorFn("flett", _flett)
r23 = RigorFn("r23", r23_enclose)

REGISTRY = MappingProxyType({f.name: f for f in (h, hprime, u, p_lemma1, flett, r23)})

__all__ = [
    "REGISTRY",
    "FLETT_TERMS",
    "PolyLinLog2",
    "RadiusError",
    "denominator_poly",
    "flett",
    "flett_eval",
    "flett_first_zero",
    "h",
    "h_closed",
    "hprime",
    "hprime_closed",
    "hprime_fd_error",
    "ode_residual",
    "lemma1_check",
    "lemma2_check",
    "lemma2_hypotheses",
    "lemma3_chain_check",
    "lemma3_chain_values",
    "main_inequality_holds",
    "p_eval",
    "p_lemma1",
    "p_poly",
    "p_roots",
    "prove_positive",
    "q_log",
    "q_logconvex_check",
    "r23",
    "r23_enclose",
    "r23_eval",
    "r23_zeros",
    "u",
    "u_closed",
    "u_series",
    "u_series_terms_for",
]
