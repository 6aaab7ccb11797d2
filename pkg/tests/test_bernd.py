from fractions import Fraction
from math import factorial

import mpmath
import pytest

from mspkit import bernd
from mspkit.bernd import (
    LinLog2,
    bernoulli,
    coeff_table,
    d_closed,
    d_recur,
    dk_asymptotic_check,
    dk_extremes,
    h_taylor,
    linlog2_sign,
    zeta_even_identity_check,
)
from mspkit.paperfns import h_closed


def test_bernoulli_values():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    for bad in (0, 1, 7):
        with pytest.raises(ValueError):
            bernoulli(bad)


@pytest.mark.parametrize("n", range(2, 61, 2))
def test_bernoulli_matches_mpmath(n):
    p, q = mpmath.bernfrac(n)
    assert bernoulli(n) == Fraction(int(p), int(q))


def test_first_coefficients():
    assert d_closed(1) == LinLog2(Fraction(-11, 16), 1)
    assert d_closed(2) == LinLog2(Fraction(89, 128), -1)
    assert d_recur(1) == d_closed(1)
    assert d_recur(2) == LinLog2(Fraction(89, 128), -1)
    assert abs(float(d_closed(1)) - 0.0056472) < 1e-7
    assert abs(float(d_closed(2)) - 0.0021653) < 1e-7


def test_closed_equals_recurrence():
    for k in range(1, 41):
        assert d_closed(k) == d_recur(k)
    assert [d for _, d in coeff_table(40)] == [d_recur(k) for k in range(1, 41)]


def test_coefficients_match_taylor_oracle():
    # d_k = (2k)!/4^k times the phi^(2k) Taylor coefficient of h
    with mpmath.workdps(50):
        def h(x):
            return (
                mpmath.log(2) - 1 + mpmath.cos(x) - x / 2 * mpmath.sin(2 * x)
                - mpmath.cos(2 * x) * mpmath.log(2 * mpmath.cos(x / 2))
            )

        c = mpmath.taylor(h, 0, 12)
        for k in range(1, 7):
            oracle = c[2 * k] * factorial(2 * k) / 4**k
            assert abs(d_closed(k).to_mpf() - oracle) < mpmath.mpf(10) ** -30


def test_sign_examples():
    assert linlog2_sign(LinLog2(0, 0)) == 0
    assert linlog2_sign(LinLog2(Fraction(-177, 256), 1)) == 1
    assert linlog2_sign(LinLog2(Fraction(89, 128), -1)) == 1
    assert linlog2_sign(LinLog2(Fraction(-89, 128), 1)) == -1
    assert linlog2_sign(LinLog2(3, 0)) == 1
    # a difference of 1e-40 needs more than the starting 64 bits
    near = LinLog2(-Fraction(mpmath.nstr(mpmath.log(2), 50)) - Fraction(1, 10**40), 1)
    with mpmath.workdps(60):
        assert linlog2_sign(near) == (1 if near.to_mpf() > 0 else -1)


def test_positive_up_to_32():
    assert all(linlog2_sign(d) == 1 for _, d in coeff_table(32))


def test_extremes():
    assert dk_extremes(32) == (Fraction(177, 256), Fraction(89, 128))
    assert dk_extremes(2) == (Fraction(11, 16), Fraction(89, 128))
    assert dk_extremes(1) == (Fraction(11, 16), None)


def test_asymptotic_chain():
    assert dk_asymptotic_check(33)
    assert dk_asymptotic_check(100)
    with pytest.raises(ValueError):
        dk_asymptotic_check(5)
    # below 33 the chain may fail, and then the direct sign must be positive
    for k in range(8, 33):
        if not dk_asymptotic_check(k):
            assert linlog2_sign(d_closed(k)) == 1


def test_h_taylor():
    assert h_taylor(0, 10) == 0
    with mpmath.workdps(30):
        target = mpmath.mpf(3) / 2 * mpmath.log(2) - 1
    assert abs(h_taylor(mpmath.pi / 2, 64) - target) < 1e-10
    one = h_closed(1, 64)
    assert abs(h_taylor(1, 64) - float(one.mid)) < 1e-10


def test_zeta_identity():
    assert zeta_even_identity_check(1)
    assert zeta_even_identity_check(2)
    assert zeta_even_identity_check(20)
    broken = lambda n: -bernoulli(n) if n == 2 else bernoulli(n)
    assert not zeta_even_identity_check(1, bern=broken)


def test_mutated_bernoulli_breaks_table(monkeypatch):
    monkeypatch.setattr(bernd, "bernoulli", lambda n: Fraction(0) if n == 4 else bernd._bernoulli_table(n)[n])
    assert dk_extremes(32) != (Fraction(177, 256), Fraction(89, 128))
