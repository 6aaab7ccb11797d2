import itertools
import math

import mpmath
import numpy as np
import pytest

from mspkit.harmonic import (
    CircleGrid,
    InvalidGrid,
    ParameterOrderError,
    U_complex,
    U_direct,
    U_poisson,
    h_values,
    poisson_kernel,
    random_circle_grid,
    rearrangement_check,
    rearrangement_exhaustive,
    rearrangement_random_trials,
    strict_gap_D,
    theorem_scan,
)
from mspkit.paperfns import h_closed


def _h_mp(x):
    return (
        mpmath.log(2) - 1 + mpmath.cos(x) - x / 2 * mpmath.sin(2 * x)
        - mpmath.cos(2 * x) * mpmath.log(2 * mpmath.cos(x / 2))
    )


def _U_mp(r, phi):
    z = mpmath.mpf(r) * mpmath.expj(phi)
    return mpmath.log(2) - 0.5 - mpmath.re(mpmath.log(1 + z) / z**2 - 1 / z + 0.5)


def test_kernel():
    t = np.linspace(-3, 3, 7)
    assert np.allclose(poisson_kernel(0, t), 1.0)
    assert poisson_kernel(0.5, 0.0) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        poisson_kernel(1, 0.0)


def test_h_values_match_rigorous():
    for x in (0.1, 1.0, 2.0, 3.0):
        enc = h_closed(x)
        assert float(enc.lo) - 1e-13 <= float(h_values(x)) <= float(enc.hi) + 1e-13
    assert h_values(-1.0) == h_values(1.0)
    assert h_values(1.0 + 2 * math.pi) == pytest.approx(float(h_values(1.0)), abs=1e-13)
    assert h_values(math.pi) == np.inf


def test_boundary_value_reference():
    # Re f(-1) = 1/2 - log 2
    assert float(_U_mp(1 - 1e-12, math.pi / 2)) == pytest.approx(float(_h_mp(math.pi / 2)), abs=1e-9)


@pytest.mark.parametrize("r", [0.1, 0.5, 8 / 9, 0.883, 0.99])
def test_direct_against_complex_oracle(r):
    phis = np.linspace(-3.1, 3.1, 25)
    with mpmath.workdps(30):
        ref = np.array([float(_U_mp(r, p)) for p in phis])
    assert np.max(np.abs(U_direct(r, phis) - ref)) < 1e-12
    assert np.max(np.abs(U_complex(r, phis) - ref)) < 1e-12


def test_poisson_examples():
    assert abs(U_poisson(0.5, 0.0) - U_direct(0.5, 0.0)) < 1e-6
    assert abs(U_poisson(0.883, 1.0) - U_direct(0.883, 1.0)) < 1e-6


def test_mean_value_property():
    with mpmath.workdps(20):
        mean = mpmath.quad(_h_mp, [0, 1, 2, 3, mpmath.pi]) / mpmath.pi
    assert U_poisson(0.0, 0.3) == pytest.approx(float(mean), abs=1e-8)
    assert U_poisson(0.0, 0.3) == pytest.approx(U_poisson(0.0, 2.0), abs=1e-12)
    assert U_direct(1e-4, 0.0) == pytest.approx(float(mean), abs=1e-4)


def test_quadrature_rejects_tiny_rule():
    with pytest.raises(ValueError):
        U_poisson(0.5, 0.0, n_quad=8)


def _grid6():
    return CircleGrid((0, 1, 2, 3, 2, 1), (3, 2, 1, 0, 1, 2))


def test_identity_permutation():
    lhs, rhs, ok = rearrangement_check(_grid6(), range(6))
    assert ok and lhs == rhs


def test_exhaustive_n6():
    assert rearrangement_exhaustive(_grid6()) == 0
    assert rearrangement_exhaustive(CircleGrid((0, 0, 1, 2, 1, 0), (2, 1, 0, 0, 0, 1))) == 0


def test_constant_f():
    grid = CircleGrid((2,) * 6, (3, 2, 1, 0, 1, 2))
    for T in itertools.permutations(range(6)):
        lhs, rhs, ok = rearrangement_check(grid, T)
        assert ok and lhs == pytest.approx(rhs)


def test_wrong_alignment_is_caught():
    # swapping the roles of F and G violates the inequality for some T
    with pytest.raises(InvalidGrid):
        CircleGrid((3, 2, 1, 0, 1, 2), (0, 1, 2, 3, 2, 1))
    F, G = (0, 1, 2, 3, 2, 1), (3, 2, 1, 0, 1, 2)
    lhs = sum(f * g for f, g in zip(F, F))
    rhs = sum(f * g for f, g in zip(F, G))
    assert rhs < lhs


@pytest.mark.parametrize(
    "F, G",
    [((0, 1, 2), (2, 1, 0)), ((0, 1, 2, 3, 1, 2), (3, 2, 1, 0, 1, 2)), ((0, 1, 2, 3), (3, 2, 1))],
)
def test_invalid_grids(F, G):
    with pytest.raises(InvalidGrid):
        CircleGrid(F, G)


def test_bad_permutation():
    with pytest.raises(ValueError):
        rearrangement_check(_grid6(), [0, 0, 1, 2, 3, 4])


def test_random_trials_deterministic():
    assert rearrangement_random_trials(N=16, trials=500, seed=1) == 0
    a = random_circle_grid(32, np.random.default_rng(9))
    b = random_circle_grid(32, np.random.default_rng(9))
    assert a == b


def test_strict_gap():
    assert strict_gap_D(0.5, 2.0, 0.3, 0.1) > 0
    values = [strict_gap_D(0.5, 2.0, 0.3, eps) for eps in (0.1, 0.01, 0.001, 1e-6)]
    assert values == sorted(values, reverse=True)
    # D is about 2 eps times the integrand at t = 0
    assert values[-1] < 1e-7
    with pytest.raises(ParameterOrderError):
        strict_gap_D(0.5, 2.0, 0.3, 0.5)


def test_theorem_scan_small():
    report = theorem_scan([0.5, 0.9], [0.1 * k for k in range(1, 32)])
    assert report.ok and report.points == 62
    near = theorem_scan([0.5], [1e-3, 1e-2])
    assert 0 < near.min_margin < 1e-5
    with pytest.raises(ValueError):
        theorem_scan([1.5], [1.0])
    with pytest.raises(ValueError):
        theorem_scan([0.5], [3.2])


def test_theorem_scan_boundary_row():
    from fractions import Fraction

    report = theorem_scan([1], [Fraction(1, 10), Fraction(3)])
    assert report.ok and report.min_margin > 0
