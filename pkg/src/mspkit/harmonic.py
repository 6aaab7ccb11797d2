"""Numerical confirmation of the 0 < r < 1 case through the Poisson integral.

U(r e^{i phi}) = Re f(-r e^{i phi}) - Re f(-1) is harmonic in the unit disc,
has boundary values h, and the claim is U(r, phi) > U(r, 0).  Everything here
is approximation tier (float64 with stated tolerances) except the r = 1 rows
of :func:`theorem_scan`, which use the rigorous enclosure of h.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .paperfns.closed import h_closed

__all__ = [
    "InvalidGrid",
    "ParameterOrderError",
    "CircleGrid",
    "ScanReport",
    "h_values",
    "poisson_kernel",
    "U_direct",
    "U_complex",
    "U_poisson",
    "rearrangement_check",
    "rearrangement_exhaustive",
    "rearrangement_random_trials",
    "random_circle_grid",
    "strict_gap_D",
    "strict_gap_integrand",
    "theorem_scan",
]

LOG2 = math.log(2.0)
EDGE_WIDTH = math.pi / 64
EDGE_DEPTH = 30
EDGE_NODES = 8
PANEL_NODES = 16


class InvalidGrid(ValueError):
    pass


class ParameterOrderError(ValueError):
    pass


def h_values(t):
    """h on the circle (even, 2 pi periodic), vectorised; +inf at t = +-pi."""
    t = np.asarray(t, dtype=float)
    t = np.abs(np.remainder(t + np.pi, 2 * np.pi) - np.pi)
    # 2 cos(t/2) = 2 sin((pi - t)/2) keeps digits near t = pi
    with np.errstate(divide="ignore"):
        log_term = np.log(2 * np.sin((np.pi - t) / 2))
    return LOG2 - 1 + np.cos(t) - t / 2 * np.sin(2 * t) - np.cos(2 * t) * log_term


def poisson_kernel(r, t):
    """``(1 - r^2) / (1 + r^2 - 2 r cos t)`` for ``0 <= r < 1``."""
    r = float(r)
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    return (1 - r * r) / (1 + r * r - 2 * r * np.cos(t))


def U_direct(r, phi):
    """Closed real form of U.

    With L = log|1 + z| and A = arg(1 + z), z = r e^{i phi}:
    U = (log 2 - 1/2) - [(cos 2phi L + sin 2phi A)/r^2 - cos(phi)/r + 1/2].
    """
    r = float(r)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    L = 0.5 * np.log1p(2 * r * c + r * r)
    A = np.arctan2(r * s, 1 + r * c)
    inner = (np.cos(2 * phi) * L + np.sin(2 * phi) * A) / (r * r) - c / r + 0.5
    return (LOG2 - 0.5) - inner


def U_complex(r, phi):
    """U from complex evaluation of ``log(1+z)/z^2 - 1/z + 1/2``."""
    z = r * np.exp(1j * np.asarray(phi, dtype=float))
    return (LOG2 - 0.5) - np.real(np.log1p(z) / z**2 - 1 / z + 0.5)


@lru_cache(maxsize=16)
def _quadrature(n_quad: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-pi, pi], graded geometrically toward both ends.

    ``n_quad`` nodes go on uniform 16-point Gauss-Legendre panels in the
    middle; each end adds EDGE_DEPTH + 1 halving panels of 8 nodes.
    """
    if n_quad < 64:
        raise ValueError("n_quad must be at least 64")
    g_x, g_w = np.polynomial.legendre.leggauss(PANEL_NODES)
    e_x, e_w = np.polynomial.legendre.leggauss(EDGE_NODES)
    panels = []
    n_mid = max(1, n_quad // PANEL_NODES)
    edges = np.linspace(-np.pi + EDGE_WIDTH, np.pi - EDGE_WIDTH, n_mid + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        panels.append((a, b, g_x, g_w))
    widths = EDGE_WIDTH * 0.5 ** np.arange(EDGE_DEPTH + 1)
    cuts = list(np.pi - widths) + [np.pi]
    for a, b in zip(cuts[:-1], cuts[1:]):
        panels.append((a, b, e_x, e_w))
        panels.append((-b, -a, e_x, e_w))
    nodes = np.concatenate([(b - a) / 2 * x + (a + b) / 2 for a, b, x, _ in panels])
    weights = np.concatenate([(b - a) / 2 * w for a, b, _, w in panels])
    return nodes, weights


def U_poisson(r, phi, n_quad: int = 4096):
    """``(1/2pi) * integral of h(t) P_r(phi - t) dt`` over the circle."""
    nodes, weights = _quadrature(int(n_quad))
    vals = h_values(nodes) * poisson_kernel(r, float(phi) - nodes)
    return float(np.dot(weights, vals) / (2 * np.pi))


# --- rearrangement ----------------------------------------------------------


@dataclass(frozen=True)
class CircleGrid:
    """Step functions on N equal arcs; cell i is centred at angle 2 pi i / N.

    F must be even and non-decreasing on (0, pi), G even and non-increasing,
    both non-negative.
    """

    F: tuple[float, ...]
    G: tuple[float, ...]

    def __post_init__(self):
        F, G = tuple(map(float, self.F)), tuple(map(float, self.G))
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "G", G)
        N = len(F)
        if N < 2 or N % 2 or len(G) != N:
            raise InvalidGrid("F and G need the same even length")
        if min(F) < 0 or min(G) < 0:
            raise InvalidGrid("values must be non-negative")
        for i in range(1, N // 2):
            if F[i] != F[N - i] or G[i] != G[N - i]:
                raise InvalidGrid(f"not even about 0 at cell {i}")
        half = N // 2
        if any(F[i] > F[i + 1] for i in range(half)):
            raise InvalidGrid("F is not non-decreasing on (0, pi)")
        if any(G[i] < G[i + 1] for i in range(half)):
            raise InvalidGrid("G is not non-increasing on (0, pi)")

    @property
    def N(self) -> int:
        return len(self.F)


def rearrangement_check(grid: CircleGrid, T: Sequence[int], tol: float = 1e-12):
    """``(lhs, rhs, ok)`` with lhs = sum F_i G_i, rhs = sum F_i G_T(i)."""
    N = grid.N
    T = list(T)
    if sorted(T) != list(range(N)):
        raise ValueError("T must be a permutation of the cell indices")
    F, G = grid.F, grid.G
    lhs = math.fsum(f * g for f, g in zip(F, G))
    rhs = math.fsum(F[i] * G[T[i]] for i in range(N))
    return lhs, rhs, lhs <= rhs + tol


def rearrangement_exhaustive(grid: CircleGrid) -> int:
    """Number of permutations violating the inequality (all N! of them are tried)."""
    return sum(not rearrangement_check(grid, T)[2] for T in itertools.permutations(range(grid.N)))


def random_circle_grid(N: int, rng: np.random.Generator) -> CircleGrid:
    half = N // 2
    f_half = np.cumsum(rng.random(half + 1) * (rng.random(half + 1) < 0.7))
    g_half = np.cumsum(rng.random(half + 1) * (rng.random(half + 1) < 0.7))[::-1]
    F = [f_half[min(i, N - i)] for i in range(N)]
    G = [g_half[min(i, N - i)] for i in range(N)]
    return CircleGrid(tuple(F), tuple(G))


def rearrangement_random_trials(N: int = 64, trials: int = 10_000, seed: int = 0) -> int:
    """Violations over ``trials`` random (grid, permutation) pairs."""
    rng = np.random.default_rng(seed)
    violations = 0
    grid = random_circle_grid(N, rng)
    for k in range(trials):
        if k % 100 == 0:
            grid = random_circle_grid(N, rng)
        if not rearrangement_check(grid, rng.permutation(N))[2]:
            violations += 1
    return violations


# --- strict gap --------------------------------------------------------------


def _gap_params(phi, delta, eps):
    a, b = phi / 2 - delta, phi / 2 + delta
    if not (0 < a - eps < a + eps < phi / 2 < b - eps < b + eps < math.pi):
        raise ParameterOrderError(
            "need 0 < a-eps < a+eps < phi/2 < b-eps < b+eps < pi with a, b = phi/2 -+ delta"
        )
    return a, b


def strict_gap_integrand(r, phi, delta, eps, t):
    a, b = _gap_params(float(phi), float(delta), float(eps))
    t = np.asarray(t, dtype=float)
    return (h_values(b + t) - h_values(a + t)) * (poisson_kernel(r, a - t) - poisson_kernel(r, b - t))


def strict_gap_D(r, phi, delta, eps, n_quad: int = 64) -> float:
    """``D = integral_{-eps}^{eps} (h(b+t) - h(a+t)) (P_r(a-t) - P_r(b-t)) dt``."""
    x, w = np.polynomial.legendre.leggauss(int(n_quad))
    eps = float(eps)
    return float(eps * np.dot(w, strict_gap_integrand(r, phi, delta, eps, eps * x)))


# --- theorem scan --------------------------------------------------------------


@dataclass
class ScanReport:
    points: int = 0
    violations: list = field(default_factory=list)
    min_margin: float = math.inf
    argmin: tuple = (None, None)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, r, phi, margin: float) -> None:
        self.points += 1
        if margin <= 0:
            self.violations.append((r, phi, margin))
        if margin < self.min_margin:
            self.min_margin = margin
            self.argmin = (r, phi)


def theorem_scan(r_grid: Sequence, phi_grid: Sequence, prec: int = 64) -> ScanReport:
    """Check ``U(r, phi) > U(r, 0)`` on a grid.

    Rows with ``r = 1`` are decided by the rigorous enclosure of h (the margin
    is then the lower bound of h(phi)).
    """
    report = ScanReport()
    for r in sorted(r_grid, key=float):
        if float(r) == 1.0:
            for phi in sorted(phi_grid, key=float):
                phi_q = Fraction(phi) if isinstance(phi, (int, Fraction)) else Fraction(str(phi))
                if not 0 < phi_q < Fraction(314159, 100000):
                    raise ValueError("phi must lie in (0, pi)")
                report.record(r, phi, float(h_closed(phi_q, prec).lo))
            continue
        if not 0 < float(r) < 1:
            raise ValueError("r must lie in (0, 1]")
        phis = np.array([float(p) for p in phi_grid])
        if np.any(phis <= 0) or np.any(phis >= np.pi):
            raise ValueError("phi must lie in (0, pi)")
        base = float(U_direct(r, 0.0))
        margins = U_direct(r, phis) - base
        for phi, m in sorted(zip(phi_grid, margins), key=lambda p: float(p[0])):
            report.record(r, phi, float(m))
    return report
