"""End-to-end acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line before asserting; the lines are
printed together at the end of the pytest run.
"""

import operator
import random
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from mspkit import bernd, harmonic, paperfns
from mspkit.msp import Certificate, bound_sup_abs, coverage_check, msp_certify, msp_verify
from mspkit.rigor import Dyadic, Interval, interval_arith, round_dir

pytestmark = pytest.mark.acceptance

H_A = Fraction(21845, 65536)
R_GRID = [Fraction(k, 10) for k in range(1, 10)] + [Fraction(8, 9), Fraction(883, 1000)]
PHI_GRID = [Fraction(k, 10) for k in range(1, 32)]


@pytest.fixture
def record(acceptance_log):
    def _record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"C{number:02d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
        acceptance_log.append(line)
        return ok

    return _record


@pytest.fixture(scope="module")
def h_certificate():
    start = time.perf_counter()
    cert = msp_certify(paperfns.h, H_A, 3, 20, prec=64)
    verdict = msp_verify(cert)
    return cert, verdict, time.perf_counter() - start


def test_c01_msp_reproduction(record, h_certificate):
    cert, verdict, seconds = h_certificate
    ok = bool(verdict) and abs(len(cert) - 4163) <= 416.3 and seconds <= 60
    assert record(1, "MSP certificate for h on [21845/65536, 3], M = 20", ok,
                  f"{len(cert)} points vs 4163, {verdict}, {seconds:.1f} s")


def test_c02_coefficients(record):
    same = all(bernd.d_closed(k) == bernd.d_recur(k) for k in range(1, 41))
    positive = all(bernd.linlog2_sign(d) == 1 for _, d in bernd.coeff_table(32))
    extremes = bernd.dk_extremes(32)
    chain = all(bernd.dk_asymptotic_check(k) for k in range(33, 65))
    ok = same and positive and extremes == (Fraction(177, 256), Fraction(89, 128)) and chain
    assert record(2, "d_k closed = recurrence, positivity, extremes, asymptotic chain", ok,
                  f"max r = {extremes[0]}, min s = {extremes[1]}")


def test_c03_lemma1(record):
    roots = paperfns.p_roots()
    den = paperfns.p_roots((-10, 10), poly=paperfns.denominator_poly())

    def within(enc, x, tol):
        return abs(float(enc.lo) - x) <= tol and abs(float(enc.hi) - x) <= tol

    ok = (
        len(roots) == 2
        and within(roots[0], 0.392976, 1e-6)
        and within(roots[1], 7.78294, 1e-5)
        and len(den) == 2
        and within(den[0], -7.78849, 1e-5)
        and within(den[1], 7.78849, 1e-5)
        and paperfns.lemma1_check()
    )
    assert record(3, "roots of p and of the denominator, lemma1_check", ok,
                  ", ".join(f"{float(r.mid):.7f}" for r in roots + den))


def test_c04_lemma2(record):
    enc = paperfns.lemma2_check(64)
    # a tight enclosure of 0.5708912138... cannot contain the 6-digit literal itself,
    # so the enclosure joined with 0.570891 must stay within the stated width
    joined_lo = min(float(enc.lo), 0.570891)
    joined_hi = max(float(enc.hi), 0.570891)
    ok = joined_hi - joined_lo <= 2e-6 and enc.lo.mantissa > 0
    assert record(4, "lower-bound constant on [3, pi) ~ 0.570891, positive", ok,
                  f"[{float(enc.lo):.15f}, {float(enc.hi):.15f}]")


def test_c05_lemma3(record):
    chain = paperfns.lemma3_chain_check()
    sup = bound_sup_abs(paperfns.hprime, Fraction(1, 3), 3, 20)
    fd = max(paperfns.hprime_fd_error(x) for x in np.linspace(0.1, 3.0, 59))
    ok = chain and sup.proved and fd <= 1e-8
    assert record(5, "|h'| < 20 on [1/3, 3]; h' matches finite differences", ok,
                  f"max fd error {fd:.2e}")


def test_c06_ode(record):
    worst = max(abs(paperfns.ode_residual(x)) for x in np.linspace(-3.0, 3.0, 100))
    assert record(6, "u'' + 4u = 1 - 1/(2(1 + cos phi)) at 100 points", worst <= 1e-6,
                  f"max residual {worst:.2e}")


def test_c07_series(record):
    worst = 0.0
    for x in np.linspace(-2.0, 2.0, 200):
        q = Fraction(float(x))
        worst = max(worst, abs(float(bernd.h_taylor(q, 64)) - float(paperfns.h_closed(q).mid)))
    with mpmath.workdps(30):
        at_half_pi = abs(bernd.h_taylor(mpmath.pi / 2, 64) - (mpmath.mpf(3) / 2 * mpmath.log(2) - 1))
    ok = worst <= 1e-10 and at_half_pi <= 1e-10
    assert record(7, "power series of h against the closed form", ok,
                  f"max diff {worst:.2e}, at pi/2 {float(at_half_pi):.2e}")


def test_c08_poisson(record):
    start = time.perf_counter()
    phis = np.linspace(-3.0, 3.0, 20)
    worst = 0.0
    for r in (0.5, 8 / 9, 0.883):
        for phi in phis:
            worst = max(worst, abs(harmonic.U_poisson(r, phi, 4096) - float(harmonic.U_direct(r, phi))))
    seconds = time.perf_counter() - start
    ok = worst <= 1e-6 and seconds <= 30
    assert record(8, "Poisson integral equals the closed form", ok, f"max diff {worst:.2e}, {seconds:.1f} s")


def test_c09_theorem_scan(record):
    rep = harmonic.theorem_scan(R_GRID, PHI_GRID)
    d = harmonic.strict_gap_D(0.5, 2.0, 0.3, 0.1)
    ok = rep.ok and rep.points == len(R_GRID) * len(PHI_GRID) and d > 0
    assert record(9, "U(r, phi) > U(r, 0) on the grid; strict gap D > 0", ok,
                  f"{rep.points} points, {len(rep.violations)} violations, D = {d:.3e}")


def test_c10_main_inequality(record, h_certificate):
    series_ok = all(paperfns.main_inequality_holds(r, phi) for r in R_GRID for phi in PHI_GRID)
    cert, verdict, _ = h_certificate
    # (0, 1/3] from the polynomial bound, [a, 3] from the certificate with a < 1/3, [3, pi) from the constant
    boundary_ok = (
        paperfns.lemma1_check()
        and bool(verdict)
        and cert.a.to_fraction() <= Fraction(1, 3)
        and cert.b == Dyadic(3)
        and paperfns.lemma2_check().lo.mantissa > 0
        and paperfns.lemma2_hypotheses()
    )
    assert record(10, "series inequality for r < 1; r = 1 covered on (0, pi)", series_ok and boundary_ok)


def test_c11_gallery(record):
    z = paperfns.flett_first_zero()
    zero_ok = abs(float(z.lo) - 48.418454) <= 1e-5 and abs(float(z.hi) - 48.418454) <= 1e-5
    slope = round_dir(Fraction(165, 100), 16, "up")
    cert = msp_certify(paperfns.flett, Dyadic(1, -10), Dyadic(48), slope, prec=53)
    flett_ok = bool(msp_verify(cert))
    grid = [Fraction(k, 4) for k in range(-200, 201)]
    q_ok = all(paperfns.q_logconvex_check(n, grid) for n in range(2, 11))
    zeros = paperfns.r23_zeros((0, 50))
    r23_ok = bool(zeros) and all(abs(paperfns.r23_eval(x)) <= 1e-10 for x in zeros)
    ok = zero_ok and flett_ok and q_ok and r23_ok
    assert record(11, "Flett zero and certificate, Q log-convex, R_23 zeros", ok,
                  f"zero {float(z.mid):.7f}, {len(cert)} points, {len(zeros)} R_23 zeros")


def test_c12_rearrangement(record):
    grid = harmonic.CircleGrid((0, 0, 1, 2, 1, 0), (2, 2, 1, 0, 1, 2))
    exhaustive = harmonic.rearrangement_exhaustive(grid)
    random_bad = harmonic.rearrangement_random_trials(64, 10_000, seed=0)
    ok = exhaustive == 0 and random_bad == 0
    assert record(12, "rearrangement: 720 permutations at N = 6, 10^4 trials at N = 64", ok,
                  f"{exhaustive} + {random_bad} violations")


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def _containment_failures(count: int, seed: int) -> int:
    rng = random.Random(seed)
    failures = 0
    done = 0
    while done < count:
        X = Interval(*sorted(Dyadic(rng.randint(-(10**8), 10**8), rng.randint(-40, 8)) for _ in range(2)))
        Y = Interval(*sorted(Dyadic(rng.randint(-(10**8), 10**8), rng.randint(-40, 8)) for _ in range(2)))
        op = rng.choice(sorted(_OPS))
        if op == "div" and Y.contains_zero():
            continue
        done += 1
        Z = interval_arith(X, Y, op, rng.randint(16, 96))
        xs = [X.lo.to_fraction(), X.hi.to_fraction()]
        ys = [Y.lo.to_fraction(), Y.hi.to_fraction()]
        xs.append(xs[0] + (xs[1] - xs[0]) * Fraction(rng.randint(0, 999), 1000))
        ys.append(ys[0] + (ys[1] - ys[0]) * Fraction(rng.randint(0, 999), 1000))
        if not all(Z.contains(_OPS[op](x, y)) for x in xs for y in ys):
            failures += 1
    return failures


def test_c13_infrastructure(record, h_certificate, clean_report):
    cert = h_certificate[0]
    text = cert.dumps()
    round_trip = Certificate.loads(text).dumps() == text and bool(msp_verify(Certificate.loads(text)))
    failures = _containment_failures(10_000, seed=13)
    coverage = coverage_check(cert)
    report_ok = clean_report[1]
    ok = round_trip and failures == 0 and coverage and report_ok
    assert record(13, "certificate round trip, 10^4 containment cases, report bundle", ok,
                  f"{failures} containment failures, report {'PASS' if report_ok else 'FAIL'}")
