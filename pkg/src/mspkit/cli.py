"""Command line front end.

Subcommands: certify, verify, dk, lemmas, poisson, scan, report.
Exit status is 0 on success, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from . import bernd, harmonic, paperfns
from .msp import (
    Certificate,
    CertificateFormatError,
    CertificationError,
    UnknownFunction,
    bound_sup_abs,
    coverage_check,
    msp_certify_sharded,
    msp_verify,
)
from .rigor import Dyadic, parse_rational, round_dir

REFERENCE_STEPS = 4163
H_A = Fraction(21845, 65536)


def fmt(x) -> str:
    """Numbers are reported with 12 significant digits."""
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 12)
    return f"{float(x):.12g}"


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str) -> list[Fraction]:
    try:
        lo, hi, step = (parse_rational(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be a:b:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    n = int((hi - lo) / step)
    return [lo + i * step for i in range(n + 1)]


def _is_dyadic(q: Fraction) -> bool:
    return not q.denominator & (q.denominator - 1)


# --- subcommands -------------------------------------------------------------


def cmd_certify(args, out) -> int:
    registry = paperfns.REGISTRY
    if args.fn not in registry:
        print(f"error: unknown function {args.fn!r}; known: {', '.join(sorted(registry))}", file=out)
        return 2
    for name, value, direction in (("a", args.a, "down"), ("b", args.b, "up")):
        if not _is_dyadic(value):
            suggestion = round_dir(value, args.prec, direction)
            print(
                f"error: --{name} {value} is not dyadic; the nearest outward dyadic at "
                f"{args.prec} bits is {suggestion} ({suggestion.to_fraction()})",
                file=out,
            )
            return 2
    if not 0 < args.fraction <= 1:
        print("error: --fraction must lie in (0, 1]", file=out)
        return 2
    slope = args.slope if _is_dyadic(args.slope) else round_dir(args.slope, 30, "up").to_fraction()
    try:
        cert = msp_certify_sharded(
            registry[args.fn], args.a, args.b, Dyadic.coerce(slope), args.prec,
            args.fraction, shards=args.shards, n_jobs=args.jobs,
        )
    except CertificationError as exc:
        print(f"FAIL: {exc}", file=out)
        return 1
    if args.out:
        cert.write(args.out)
    verdict = msp_verify(cert, registry)
    print(
        f"certified {args.fn} > 0 on [{args.a}, {args.b}] with M = {Dyadic.coerce(slope)}: "
        f"{len(cert)} points, {verdict}",
        file=out,
    )
    return 0 if verdict else 1


def cmd_verify(args, out) -> int:
    try:
        cert = Certificate.read(args.path)
        verdict = msp_verify(cert, paperfns.REGISTRY)
    except (OSError, CertificateFormatError) as exc:
        print(f"INVALID: {exc}", file=out)
        return 1
    except UnknownFunction as exc:
        print(f"INVALID: unknown function {exc}", file=out)
        return 1
    print(str(verdict), file=out)
    return 0 if verdict else 1


def dk_table(kmax: int) -> tuple[list[str], bool]:
    lines = [f"{'k':>3}  {'p':>40}  {'q':>3}  {'sign':>8}  value"]
    all_positive = True
    with mpmath.workdps(40):
        for k, d in bernd.coeff_table(kmax):
            s = bernd.linlog2_sign(d)
            all_positive &= s > 0
            name = {1: "positive", 0: "zero", -1: "negative"}[s]
            lines.append(f"{k:>3}  {str(d.p):>40}  {str(d.q):>3}  {name:>8}  {mpmath.nstr(d.to_mpf(), 12)}")
    max_r, min_s = bernd.dk_extremes(kmax)
    tail = "ALL POSITIVE" if all_positive else "NOT ALL POSITIVE"
    lines.append(f"max r = {max_r}  min s = {min_s if min_s is not None else 'none'}  {tail}")
    return lines, all_positive


def cmd_dk(args, out) -> int:
    if args.max < 1:
        print("error: --max must be >= 1", file=out)
        return 2
    lines, ok = dk_table(args.max)
    print("\n".join(lines), file=out)
    return 0 if ok else 1


def lemma_lines(prec: int = 64) -> tuple[list[str], bool]:
    lines = []
    ok1 = paperfns.lemma1_check(prec)
    roots = paperfns.p_roots((0, 10), Dyadic(1, -30))
    lines.append("p roots: " + ", ".join(fmt(r.mid) for r in roots))
    lines.append(f"{'PASS' if ok1 else 'FAIL'} lemma1: h > 0 on (0, 1/3]")
    enc = paperfns.lemma2_check(prec)
    ok2 = enc.lo.mantissa > 0 and paperfns.lemma2_hypotheses(prec)
    lines.append(f"lemma2 constant in [{fmt(enc.lo)}, {fmt(enc.hi)}]")
    lines.append(f"{'PASS' if ok2 else 'FAIL'} lemma2: h > 0 on [3, pi)")
    chain = paperfns.lemma3_chain_check(prec)
    sup = bound_sup_abs(paperfns.hprime, H_A, 3, 20, prec)
    ok3 = chain and sup.proved
    lines.append(f"lemma3 chain {'holds' if chain else 'fails'}; |h'| < 20 by bisection: {sup.proved}")
    lines.append(f"{'PASS' if ok3 else 'FAIL'} lemma3: |h'| < 20 on [1/3, 3]")
    return lines, ok1 and ok2 and ok3


def cmd_lemmas(args, out) -> int:
    lines, ok = lemma_lines(args.prec)
    print("\n".join(lines), file=out)
    return 0 if ok else 1


def cmd_poisson(args, out) -> int:
    r, phi = float(args.r), float(args.phi)
    if not 0 < r < 1:
        print("error: --r must lie in (0, 1)", file=out)
        return 2
    direct = float(harmonic.U_direct(r, phi))
    quad = harmonic.U_poisson(r, phi, args.quad)
    print(f"U_direct  = {fmt(direct)}", file=out)
    print(f"U_poisson = {fmt(quad)}", file=out)
    print(f"difference = {abs(direct - quad):.3e}", file=out)
    return 0


def scan_lines(r_grid, phi_grid) -> tuple[list[str], bool]:
    rep = harmonic.theorem_scan(r_grid, phi_grid)
    lines = [f"points: {rep.points}", f"violations: {len(rep.violations)}"]
    for r, phi, m in rep.violations:
        lines.append(f"  r = {fmt(r)} phi = {fmt(phi)} margin = {fmt(m)}")
    r, phi = rep.argmin
    lines.append(f"minimum margin {fmt(rep.min_margin)} at r = {fmt(r)}, phi = {fmt(phi)}")
    return lines, rep.ok


def cmd_scan(args, out) -> int:
    try:
        lines, ok = scan_lines(args.r_grid, args.phi_grid)
    except ValueError as exc:
        print(f"error: {exc}", file=out)
        return 2
    print("\n".join(lines), file=out)
    return 0 if ok else 1


# --- report bundle -------------------------------------------------------------

R_GRID = [Fraction(k, 10) for k in range(1, 10)] + [Fraction(8, 9), Fraction(883, 1000)]
PHI_GRID = [Fraction(k, 10) for k in range(1, 32)]


def _check(lines: list[str], ok: bool, label: str) -> bool:
    lines.append(f"{'PASS' if ok else 'FAIL'} {label}")
    return ok


def _section_lemmas(seed):
    lines, ok = lemma_lines()
    return lines, ok


def _section_dk(seed):
    lines = []
    ok = _check(lines, all(bernd.d_closed(k) == bernd.d_recur(k) for k in range(1, 41)), "d_closed = d_recur, k = 1..40")
    ok &= _check(lines, all(bernd.linlog2_sign(d) > 0 for _, d in bernd.coeff_table(32)), "d_k > 0, k = 1..32")
    max_r, min_s = bernd.dk_extremes(32)
    lines.append(f"max r = {max_r}  min s = {min_s}")
    ok &= _check(lines, (max_r, min_s) == (Fraction(177, 256), Fraction(89, 128)), "extremes 177/256, 89/128")
    ok &= _check(lines, all(bernd.dk_asymptotic_check(k) for k in range(33, 65)), "estimate chain, k = 33..64")
    ok &= _check(lines, all(bernd.zeta_even_identity_check(n) for n in (1, 2, 3)), "zeta(2n) Bernoulli identity, n = 1..3")
    with mpmath.workdps(30):
        err = abs(bernd.h_taylor(mpmath.pi / 2, 64) - (mpmath.mpf(3) / 2 * mpmath.log(2) - 1))
    lines.append(f"|h_taylor(pi/2) - (3/2 log 2 - 1)| = {float(err):.3e}")
    ok &= _check(lines, err <= 1e-10, "power series of h at pi/2")
    return lines, ok


def _section_certificate(seed):
    lines = []
    cert = msp_certify_sharded(paperfns.h, H_A, 3, 20, 64)
    verdict = msp_verify(cert, paperfns.REGISTRY)
    lines.append(f"h on [{H_A}, 3], M = 20, 64 bits: {len(cert)} points, {verdict}")
    lines.append(f"last point {fmt(cert.points[-1][0])}")
    ok = _check(lines, bool(verdict) and coverage_check(cert), "certificate verifies")
    ok &= _check(lines, abs(len(cert) - REFERENCE_STEPS) <= REFERENCE_STEPS // 10, f"point count within 10% of {REFERENCE_STEPS}")
    again = Certificate.loads(cert.dumps())
    ok &= _check(lines, again.dumps() == cert.dumps(), "byte-exact round trip")
    return lines, ok


def _section_flett(seed):
    lines = []
    z = paperfns.flett_first_zero()
    lines.append(f"first zero in [{fmt(z.lo)}, {fmt(z.hi)}]")
    ok = _check(lines, z.lo >= Fraction(48418454, 10**6) - Fraction(1, 10**5) and z.hi <= Fraction(48418454, 10**6) + Fraction(1, 10**5), "zero at 48.418454")
    slope = round_dir(Fraction(33, 20), 16, "up")
    cert = msp_certify_sharded(paperfns.flett, Fraction(1, 1024), 48, slope, 53)
    verdict = msp_verify(cert, paperfns.REGISTRY)
    lines.append(f"F on [1/1024, 48], M = {fmt(slope)}: {len(cert)} points, {verdict}")
    ok &= _check(lines, bool(verdict), "F > 0 certificate")
    return lines, ok


def _section_scan(seed):
    lines, ok = scan_lines(R_GRID + [Fraction(1)], PHI_GRID)
    lines.append(f"{'PASS' if ok else 'FAIL'} U(r, phi) > U(r, 0)")
    series_ok = all(
        paperfns.main_inequality_holds(r, phi) for r in R_GRID for phi in PHI_GRID
    )
    ok &= _check(lines, series_ok, "series inequality with tail bounds, r < 1")
    d = harmonic.strict_gap_D(0.5, 2.0, 0.3, 0.1)
    lines.append(f"strict gap D = {fmt(d)}")
    ok &= _check(lines, d > 0, "strict gap D > 0")
    return lines, ok


def _section_poisson(seed):
    lines = []
    phis = np.linspace(-3.0, 3.0, 20)
    worst = 0.0
    for r in (0.5, 8 / 9, 0.883):
        err = max(abs(harmonic.U_poisson(r, p, 4096) - float(harmonic.U_direct(r, p))) for p in phis)
        worst = max(worst, err)
    lines.append(f"max |U_poisson - U_direct| = {worst:.3e}")
    return lines, _check(lines, worst <= 1e-6, "Poisson representation")


def _section_rearrangement(seed):
    lines = []
    grid = harmonic.CircleGrid((0, 0, 1, 2, 1, 0), (2, 2, 1, 0, 1, 2))
    ok = _check(lines, harmonic.rearrangement_exhaustive(grid) == 0, "all 720 permutations, N = 6")
    bad = harmonic.rearrangement_random_trials(64, 10_000, seed)
    lines.append(f"seed {seed}: {bad} violations in 10000 trials")
    ok &= _check(lines, bad == 0, "random trials, N = 64")
    return lines, ok


SECTIONS: list[tuple[str, Callable]] = [
    ("lemmas", _section_lemmas),
    ("dk", _section_dk),
    ("certificate", _section_certificate),
    ("flett", _section_flett),
    ("scan", _section_scan),
    ("poisson", _section_poisson),
    ("rearrangement", _section_rearrangement),
]


def report_bundle(seed: int = 0) -> tuple[str, bool]:
    """Run every reproduction section; failures are collected, not fatal."""
    out = []
    all_ok = True
    for name, section in SECTIONS:
        out.append(f"== {name} ==")
        try:
            lines, ok = section(seed)
        except Exception as exc:  # a crashing section is reported as a failure
            lines, ok = [f"error: {type(exc).__name__}: {exc}"], False
        out.extend(lines)
        out.append("PASS" if ok else "FAIL")
        all_ok &= ok
    out.append(f"== summary ==\n{'PASS' if all_ok else 'FAIL'}")
    return "\n".join(out) + "\n", all_ok


def cmd_report(args, out) -> int:
    text, ok = report_bundle(args.seed)
    out.write(text)
    return 0 if ok else 1


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mspkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="generate an MSP certificate")
    p.add_argument("--fn", required=True)
    p.add_argument("--a", required=True, type=_rational)
    p.add_argument("--b", required=True, type=_rational)
    p.add_argument("--slope", required=True, type=_rational)
    p.add_argument("--prec", type=int, default=64)
    p.add_argument("--fraction", type=_rational, default=Fraction(1))
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="replay a certificate file")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dk", help="table of Taylor coefficients d_k")
    p.add_argument("--max", type=int, default=32)
    p.set_defaults(func=cmd_dk)

    p = sub.add_parser("lemmas", help="check the three lemmas")
    p.add_argument("--prec", type=int, default=64)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("poisson", help="compare U from the Poisson integral and the closed form")
    p.add_argument("--r", required=True, type=_rational)
    p.add_argument("--phi", required=True, type=_rational)
    p.add_argument("--quad", type=int, default=4096)
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("scan", help="scan U(r, phi) > U(r, 0) over a grid")
    p.add_argument("--r-grid", required=True, type=_grid)
    p.add_argument("--phi-grid", required=True, type=_grid)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("report", help="run the full reproduction bundle")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_report)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "prec", 64) < 16:
        print("error: --prec must be at least 16", file=out)
        return 2
    return args.func(args, out)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
