"""Maximal-slope-principle certificates: generation and independent replay.

If ``|f'| <= M`` on ``[x, t]`` and ``f(t) >= l > 0`` then ``f > 0`` on
``(t - l/M, t]``.  A certificate is a descending list of dyadic points
``b = t_1 > ... > t_m >= a`` whose windows chain together down past ``a``.
The verifier trusts nothing recorded in the certificate except the points:
it re-evaluates every lower bound and redoes the chain arithmetic exactly.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .rigor import Dyadic, Interval, check_precision, parse_dyadic, round_dir, to_fraction

__all__ = [
    "RigorFn",
    "SlopeBound",
    "Certificate",
    "Verdict",
    "SupBound",
    "CertificationError",
    "CannotCertify",
    "StepUnderflow",
    "UnknownFunction",
    "DepthExceeded",
    "CertificateFormatError",
    "msp_certify",
    "msp_certify_sharded",
    "msp_verify",
    "coverage_check",
    "bound_sup_abs",
]

HEADER = "MSPCERT v1"


@dataclass(frozen=True)
class RigorFn:
    """A named function with an interval enclosure ``eval(x, prec)``."""

    name: str
    eval: Callable[[Interval, int], Interval]

    def __call__(self, x: Interval, prec: int) -> Interval:
        return self.eval(x, prec)


class CertificationError(Exception):
    pass


class CannotCertify(CertificationError):
    """The lower bound of ``f`` at ``point`` is not positive."""

    def __init__(self, point: Dyadic, enclosure: Optional[Interval] = None, subinterval=None):
        self.point = point
        self.enclosure = enclosure
        self.subinterval = subinterval
        msg = f"cannot certify at t = {point} (~{float(point):.12g})"
        if enclosure is not None:
            msg += f": f(t) in {enclosure}"
        if subinterval is not None:
            msg += f" in shard [{subinterval[0]}, {subinterval[1]}]"
        super().__init__(msg)


class StepUnderflow(CannotCertify):
    """The MSP step became smaller than the working resolution."""


class UnknownFunction(KeyError):
    pass


class DepthExceeded(CertificationError):
    def __init__(self, subinterval: tuple[Dyadic, Dyadic]):
        self.subinterval = subinterval
        super().__init__(
            f"undecided at maximum depth on [{subinterval[0]}, {subinterval[1]}]"
        )


class CertificateFormatError(ValueError):
    pass


class SlopeBound:
    """Either a constant bound ``M`` or a table of ``(lo, hi, M_i)`` rows."""

    def __init__(self, const=None, table: Optional[Sequence[tuple]] = None):
        if (const is None) == (table is None):
            raise ValueError("give exactly one of const or table")
        if const is not None:
            self.const: Optional[Dyadic] = Dyadic.coerce(const)
            self.table: Optional[tuple[tuple[Dyadic, Dyadic, Dyadic], ...]] = None
            if self.const.mantissa <= 0:
                raise ValueError("slope bound must be positive")
        else:
            rows = tuple(
                (Dyadic.coerce(lo), Dyadic.coerce(hi), Dyadic.coerce(m)) for lo, hi, m in table
            )
            if not rows:
                raise ValueError("empty slope table")
            for lo, hi, m in rows:
                if not lo < hi:
                    raise ValueError(f"bad slope row [{lo}, {hi}]")
                if m.mantissa <= 0:
                    raise ValueError("slope bounds must be positive")
            rows = tuple(sorted(rows, key=lambda r: r[0].to_fraction()))
            for (_, hi, _), (lo, _, _) in zip(rows, rows[1:]):
                if lo > hi:
                    raise ValueError(f"gap in slope table between {hi} and {lo}")
            self.const = None
            self.table = rows

    @classmethod
    def coerce(cls, value) -> "SlopeBound":
        if isinstance(value, SlopeBound):
            return value
        return cls(const=value)

    def covers(self, a: Dyadic, b: Dyadic) -> bool:
        if self.table is None:
            return True
        return self.table[0][0] <= a and self.table[-1][1] >= b

    def over(self, lo: Dyadic, hi: Dyadic) -> Dyadic:
        """Largest bound among rows meeting ``[lo, hi]``."""
        if self.table is None:
            return self.const
        ms = [m for rlo, rhi, m in self.table if rlo <= hi and rhi >= lo]
        if not ms:
            raise ValueError(f"slope table does not cover [{lo}, {hi}]")
        return max(ms)

    def __eq__(self, other):
        if not isinstance(other, SlopeBound):
            return NotImplemented
        return self.const == other.const and self.table == other.table

    def lines(self) -> list[str]:
        if self.table is None:
            return [f"slope: const {self.const}"]
        return [f"slope: table {len(self.table)}"] + [f"{lo} {hi} {m}" for lo, hi, m in self.table]


@dataclass
class Certificate:
    """Hint sequence for an MSP proof that ``fn_name > 0`` on ``[a, b]``."""

    fn_name: str
    a: Dyadic
    b: Dyadic
    slope: SlopeBound
    precision: int
    points: list[tuple[Dyadic, Dyadic]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def dumps(self) -> str:
        out = [HEADER, f"fn: {self.fn_name}", f"a: {self.a}", f"b: {self.b}"]
        out += self.slope.lines()
        out += [f"prec: {self.precision}", f"points: {len(self.points)}"]
        out += [f"{t} {l}" for t, l in self.points]
        return "\n".join(out) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        lines = iter(text.splitlines())

        def field_(key: str) -> str:
            line = next(lines, None)
            if line is None or not line.startswith(key + ": "):
                raise CertificateFormatError(f"expected '{key}: ...', got {line!r}")
            return line[len(key) + 2 :]

        try:
            if next(lines, None) != HEADER:
                raise CertificateFormatError(f"missing '{HEADER}' header")
            fn_name = field_("fn")
            a = parse_dyadic(field_("a"))
            b = parse_dyadic(field_("b"))
            kind, _, arg = field_("slope").partition(" ")
            if kind == "const":
                slope = SlopeBound(const=parse_dyadic(arg))
            elif kind == "table":
                rows = []
                for _ in range(int(arg)):
                    parts = next(lines).split()
                    if len(parts) != 3:
                        raise CertificateFormatError(f"bad slope row {parts!r}")
                    rows.append(tuple(parse_dyadic(p) for p in parts))
                slope = SlopeBound(table=rows)
            else:
                raise CertificateFormatError(f"unknown slope kind {kind!r}")
            precision = int(field_("prec"))
            count = int(field_("points"))
            points = []
            for _ in range(count):
                t, l = next(lines).split()
                points.append((parse_dyadic(t), parse_dyadic(l)))
        except (StopIteration, ValueError) as exc:
            if isinstance(exc, CertificateFormatError):
                raise
            raise CertificateFormatError(str(exc) or "truncated certificate") from exc
        if any(line.strip() for line in lines):
            raise CertificateFormatError("trailing data after points")
        return cls(fn_name, a, b, slope, precision, points)

    def write(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def read(cls, path) -> "Certificate":
        with open(path, encoding="ascii") as fh:
            return cls.loads(fh.read())


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str = ""
    index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        return "VALID" if self.valid else f"INVALID: {self.reason}"


def _frac(d: Dyadic) -> Fraction:
    return d.to_fraction()


def msp_certify(
    f: RigorFn,
    a,
    b,
    slope,
    prec: int = 64,
    step_fraction=Fraction(1),
) -> Certificate:
    """Greedy MSP descent from ``b`` to ``a``.

    At each point the lower end of ``f``'s enclosure is the step budget; the
    next point is ``t - step_fraction * l / M`` rounded up (toward ``t``) to a
    dyadic, so the chain condition holds exactly.
    """
    check_precision(prec)
    a, b = Dyadic.coerce(a), Dyadic.coerce(b)
    if not a < b:
        raise ValueError("need a < b")
    slope = SlopeBound.coerce(slope)
    if not slope.covers(a, b):
        raise ValueError("slope table does not cover [a, b]")
    frac = Fraction(step_fraction)
    if not 0 < frac <= 1:
        raise ValueError("step_fraction must lie in (0, 1]")
    fa = _frac(a)
    min_step = Fraction(1, 2 ** (prec + 8))

    points: list[tuple[Dyadic, Dyadic]] = []
    t = b
    while True:
        enc = f.eval(Interval(t), prec)
        ell = enc.lo
        if ell.mantissa <= 0:
            raise CannotCertify(t, enc)
        points.append((t, ell))
        ft, fl = _frac(t), _frac(ell)
        if ft - fl / _frac(slope.over(a, t)) < fa:
            break
        m = slope.over(t, t)
        while True:
            target = ft - frac * fl / _frac(m)
            lo = a if target <= fa else round_dir(target, prec + 8, "up")
            m_window = slope.over(lo, t)
            if m_window <= m:
                break
            m = m_window
        if frac * fl / _frac(m) < min_step or not lo < t:
            raise StepUnderflow(t, enc)
        t = lo
    return Certificate(f.name, a, b, slope, prec, points)


def _shard_bounds(a: Dyadic, b: Dyadic, shards: int, prec: int) -> list[Dyadic]:
    fa, fb = _frac(a), _frac(b)
    cuts = [a]
    for i in range(1, shards):
        c = round_dir(fa + (fb - fa) * i / shards, prec + 8, "down")
        if c > cuts[-1] and c < b:
            cuts.append(c)
    cuts.append(b)
    return cuts


def _certify_shard(args):
    f, lo, hi, slope, prec, frac = args
    try:
        return msp_certify(f, lo, hi, slope, prec, frac)
    except CannotCertify as exc:
        exc.subinterval = (lo, hi)
        raise


def msp_certify_sharded(
    f: RigorFn,
    a,
    b,
    slope,
    prec: int = 64,
    step_fraction=Fraction(1),
    shards: int = 1,
    n_jobs: int = 1,
) -> Certificate:
    """Certify ``[a, b]`` as ``shards`` contiguous pieces and merge the chains.

    ``n_jobs > 1`` runs shards in worker processes (``f`` must be picklable);
    the merge is ordered, so the result does not depend on scheduling.
    """
    if shards < 1:
        raise ValueError("shards must be positive")
    a, b = Dyadic.coerce(a), Dyadic.coerce(b)
    slope = SlopeBound.coerce(slope)
    if shards == 1:
        return msp_certify(f, a, b, slope, prec, step_fraction)
    cuts = _shard_bounds(a, b, shards, prec)
    jobs = [(f, lo, hi, slope, prec, step_fraction) for lo, hi in zip(cuts, cuts[1:])]
    jobs.reverse()
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=min(n_jobs, len(jobs), os.cpu_count() or 1)) as pool:
            parts = list(pool.map(_certify_shard, jobs))
    else:
        parts = [_certify_shard(job) for job in jobs]
    points: list[tuple[Dyadic, Dyadic]] = []
    for part in parts:
        for t, ell in part.points:
            if points and points[-1][0] == t:
                continue
            points.append((t, ell))
    return Certificate(f.name, a, b, slope, prec, points)


def msp_verify(cert: Certificate, registry: Optional[Mapping[str, RigorFn]] = None) -> Verdict:
    """Replay a certificate; valid only if ``f > 0`` on ``[a, b]`` follows."""
    if registry is None:
        from .paperfns import REGISTRY as registry
    try:
        f = registry[cert.fn_name]
    except KeyError:
        raise UnknownFunction(cert.fn_name) from None
    pts = cert.points
    a, b = cert.a, cert.b
    if not pts:
        return Verdict(False, "no points")
    if not a < b:
        return Verdict(False, "empty interval")
    if cert.precision < 16:
        return Verdict(False, "precision below 16 bits")
    if not cert.slope.covers(a, b):
        return Verdict(False, "slope table does not cover [a, b]")
    if pts[0][0] != b:
        return Verdict(False, "first point is not b", 0)
    fa = _frac(a)
    for k, (t, _) in enumerate(pts):
        if t < a:
            return Verdict(False, f"point {k} lies below a", k)
        if k and not t < pts[k - 1][0]:
            return Verdict(False, f"points not strictly decreasing at {k}", k)
        enc = f.eval(Interval(t), cert.precision)
        ell = enc.lo
        if ell.mantissa <= 0:
            return Verdict(False, f"non-positive bound at {k}", k)
        ft, fl = _frac(t), _frac(ell)
        if k + 1 < len(pts):
            nxt = pts[k + 1][0]
            m = _frac(cert.slope.over(nxt, t))
            if (ft - _frac(nxt)) * m > fl:
                return Verdict(False, f"gap at {k}", k)
        else:
            m = _frac(cert.slope.over(a, t))
            if not ft - fl / m < fa:
                return Verdict(False, f"last window does not reach below a at {k}", k)
    return Verdict(True)


def coverage_check(cert: Certificate) -> bool:
    """Exact check that the recorded windows ``(t_k - l_k/M_k, t_k]`` cover ``[a, b]``."""
    pts = cert.points
    if not pts or pts[0][0] != cert.b:
        return False
    fa = _frac(cert.a)
    reach = None
    for k, (t, ell) in enumerate(pts):
        ft = _frac(t)
        if reach is not None and ft < reach:
            return False
        lo = pts[k + 1][0] if k + 1 < len(pts) else cert.a
        m = _frac(cert.slope.over(lo, t))
        if ell.mantissa <= 0:
            return False
        window_lo = ft - _frac(ell) / m
        if k + 1 < len(pts):
            if window_lo > _frac(pts[k + 1][0]):
                return False
        reach = window_lo
    return reach < fa


@dataclass(frozen=True)
class SupBound:
    proved: bool
    witness: Optional[Interval] = None
    boxes: int = 0

    def __bool__(self) -> bool:
        return self.proved


def bound_sup_abs(
    f: RigorFn,
    a,
    b,
    threshold,
    prec: int = 64,
    max_depth: int = 40,
) -> SupBound:
    """Prove ``|f| < threshold`` on ``[a, b]`` by adaptive bisection.

    Returns a failed bound with a witness when some subinterval provably has
    ``|f| >= threshold``; raises :class:`DepthExceeded` if undecided.
    Non-dyadic endpoints are widened outward, which only strengthens a proof.
    """
    a, b = round_dir(to_fraction(a), prec, "down"), round_dir(to_fraction(b), prec, "up")
    if not a < b:
        raise ValueError("need a < b")
    thr = to_fraction(threshold)
    if thr <= 0:
        raise ValueError("threshold must be positive")
    stack = [(a, b, 0)]
    boxes = 0
    while stack:
        lo, hi, depth = stack.pop()
        boxes += 1
        x = Interval(lo, hi)
        enc = f.eval(x, prec)
        elo, ehi = _frac(enc.lo), _frac(enc.hi)
        if -thr < elo and ehi < thr:
            continue
        if elo >= thr or ehi <= -thr:
            return SupBound(False, x, boxes)
        for end in (lo, hi):
            v = f.eval(Interval(end), prec)
            if _frac(v.lo) >= thr or _frac(v.hi) <= -thr:
                return SupBound(False, Interval(end), boxes)
        if depth >= max_depth:
            raise DepthExceeded((lo, hi))
        mid = (lo + hi).ldexp(-1)
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return SupBound(True, None, boxes)
