"""Brute-force irrationality measure functions.

``psi(t)`` is the minimum of ``||q alpha||`` over ``1 <= q <= t``;
``psi2(t)`` is the minimum of ``|q alpha - p|`` over all pairs except the
convergents ``(p_n, q_n)``, ``n >= 0``.  Scanning ``q`` directly gives an
oracle for the Lagrange constant and the second-best constant that is
independent of the continued-fraction formulas in :mod:`secondbest.kappa`.

The scan uses fixed-point integers: ``A = floor(alpha * 10**P)``, so
``q*alpha*10**P`` lies in ``[q*A, q*A + q)``.  Whenever two candidates are
closer than that error allows, the decision is redone in exact arithmetic,
so the set of breakpoints is exact; reported values are truncated to ``P``
decimal digits.
"""
from __future__ import annotations

import csv
import math
import re
from bisect import bisect_right
from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from typing import Iterable, TextIO

from .cf import CFExpansion, expand, iter_convergents, value
from .exactnum import QuadSurd

__all__ = [
    "RealInput",
    "MeasureSample",
    "LiminfEstimate",
    "PrecisionInsufficient",
    "required_precision",
    "breakpoints",
    "psi",
    "psi2",
    "liminf_estimate",
    "write_breakpoints_csv",
]

_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")

KINDS = {"best": "best", "lagrange": "best", "second-best": "second-best", "second_best": "second-best"}


class PrecisionInsufficient(ValueError):
    pass


def required_precision(t_max: int) -> int:
    """Decimal digits needed for a scan to ``t_max``: ``2*log10(t_max) + 10``."""
    return math.ceil(2 * math.log10(max(t_max, 1))) + 10


@dataclass(frozen=True)
class RealInput:
    """A real number to scan: a surd, an expansion, or a decimal string.

    Decimal strings are read as the exact rational they denote.  ``precision``
    defaults to the minimum required by each scan.
    """

    source: object
    precision: int | None = None

    @cached_property
    def exact(self) -> QuadSurd:
        src = self.source
        if isinstance(src, QuadSurd):
            return src
        if isinstance(src, CFExpansion):
            return value(src)
        if isinstance(src, str):
            if not _DECIMAL_RE.match(src):
                raise ValueError(f"not a decimal literal: {src!r}")
            return QuadSurd.from_rational(Fraction(src.strip()))
        if isinstance(src, (int, Fraction)):
            return QuadSurd.from_rational(src)
        raise TypeError(f"unsupported real input {type(src).__name__}")

    @cached_property
    def expansion(self) -> CFExpansion:
        if isinstance(self.source, CFExpansion):
            return self.source
        return expand(self.exact)

    def convergent_pairs(self, t_max: int) -> set[tuple[int, int]]:
        """All convergent pairs ``(p_n, q_n)`` with ``q_n <= t_max``."""
        pairs = set()
        for c in iter_convergents(self.expansion):
            if c.q > t_max:
                break
            pairs.add((c.p, c.q))
        return pairs

    def working_precision(self, t_max: int) -> int:
        need = required_precision(t_max)
        if self.precision is None:
            return need
        if self.precision < need:
            raise PrecisionInsufficient(
                f"precision {self.precision} < {need} digits required for t_max={t_max}"
            )
        return self.precision


def _as_input(alpha) -> RealInput:
    return alpha if isinstance(alpha, RealInput) else RealInput(alpha)


@dataclass(frozen=True)
class MeasureSample:
    t: int
    value: Decimal
    q: int
    p: int
    kind: str

    def to_json(self) -> dict:
        return {"t": self.t, "value": str(self.value), "q": self.q, "p": self.p, "kind": self.kind}


@dataclass(frozen=True)
class LiminfEstimate:
    kind: str
    estimate: Decimal
    t: int
    q: int
    p: int
    window: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "estimate": str(self.estimate),
            "t": self.t,
            "q": self.q,
            "p": self.p,
            "window": list(self.window),
        }


class _Scanner:
    def __init__(self, alpha: RealInput, t_max: int, kind: str):
        self.alpha = alpha.exact
        self.kind = kind
        self.P = alpha.working_precision(t_max)
        self.S = 10**self.P
        self.A = self.alpha.scaled_floor(self.S)
        self.excluded = alpha.convergent_pairs(t_max) if kind == "second-best" else set()
        self.excluded_q = {q for _, q in self.excluded}

    def exact_dist(self, q, p) -> QuadSurd:
        return abs(q * self.alpha - p)

    def pick(self, cands, q):
        # cands: [(approx scaled distance, p)] admissible; returns the minimal one
        cands.sort()
        best_d, best_p = cands[0]
        tol = 2 * q + 2
        close = [(d, p) for d, p in cands if d - best_d <= tol]
        if len(close) > 1:
            # smallest exact distance, then smallest |p|
            _, _, best_p = min((self.exact_dist(q, p), abs(p), p) for _, p in close)
            best_d = next(d for d, p in close if p == best_p)
        return best_d, best_p

    def scan(self, t_max: int) -> list[MeasureSample]:
        S, A = self.S, self.A
        second = self.kind == "second-best"
        out: list[tuple[int, int]] = []
        best_d = None
        best_q = best_p = 0
        X = 0
        for q in range(1, t_max + 1):
            X += A
            f, r = divmod(X, S)
            if second and q in self.excluded_q:
                cands = [
                    (abs(X - p * S), p)
                    for p in range(f - 1, f + 4)
                    if (p, q) not in self.excluded
                ]
                d, p = self.pick(cands, q)
            elif 2 * r < S - 2 * q:
                d, p = r, f
            elif 2 * r > S + 2 * q:
                d, p = S - r, f + 1
            else:
                d, p = self.pick([(r, f), (S - r, f + 1)], q)
            if best_d is None or d < best_d - 2 * (q + best_q) - 2:
                take = True
            elif d > best_d + 2 * (q + best_q) + 2:
                take = False
            else:
                take = self.exact_dist(q, p).compare(self.exact_dist(best_q, best_p)) < 0
            if take:
                best_d, best_q, best_p = d, q, p
                out.append((q, p))
        return [
            MeasureSample(q, self.to_decimal(self.exact_dist(q, p)), q, p, self.kind) for q, p in out
        ]

    def to_decimal(self, x: QuadSurd) -> Decimal:
        n = x.scaled_floor(self.S)
        return Decimal(n).scaleb(-self.P, Context(prec=len(str(n)) + 1))


def breakpoints(alpha, t_max: int, kind: str = "best") -> list[MeasureSample]:
    """Every ``t <= t_max`` where the chosen measure function strictly decreases.

    The first entry is ``t = 1``.  Each sample's ``t`` equals its ``q``.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    kind = KINDS[kind]
    return _Scanner(_as_input(alpha), t_max, kind).scan(t_max)


def _value_at(samples: list[MeasureSample], t: int) -> MeasureSample:
    # samples are sorted by t and samples[0].t == 1
    return samples[bisect_right(samples, t, key=lambda s: s.t) - 1]


def psi(alpha, t: int) -> MeasureSample:
    """``min ||q alpha||`` over ``1 <= q <= t``; ties go to the smallest ``q``."""
    s = _value_at(breakpoints(alpha, t, "best"), t)
    return MeasureSample(t, s.value, s.q, s.p, s.kind)


def psi2(alpha, t: int) -> MeasureSample:
    """``min |q alpha - p|`` over ``1 <= q <= t`` excluding every convergent pair."""
    s = _value_at(breakpoints(alpha, t, "second-best"), t)
    return MeasureSample(t, s.value, s.q, s.p, s.kind)


def liminf_estimate(alpha, t_max: int, kind: str = "lagrange") -> LiminfEstimate:
    """Numeric estimate of ``liminf t * psi(t)`` from the window ``[t_max/10, t_max]``.

    ``t * psi(t)`` is minimised on each constant piece at its left end, so the
    candidates are the breakpoints inside the window plus the window start.
    The result overestimates the liminf and converges for eventually periodic
    inputs.
    """
    if t_max < 100:
        raise ValueError("t_max must be >= 100")
    kind = KINDS[kind]
    samples = breakpoints(alpha, t_max, kind)
    lo = -(-t_max // 10)
    start = _value_at(samples, lo)
    cands = [(lo, start)] + [(s.t, s) for s in samples if lo < s.t <= t_max]
    P = _as_input(alpha).working_precision(t_max)
    with localcontext() as ctx:
        ctx.prec = P + 10
        estimate, t, s = min(((t * s.value, t, s) for t, s in cands), key=lambda e: (e[0], e[1]))
    label = "lagrange" if kind == "best" else kind
    return LiminfEstimate(label, estimate, t, s.q, s.p, (lo, t_max))


def write_breakpoints_csv(samples: Iterable[MeasureSample], fh: TextIO) -> None:
    writer = csv.writer(fh)
    writer.writerow(["t", "value", "q", "p", "kind", "t_times_value"])
    for s in samples:
        writer.writerow([s.t, s.value, s.q, s.p, s.kind, s.t * s.value])
