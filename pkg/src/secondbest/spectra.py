"""Where 164/(13*sqrt(173)) sits in the spectrum of second-best constants.

This module holds the case bounds that separate the third element from
everything below it, a classifier that assigns each periodic expansion to
the case bounding it, an exhaustive audit over short periods, and a
self-checking report tying it together.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from decimal import Context, Decimal
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator, Sequence

from .cf import CFExpansion, canonical_rotation, expand, minimal_period, parse_cf, value
from .exactnum import QuadSurd, compare_mixed, parse_surd, sqrt
from .kappa import GOLDEN_K, k_exact, k_squared, kappa_limits, min_kappa_coefficient

__all__ = [
    "THIRD_ELEMENT",
    "SQRT17_K",
    "ALPHA0",
    "ALPHA0_CF",
    "CaseBound",
    "ClassificationResult",
    "ReportItem",
    "VerificationReport",
    "AuditReport",
    "MalformedPeriod",
    "VerificationFailed",
    "proposition1_table",
    "subcase_bound",
    "subcase_bounds",
    "classify",
    "theorem2_report",
    "lyndon_words",
    "audit_periods",
    "isolation_margin",
]

THIRD_ELEMENT = 164 / (13 * sqrt(173))
SQRT17_K = 4 / sqrt(17)
ALPHA0 = parse_surd("(13*sqrt(173)+39)/82")
ALPHA0_CF = parse_cf("2;(1,1,3,1,1,1,1,3)")

BLOCK_A = (1, 1, 3)
BLOCK_B = (1, 1, 1, 1, 3)

BOUNDED_CASES = ("1", "2", "3", "4.1", "4.2", "4.3.1", "4.3.2", "4.3.3", "4.3.4")
ESCAPES = ("golden-class", "sqrt17-class", "alpha0-class")


class MalformedPeriod(ValueError):
    pass


class VerificationFailed(AssertionError):
    def __init__(self, item):
        super().__init__(f"{item.key}: {item.title}: {item.detail}")
        self.item = item


def _cmp(x, y) -> int:
    return compare_mixed(x, y)


@dataclass(frozen=True)
class CaseBound:
    case_id: str
    trigger: str
    bound: QuadSurd
    # the two expansions whose sum the bound is 4 divided by (subcases only)
    tails: tuple[CFExpansion, CFExpansion] | None = None

    @property
    def decimal(self) -> str:
        return self.bound.to_decimal(6)

    def to_json(self) -> dict:
        out = {
            "case": self.case_id,
            "trigger": self.trigger,
            "bound": str(self.bound),
            "decimal": self.decimal,
        }
        if self.tails:
            out["tails"] = [str(t) for t in self.tails]
        return out


_TABLE = (
    ("1", "infinitely many a_n >= 5", "4/5"),
    ("2", "almost all a_n <= 4, infinitely many a_n = 4", "4/(3+sqrt(2))"),
    ("3", "almost all a_n <= 4, infinitely many a_n = 2", "sqrt(2)-1/2"),
    ("4.1", "infinitely many patterns 3 3", "39/43"),
    ("4.2", "infinitely many patterns 3 1 3", "136/145"),
    ("4.3", "infinitely many patterns 1 1 3 1 1 1", "180/187"),
)

# (trigger with the distinguished 3 bracketed, backward tail, forward tail)
_SUBCASES = {
    "4.3.1": ("1 1 [3] 1 1 1 1 1", "0;1,1,(3,1)", "3;1,1,1,1,1,(1,3)"),
    "4.3.2": ("1 1 [3] 1 1 1 3", "0;1,1,(3,1)", "3;1,1,1,3,1,1,(3,1)"),
    "4.3.3": ("ABB: 1 1 3 1 1 1 1 [3] 1 1 1 1 3 1 1", "0;1,1,1,1,3,1,1,(1,3)", "3;1,1,1,1,3,1,1,(1,3)"),
    "4.3.4": ("AAB: 1 1 3 1 1 1 1 [3] 1 1 3 1 1 3 1 1", "0;1,1,1,1,3,1,1,(1,3)", "3;1,1,3,1,1,3,1,1,(3,1)"),
}


def proposition1_table() -> list[CaseBound]:
    """The six stored case bounds, in table order."""
    return [CaseBound(cid, trig, parse_surd(b)) for cid, trig, b in _TABLE]


def subcase_bound(case_id: str) -> CaseBound:
    """``4 / (backward + forward)`` for one of the four refinements of case 4.3."""
    try:
        trigger, back, fwd = _SUBCASES[case_id]
    except KeyError:
        raise ValueError(f"unknown subcase {case_id!r}") from None
    back_cf, fwd_cf = parse_cf(back), parse_cf(fwd)
    bound = 4 / (value(back_cf) + value(fwd_cf))
    return CaseBound(case_id, trigger, bound, (back_cf, fwd_cf))


def subcase_bounds() -> list[CaseBound]:
    return [subcase_bound(c) for c in _SUBCASES]


def _all_bounds() -> dict[str, CaseBound]:
    out = {b.case_id: b for b in proposition1_table()}
    out.update({b.case_id: b for b in subcase_bounds()})
    return out


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str
    period: tuple[int, ...]
    witness: str
    position: int | None = None

    @property
    def bounded(self) -> bool:
        return self.verdict not in ESCAPES

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "period": list(self.period),
            "witness": self.witness,
            "position": self.position,
        }


def _classify_canonical(w: tuple[int, ...]) -> ClassificationResult:
    top = max(w)
    if top >= 5:
        i = next(i for i, a in enumerate(w) if a >= 5)
        return ClassificationResult("1", w, f"a_n = {w[i]}", i)
    if top == 4:
        return ClassificationResult("2", w, "a_n = 4", w.index(4))
    if 2 in w:
        return ClassificationResult("3", w, "a_n = 2", w.index(2))
    if top == 1:
        return ClassificationResult("golden-class", w, "period (1)")
    L = len(w)
    threes = [i for i, a in enumerate(w) if a == 3]
    # runs[k]: number of 1s following the 3 at threes[k], read cyclically
    runs = [(threes[(k + 1) % len(threes)] - i - 1) % L for k, i in enumerate(threes)]
    for want, case, label in ((0, "4.1", "3 3"), (1, "4.2", "3 1 3"), (3, "4.3.2", "3 1 1 1 3")):
        if want in runs:
            return ClassificationResult(case, w, label, threes[runs.index(want)])
    for k, run in enumerate(runs):
        if run >= 5:
            return ClassificationResult("4.3.1", w, f"3 followed by {run} ones", threes[k])
    # every run is 2 or 4: the cyclic word is a product of blocks A and B,
    # block k ending at threes[k]
    blocks = "".join("A" if run == 2 else "B" for run in runs)
    # block k starts right after threes[k-1], so rotate to read in order
    blocks = blocks[-1:] + blocks[:-1]
    if set(blocks) == {"A"}:
        return ClassificationResult("sqrt17-class", w, "period A")
    n = len(blocks)
    cyc = blocks * 3
    if "BB" in cyc:
        # the 3 closing the first B
        k = cyc.index("BB")
        return ClassificationResult("4.3.3", w, "blocks B B", threes[k % n])
    if "AA" in cyc:
        # the 3 closing a B that is followed by A A
        k = cyc.index("BAA")
        return ClassificationResult("4.3.4", w, "blocks B A A", threes[k % n])
    return ClassificationResult("alpha0-class", w, "period A B")


def classify(cf: CFExpansion | Sequence[int]) -> ClassificationResult:
    """Assign a periodic expansion to the case that bounds its constant.

    Precedence: a digit >= 5, then a 4, then a 2; with digits in {1, 3} only,
    the cyclic runs of 1s between consecutive 3s decide (0, 1, 3, then >= 5),
    and if every run is 2 or 4 the period is a word in A = (1,1,3) and
    B = (1,1,1,1,3).  The result depends only on the rotation class.
    """
    period = cf.period if isinstance(cf, CFExpansion) else tuple(cf)
    if not period:
        raise MalformedPeriod("empty period")
    if any(int(a) < 1 for a in period):
        raise MalformedPeriod(f"period digits must be >= 1: {period}")
    return _classify_canonical(canonical_rotation(minimal_period(tuple(int(a) for a in period))))


# report


@dataclass(frozen=True)
class ReportItem:
    key: str
    title: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class VerificationReport:
    items: tuple[ReportItem, ...]

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def to_text(self) -> str:
        lines = [f"{'PASS' if i.passed else 'FAIL'}  ({i.key}) {i.title}: {i.detail}" for i in self.items]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"passed": self.passed, "items": [i.to_json() for i in self.items]}


def _decimal_floor(x: QuadSurd, digits: int) -> int:
    return x.scaled_floor(10**digits)


def isolation_margin(digits: int = 6) -> tuple[str, str]:
    """``(maximizer case, certified lower bound on the gap)`` below the third element.

    The gap is ``THIRD_ELEMENT - max(bound)`` over every case bound except
    4.3 itself, which its four subcases replace.  The bounds live in
    different quadratic fields, so the gap is bracketed with truncated
    decimals rather than represented exactly.
    """
    bounds = [b for cid, b in _all_bounds().items() if cid != "4.3"]
    top = max(bounds, key=cmp_to_key(lambda a, b: _cmp(a.bound, b.bound)))
    g = 30
    lower = _decimal_floor(THIRD_ELEMENT, g) - (_decimal_floor(top.bound, g) + 1)
    gap = Decimal(lower).scaleb(-g, Context(prec=g + 2))
    return top.case_id, f"{gap:.{digits}f}" if lower >= 0 else str(gap)


def theorem2_report(strict: bool = False) -> VerificationReport:
    """Exact checks that 164/(13*sqrt(173)) is the third, isolated element.

    With ``strict=True`` the first failing item raises :class:`VerificationFailed`.
    """
    items: list[ReportItem] = []

    def check(key, title, ok, detail):
        item = ReportItem(key, title, bool(ok), detail)
        items.append(item)
        if strict and not item.passed:
            raise VerificationFailed(item)

    T = THIRD_ELEMENT
    cf = expand(ALPHA0)
    check("a0", "expansion of (13*sqrt(173)+39)/82", cf == ALPHA0_CF, str(cf))

    prof = k_exact(ALPHA0_CF)
    check(
        "a",
        "k(alpha0) = 164/(13*sqrt(173))",
        prof.k_value == T and prof.k_value.to_decimal(6) == "0.959129",
        f"{prof.k_value} = {prof.k_value.to_decimal(6)}",
    )
    check(
        "a1",
        "k(alpha0) attained only by kappa4",
        {name for _, name in prof.minimizers()} == {"kappa4"},
        ", ".join(f"r={r}:{n}" for r, n in prof.minimizers()),
    )

    base = 13 * sqrt(173)
    expected = {3: (167, 169, 164), 0: (169, 167, 164)}
    for residue, nums in expected.items():
        lim = kappa_limits(ALPHA0_CF, residue)
        want = tuple(Fraction(n) / base for n in nums)
        check(
            f"b{residue}",
            f"kappa limits along n = {residue} mod 8",
            tuple(lim) == want and lim.kappa4 < lim.kappa1 and lim.kappa4 < lim.kappa2,
            " / ".join(f"{v} = {v.to_decimal(6)}" for v in lim),
        )

    check(
        "t1",
        "4/sqrt(5) > 4/sqrt(17) > 164/(13*sqrt(173))",
        _cmp(GOLDEN_K, SQRT17_K) > 0 and _cmp(SQRT17_K, T) > 0,
        f"{GOLDEN_K.to_decimal(6)} > {SQRT17_K.to_decimal(6)} > {T.to_decimal(6)}",
    )
    check(
        "t1b",
        "k of the golden and sqrt(17) classes",
        k_exact(parse_cf("1;(1)")).k_value == GOLDEN_K and k_exact(parse_cf("2;(1,1,3)")).k_value == SQRT17_K,
        f"{GOLDEN_K}, {SQRT17_K}",
    )

    for b in proposition1_table():
        s = _cmp(b.bound, T)
        if b.case_id == "4.3":
            check("c4.3", "case 4.3 bound exceeds the third element (refined below)", s > 0,
                  f"{b.bound} = {b.decimal} > {T.to_decimal(6)}")
        else:
            check(f"c{b.case_id}", f"case {b.case_id} bound below the third element", s < 0,
                  f"{b.bound} = {b.decimal} < {T.to_decimal(6)}")
    for b in subcase_bounds():
        check(f"c{b.case_id}", f"subcase {b.case_id} bound below the third element", _cmp(b.bound, T) < 0,
              f"4/({b.tails[0]} + {b.tails[1]}) = {b.decimal} < {T.to_decimal(6)}")

    maximizer, gap = isolation_margin()
    check("d", "isolation margin positive, maximizer 4.3.4", maximizer == "4.3.4" and not gap.startswith("-"),
          f"margin >= {gap} (maximizer {maximizer})")
    return VerificationReport(tuple(items))


# exhaustive audit


def lyndon_words(max_len: int, max_digit: int) -> Iterator[tuple[int, ...]]:
    """Lyndon words over ``1..max_digit`` of length up to ``max_len``, in lexicographic order.

    These are exactly the primitive periods taken once per rotation class,
    each in its least rotation.
    """
    w = [0]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == max_digit:
            w.pop()


@dataclass
class AuditReport:
    max_len: int
    max_digit: int
    total: int = 0
    verdicts: Counter = field(default_factory=Counter)
    escapes: list[tuple[tuple[int, ...], str]] = field(default_factory=list)
    failures: list[tuple[tuple[int, ...], str]] = field(default_factory=list)
    closest: tuple[int, ...] | None = None
    closest_k_squared: Fraction | None = None

    @property
    def passed(self) -> bool:
        return not self.failures and all(v in BOUNDED_CASES + ESCAPES for v in self.verdicts)

    def closest_decimal(self, digits=9) -> str | None:
        if self.closest_k_squared is None:
            return None
        k2 = self.closest_k_squared
        return sqrt(k2).to_decimal(digits)

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "max_digit": self.max_digit,
            "total": self.total,
            "passed": self.passed,
            "verdicts": dict(sorted(self.verdicts.items())),
            "escapes": [{"period": list(p), "verdict": v} for p, v in self.escapes],
            "failures": [{"period": list(p), "reason": r} for p, r in self.failures],
            "closest_bounded": None
            if self.closest is None
            else {"period": list(self.closest), "k": self.closest_decimal()},
        }

    def to_text(self) -> str:
        lines = [f"periods over 1..{self.max_digit} up to length {self.max_len}: {self.total} rotation classes"]
        for v, n in sorted(self.verdicts.items()):
            lines.append(f"  {v:>13}: {n}")
        for p, v in self.escapes:
            lines.append(f"  escape {v}: ({','.join(map(str, p))})")
        if self.closest is not None:
            lines.append(
                f"  largest bounded k: {self.closest_decimal()} at ({','.join(map(str, self.closest))})"
            )
        for p, r in self.failures:
            lines.append(f"  FAIL ({','.join(map(str, p))}): {r}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


_ESCAPE_K = {
    "golden-class": (GOLDEN_K, (1,)),
    "sqrt17-class": (SQRT17_K, BLOCK_A),
    "alpha0-class": (THIRD_ELEMENT, BLOCK_A + BLOCK_B),
}


def audit_periods(max_len: int, max_digit: int = 6) -> AuditReport:
    """Classify every period up to ``max_len`` and check each bounded one exactly.

    For a bounded verdict the exact constant of the period must lie strictly
    below 164/(13*sqrt(173)); the case bound for that verdict must too.  The
    three escape classes must be the single rotation classes of (1),
    (1,1,3) and (1,1,3,1,1,1,1,3).  Comparisons use ``k**2``, which is
    rational for a periodic expansion.
    """
    if not 1 <= max_len <= 16:
        raise ValueError("max_len must be between 1 and 16")
    # k < T  iff  N^2 * T2_den < T2_num * M^2 * D, with T^2 = T2_num / T2_den
    T2 = THIRD_ELEMENT * THIRD_ELEMENT
    T2_num, T2_den = T2.p, T2.r
    bounds = _all_bounds()
    bound_ok = {cid: _cmp(bounds[cid].bound, THIRD_ELEMENT) < 0 for cid in BOUNDED_CASES}
    rep = AuditReport(max_len, max_digit)
    verdicts = rep.verdicts
    best = None  # (N^2, M^2 D) of the largest bounded k so far
    for w in lyndon_words(max_len, max_digit):
        res = _classify_canonical(w)
        verdicts[res.verdict] += 1
        if res.verdict in ESCAPES:
            want_k, want_w = _ESCAPE_K[res.verdict]
            rep.escapes.append((w, res.verdict))
            if w != canonical_rotation(want_w) or sqrt(k_squared(w)) != want_k:
                rep.failures.append((w, f"unexpected {res.verdict}"))
            continue
        if not bound_ok[res.verdict]:
            rep.failures.append((w, f"case {res.verdict} bound not below the third element"))
        n, m, D = min_kappa_coefficient(w)
        num, den = n * n, m * m * D
        if num * T2_den >= T2_num * den:
            rep.failures.append((w, f"k^2 = {Fraction(num, den)} not below {T2}"))
        elif best is None or num * best[1] > best[0] * den:
            best = (num, den)
            rep.closest = w
    rep.total = sum(verdicts.values())
    if best is not None:
        rep.closest_k_squared = Fraction(*best)
    return rep


def report_json(report) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True)
