"""Continued fractions of quadratic irrationals.

An eventually periodic expansion ``[a0; b1, ..., bm, (c1, ..., cL)]`` is held
by :class:`CFExpansion`.  Digits are indexed as in the usual notation:
``a_0`` is the integer part, ``a_1`` the first partial quotient, and so on.
The tails ``alpha_n = [a_n; a_{n+1}, ...]`` and
``alpha_star_n = [0; a_n, a_{n-1}, ..., a_1]`` are only defined for ``n >= 1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .exactnum import QuadSurd

__all__ = [
    "CFExpansion",
    "Convergent",
    "TailPair",
    "PerronResult",
    "CFParseError",
    "parse_cf",
    "StepLimitExceeded",
    "IdentityViolated",
    "IndexOutOfRange",
    "expand",
    "value",
    "periodic_value",
    "convergents",
    "iter_convergents",
    "shift",
    "tails",
    "limit_tails",
    "perron_check",
    "equivalent",
    "minimal_period",
    "canonical_rotation",
    "is_rotation",
    "period_position",
    "residue_of_position",
]


class CFParseError(ValueError):
    pass


class StepLimitExceeded(RuntimeError):
    """No repeated complete quotient was found within ``max_steps``."""


class IdentityViolated(AssertionError):
    """An exact identity failed; this means an arithmetic bug."""


class IndexOutOfRange(IndexError):
    pass


def minimal_period(word: Sequence[int]) -> tuple[int, ...]:
    """Shortest ``u`` with ``word == u * k``."""
    word = tuple(word)
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and word[:k] * (n // k) == word:
            return word[:k]
    return word


def canonical_rotation(word: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation (used as a necklace representative)."""
    word = tuple(word)
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def is_rotation(u: Sequence[int], v: Sequence[int]) -> bool:
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        return False
    doubled = u + u
    return any(doubled[i : i + len(v)] == v for i in range(len(u) or 1))


@dataclass(frozen=True)
class CFExpansion:
    """Eventually periodic (or finite) continued fraction.

    ``period`` is stored at minimal length and ``preperiod`` is trimmed to
    minimal length; rotations of a period are distinct values.  A finite
    expansion (empty period) never ends in a 1 unless it is just ``[a0]``.
    """

    a0: int
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        a0 = int(self.a0)
        pre = tuple(int(a) for a in self.preperiod)
        per = tuple(int(a) for a in self.period)
        if any(a < 1 for a in pre + per):
            raise ValueError("partial quotients after a0 must be positive")
        if per:
            per = minimal_period(per)
            while pre and pre[-1] == per[-1]:
                per = per[-1:] + per[:-1]
                pre = pre[:-1]
        elif pre and pre[-1] == 1:
            if len(pre) == 1:
                a0, pre = a0 + 1, ()
            else:
                pre = pre[:-2] + (pre[-2] + 1,)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def digit(self, n: int) -> int:
        if n < 0:
            raise IndexOutOfRange(n)
        if n == 0:
            return self.a0
        m = len(self.preperiod)
        if n <= m:
            return self.preperiod[n - 1]
        if not self.period:
            raise IndexOutOfRange(f"finite expansion has no digit a_{n}")
        return self.period[(n - 1 - m) % len(self.period)]

    def digits(self, count: int) -> list[int]:
        """First ``count`` digits ``a_0 .. a_{count-1}`` (fewer for a short finite one)."""
        if not self.period:
            count = min(count, 1 + len(self.preperiod))
        return [self.digit(k) for k in range(count)]

    def __len__(self):
        if self.period:
            raise TypeError("periodic expansion is infinite")
        return 1 + len(self.preperiod)

    @classmethod
    def parse(cls, text: str) -> CFExpansion:
        return parse_cf(text)

    def __str__(self):
        if not self.preperiod and not self.period:
            return str(self.a0)
        parts = [str(a) for a in self.preperiod]
        if self.period:
            parts.append("(" + ",".join(map(str, self.period)) + ")")
        return f"{self.a0};" + ",".join(parts)

    def to_json(self) -> dict:
        return {"a0": self.a0, "preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_json(cls, obj: dict) -> CFExpansion:
        return cls(obj["a0"], tuple(obj.get("preperiod", ())), tuple(obj.get("period", ())))


_CF_RE = re.compile(
    r"""^\s*\[?\s*(?P<a0>[+-]?\d+)\s*
        (?:;\s*(?P<pre>\d+(?:\s*,\s*\d+)*)?\s*,?\s*
        (?:\(\s*(?P<per>\d+(?:\s*,\s*\d+)*)\s*\))?)?\s*\]?\s*$""",
    re.VERBOSE,
)


def parse_cf(text: str) -> CFExpansion:
    """Parse ``a0;pre1,pre2,(per1,per2,...)``, e.g. ``2;(1,1,3,1,1,1,1,3)``."""
    m = _CF_RE.match(text)
    if not m:
        raise CFParseError(f"cannot parse continued fraction literal {text!r}")

    def ints(group):
        return tuple(int(t) for t in group.split(",")) if group else ()

    try:
        return CFExpansion(int(m["a0"]), ints(m["pre"]), ints(m["per"]))
    except ValueError as exc:
        raise CFParseError(str(exc)) from exc


class Convergent(NamedTuple):
    index: int
    p: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


class TailPair(NamedTuple):
    alpha_n: QuadSurd
    alpha_star_n: Fraction


class PerronResult(NamedTuple):
    n: int
    lhs: QuadSurd
    rhs: QuadSurd


def expand(x, max_steps: int = 10_000) -> CFExpansion:
    """Exact continued fraction of a rational or quadratic irrational.

    Periodicity is detected by an exact repeat among the complete quotients
    ``x_1, x_2, ...``; ``x_0`` is kept out of the period so that ``a0`` stays
    the integer part.
    """
    if not isinstance(x, QuadSurd):
        x = QuadSurd.from_rational(x)
    digits: list[int] = []
    seen: dict[QuadSurd, int] = {}
    for k in range(max_steps + 1):
        if k >= 1:
            start = seen.get(x)
            if start is not None:
                return CFExpansion(digits[0], tuple(digits[1:start]), tuple(digits[start:]))
            seen[x] = k
        a = x.floor()
        digits.append(a)
        frac = x - a
        if not frac:
            return CFExpansion(digits[0], tuple(digits[1:]))
        x = frac.inverse()
    raise StepLimitExceeded(f"no period found within {max_steps} steps")


def _matrix(word: Sequence[int]) -> tuple[int, int, int, int]:
    A, B, C, D = 1, 0, 0, 1
    for b in word:
        A, B, C, D = A * b + B, A, C * b + D, C
    return A, B, C, D


def periodic_value(period: Sequence[int]) -> QuadSurd:
    """Value of the purely periodic ``[c1; c2, ..., cL, c1, ...]``.

    With ``[[A, B], [C, D]]`` the product of ``[[c, 1], [1, 0]]`` over the
    period, the value ``y > 1`` solves ``C y^2 + (D - A) y - B = 0``.
    """
    if not period:
        raise ValueError("empty period")
    A, B, C, D = _matrix(period)
    return QuadSurd(A - D, 1, (A - D) ** 2 + 4 * B * C, 2 * C)


def value(cf: CFExpansion) -> QuadSurd:
    """Exact value of an eventually periodic or finite expansion."""
    if cf.period:
        x = periodic_value(cf.period)
        for b in reversed(cf.preperiod):
            x = b + x.inverse()
        return cf.a0 + x.inverse()
    x = Fraction(0)
    for b in reversed(cf.preperiod):
        x = 1 / (b + x)
    return QuadSurd.from_rational(cf.a0 + x)


def iter_convergents(cf: CFExpansion) -> Iterator[Convergent]:
    p_prev, q_prev, p, q = 0, 1, 1, 0
    n = 0
    while True:
        try:
            a = cf.digit(n)
        except IndexOutOfRange:
            return
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        yield Convergent(n, p, q)
        n += 1


def convergents(cf: CFExpansion, n_max: int) -> list[Convergent]:
    """Exact ``(p_k, q_k)`` for ``k = 0 .. n_max`` (shorter for a finite expansion)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = []
    for c in iter_convergents(cf):
        if c.index > n_max:
            break
        out.append(c)
    return out


def shift(cf: CFExpansion, n: int) -> CFExpansion:
    """The expansion ``[a_n; a_{n+1}, ...]``."""
    if n < 0:
        raise IndexOutOfRange(n)
    if n == 0:
        return cf
    m = len(cf.preperiod)
    if n <= m:
        return CFExpansion(cf.preperiod[n - 1], cf.preperiod[n:], cf.period)
    if not cf.period:
        raise IndexOutOfRange(f"finite expansion has no digit a_{n}")
    j = (n - 1 - m) % len(cf.period)
    per = cf.period
    return CFExpansion(per[j], (), per[j + 1 :] + per[: j + 1])


def _alpha_star(cf: CFExpansion, n: int) -> Fraction:
    v = Fraction(0)
    for k in range(1, n + 1):
        v = 1 / (cf.digit(k) + v)
    return v


def tails(cf: CFExpansion, n: int) -> TailPair:
    """``(alpha_n, alpha_star_n)``; ``alpha_star_n`` stops at ``a_1``."""
    if n < 1:
        raise IndexOutOfRange("tails are defined for n >= 1")
    return TailPair(value(shift(cf, n)), _alpha_star(cf, n))


def period_position(cf: CFExpansion, residue: int) -> int:
    """Index into ``cf.period`` of ``a_n`` for large ``n`` with ``n % L == residue``."""
    if not cf.period:
        raise ValueError("expansion has no period")
    return (residue - 1 - len(cf.preperiod)) % len(cf.period)


def residue_of_position(cf: CFExpansion, j: int) -> int:
    """Inverse of :func:`period_position`."""
    return (j + 1 + len(cf.preperiod)) % len(cf.period)


def limit_tails(cf: CFExpansion, residue: int) -> tuple[QuadSurd, QuadSurd]:
    """Limits of ``(alpha_n, alpha_star_{n-1})`` along ``n % L == residue``.

    The forward limit is the purely periodic value starting at ``a_n``; the
    backward one is ``[0; a_{n-1}, a_{n-2}, ...]`` continued periodically.
    Neither depends on the preperiod.
    """
    j = period_position(cf, residue)
    per = cf.period
    L = len(per)
    forward = periodic_value(per[j:] + per[:j])
    backward = periodic_value(tuple(per[(j - 1 - k) % L] for k in range(L))).inverse()
    return forward, backward


def perron_check(cf: CFExpansion, n: int) -> PerronResult:
    """Check ``|alpha - p_n/q_n| == 1/(q_n^2 (alpha_{n+1} + alpha_star_n))`` exactly."""
    if n < 0:
        raise IndexOutOfRange(n)
    if not cf.period:
        raise ValueError("Perron's identity needs an irrational expansion")
    alpha = value(cf)
    conv = convergents(cf, n)[-1]
    lhs = abs(alpha - Fraction(conv.p, conv.q))
    star = _alpha_star(cf, n)
    rhs = (conv.q**2 * (value(shift(cf, n + 1)) + star)).inverse()
    if lhs != rhs:
        raise IdentityViolated(f"Perron identity fails at n={n}: {lhs} != {rhs}")
    return PerronResult(n, lhs, rhs)


def equivalent(x: CFExpansion, y: CFExpansion) -> bool:
    """Tail equivalence for eventually periodic expansions."""
    if not (x.period and y.period):
        raise ValueError("equivalence is only decided for periodic expansions")
    return is_rotation(x.period, y.period)
