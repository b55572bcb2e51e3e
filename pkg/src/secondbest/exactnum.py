"""Exact arithmetic in real quadratic fields.

A :class:`QuadSurd` is the number ``(p + q*sqrt(d))/r`` kept in a canonical
form: ``r > 0``, ``gcd(p, q, r) == 1``, ``d`` square-free, and ``d == 1``
whenever ``q == 0``.  Structural equality is therefore numeric equality.
Rationals are plain :class:`fractions.Fraction` objects where no radical is
involved, and embed into :class:`QuadSurd` with ``q == 0``.

No floating point is used anywhere in comparison or flooring.
"""
from __future__ import annotations

import ast
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

BigRational = Fraction

#: trial-division ceiling used when extracting square factors from radicands
TRIAL_DIVISION_BOUND = 10**6

__all__ = [
    "BigRational",
    "QuadSurd",
    "ExactArithmeticError",
    "MixedRadicand",
    "RadicandTooLarge",
    "SurdParseError",
    "squarefree_decompose",
    "sign_of",
    "compare",
    "compare_mixed",
    "parse_surd",
    "sqrt",
]


class ExactArithmeticError(ArithmeticError):
    pass


class MixedRadicand(ExactArithmeticError, ValueError):
    """Both operands are irrational and live in different quadratic fields."""


class RadicandTooLarge(ExactArithmeticError):
    """Square-free part could not be certified within the trial-division bound."""


class SurdParseError(ValueError):
    pass


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@lru_cache(maxsize=4096)
def squarefree_decompose(n: int, bound: int = TRIAL_DIVISION_BOUND) -> tuple[int, int]:
    """Return ``(s, core)`` with ``n == s*s*core`` and ``core`` square-free.

    Trial division stops early once the unfactored remainder is a perfect
    square or provably prime.  A remainder that is neither after reaching
    ``bound`` raises :class:`RadicandTooLarge`.
    """
    if n < 0:
        raise ValueError("radicand must be non-negative")
    if n == 0:
        return 0, 1
    s, core, m = 1, 1, n
    p = 2
    while m > 1 and p * p <= m:
        if _is_square(m):
            break
        if p > bound:
            raise RadicandTooLarge(f"cannot certify square-free part of {n} with bound {bound}")
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    if m > 1:
        r = isqrt(m)
        if r * r == m:
            s *= r
        else:
            # no factor <= sqrt(m) remains, so m is prime
            core *= m
    return s, core


def sign_of(p: int, q: int, d: int) -> int:
    """Sign of ``p + q*sqrt(d)`` for integers, ``d >= 0`` (any d, square-free or not)."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0 or d == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    lhs, rhs = p * p, q * q * d
    if lhs == rhs:
        return 0
    return sp if lhs > rhs else sq


class QuadSurd:
    """Immutable element ``(p + q*sqrt(d))/r`` of a real quadratic field."""

    __slots__ = ("p", "q", "d", "r", "_hash")

    def __init__(self, p=0, q=0, d=1, r=1):
        if isinstance(p, Fraction) and q == 0 and r == 1:
            p, r = p.numerator, p.denominator
        p, q, d, r = int(p), int(q), int(d), int(r)
        if r == 0:
            raise ZeroDivisionError("QuadSurd denominator is zero")
        if d < 0:
            raise ValueError("radicand must be non-negative")
        if q and d != 1:
            s, d = squarefree_decompose(d)
            q *= s
        if d == 1 or d == 0 or q == 0:
            p, q, d = p + (q if d == 1 else 0), 0, 1
        self._set(p, q, d, r)

    def _set(self, p, q, d, r):
        if r < 0:
            p, q, r = -p, -q, -r
        g = gcd(p, q, r)
        if g != 1:
            p, q, r = p // g, q // g, r // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, p, q, d, r):
        # d already square-free; skips factoring
        obj = cls.__new__(cls)
        if q == 0:
            d = 1
        obj._set(p, q, d, r)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QuadSurd is immutable")

    # construction helpers

    @classmethod
    def from_rational(cls, x) -> QuadSurd:
        x = Fraction(x)
        return cls._raw(x.numerator, 0, 1, x.denominator)

    @classmethod
    def parse(cls, text: str) -> QuadSurd:
        return parse_surd(text)

    @classmethod
    def from_json(cls, obj: dict) -> QuadSurd:
        return cls(obj["p"], obj.get("q", 0), obj.get("d", 1), obj.get("r", 1))

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "d": self.d, "r": self.r}

    # predicates / parts

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    def irrational_coefficient(self) -> Fraction:
        return Fraction(self.q, self.r)

    def as_fraction(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    def conjugate(self) -> QuadSurd:
        return QuadSurd._raw(self.p, -self.q, self.d, self.r)

    def sign(self) -> int:
        return sign_of(self.p, self.q, self.d)

    # arithmetic

    def _field(self, other: QuadSurd) -> int:
        if other.q == 0:
            return self.d
        if self.q == 0 or self.d == other.d:
            return other.d
        raise MixedRadicand(f"sqrt({self.d}) and sqrt({other.d}) lie in different fields")

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadSurd._raw(
            self.p * other.r + other.p * self.r,
            self.q * other.r + other.q * self.r,
            d,
            self.r * other.r,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd._raw(-self.p, -self.q, self.d, self.r)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadSurd._raw(
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
            d,
            self.r * other.r,
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadSurd:
        norm = self.p * self.p - self.q * self.q * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero QuadSurd")
        return QuadSurd._raw(self.r * self.p, -self.r * self.q, self.d, norm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        self._field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QuadSurd._raw(1, 0, 1, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison

    def compare(self, other) -> int:
        """Exact sign of ``self - other``: -1, 0 or 1.  Mixed fields raise."""
        return compare(self, _coerce_strict(other))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self.p, self.q, self.d, self.r) == (other.p, other.q, other.d, other.r)

    def __hash__(self):
        if self._hash is None:
            h = hash(Fraction(self.p, self.r)) if self.q == 0 else hash((self.p, self.q, self.d, self.r))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __bool__(self):
        return self.p != 0 or self.q != 0

    # rounding and rendering

    def floor(self) -> int:
        """Greatest integer not exceeding the value, by integer square-root bracketing."""
        if self.q == 0:
            return self.p // self.r
        s = isqrt(self.q * self.q * self.d)
        # d > 1 square-free, so q*sqrt(d) is irrational and never equals s
        fl = s if self.q > 0 else -s - 1
        return (self.p + fl) // self.r

    __floor__ = floor

    def __ceil__(self):
        return -((-self).floor())

    def scaled_floor(self, scale: int) -> int:
        """``floor(self * scale)`` for a positive integer ``scale``."""
        return QuadSurd._raw(self.p * scale, self.q * scale, self.d, self.r).floor()

    def to_decimal(self, digits: int) -> str:
        """Decimal string truncated toward zero with exactly ``digits`` fractional digits."""
        if digits < 1:
            raise ValueError("digits must be >= 1")
        neg = self.sign() < 0
        n = abs(self).scaled_floor(10**digits)
        whole, frac = divmod(n, 10**digits)
        text = f"{whole}.{frac:0{digits}d}"
        return "-" + text if neg and n else text

    def __float__(self):
        return float(Fraction(self.scaled_floor(1 << 80), 1 << 80))

    def _render(self, root: str, mul: str) -> str:
        if self.q == 0:
            return str(self.p) if self.r == 1 else f"{self.p}/{self.r}"
        if self.q == 1:
            term = root
        elif self.q == -1:
            term = "-" + root
        else:
            term = f"{self.q}{mul}{root}"
        if self.p:
            num = f"{self.p}{term}" if term.startswith("-") else f"{self.p}+{term}"
        else:
            num = term
        return num if self.r == 1 else f"({num})/{self.r}"

    def __str__(self):
        return self._render(f"sqrt({self.d})", "*")

    def pretty(self) -> str:
        """Unicode rendering, e.g. ``(39+13√173)/82``."""
        return self._render(f"√{self.d}", "")

    def radical_form(self) -> str:
        """Pure surds as ``n/(m√d)``, e.g. ``164/(13√173)``; others as :meth:`pretty`."""
        if self.p or not self.q:
            return self.pretty()
        c = Fraction(self.q * self.d, self.r)
        den = f"√{self.d}" if c.denominator == 1 else f"({c.denominator}√{self.d})"
        return f"{c.numerator}/{den}"

    def __repr__(self):
        return f"QuadSurd({self.p}, {self.q}, {self.d}, {self.r})"

    def __reduce__(self):
        return (QuadSurd, (self.p, self.q, self.d, self.r))


def _coerce(x):
    if isinstance(x, QuadSurd):
        return x
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return QuadSurd._raw(x.numerator, 0, 1, x.denominator)
    return NotImplemented


def _coerce_strict(x) -> QuadSurd:
    y = _coerce(x)
    if y is NotImplemented:
        raise TypeError(f"cannot interpret {type(x).__name__} as QuadSurd")
    return y


def compare(x, y) -> int:
    """Exact sign of ``x - y`` for operands from one field (or rational)."""
    diff = _coerce_strict(x) - _coerce_strict(y)
    return diff.sign()


def compare_mixed(x, y) -> int:
    """Exact sign of ``x - y`` where ``x`` and ``y`` may come from different fields."""
    x, y = _coerce_strict(x), _coerce_strict(y)
    if x.q == 0 or y.q == 0 or x.d == y.d:
        return compare(x, y)
    # x - y has the sign of u - v, u = P + Q1*sqrt(d1), v = Q2*sqrt(d2)
    P = x.p * y.r - y.p * x.r
    Q1 = x.q * y.r
    Q2 = y.q * x.r
    su = sign_of(P, Q1, x.d)
    sv = (Q2 > 0) - (Q2 < 0)
    if su != sv:
        return (su > sv) - (su < sv)
    # u^2 - v^2 = P^2 + Q1^2 d1 - Q2^2 d2 + 2 P Q1 sqrt(d1)
    s = sign_of(P * P + Q1 * Q1 * x.d - Q2 * Q2 * y.d, 2 * P * Q1, x.d)
    return s if su > 0 else -s


def sqrt(x) -> QuadSurd:
    """Exact square root of a non-negative rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    # sqrt(a/b) = sqrt(a*b)/b
    return QuadSurd(0, 1, x.numerator * x.denominator, x.denominator)


_ROOT_SIGN = re.compile(r"(\d?)\s*√\s*(\d+)")


def _root_to_call(m: re.Match) -> str:
    # "13√173" is read as 13*sqrt(173)
    return (m[1] + "*" if m[1] else "") + f"sqrt({m[2]})"


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return QuadSurd._raw(node.value, 0, 1, 1)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left, right = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        if isinstance(node.op, ast.Pow) and right.is_rational and right.r == 1:
            return left ** right.p
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id == "sqrt"
        and len(node.args) == 1
        and not node.keywords
    ):
        arg = _eval_node(node.args[0])
        if not arg.is_rational:
            raise SurdParseError("nested radicals are not supported")
        return sqrt(arg.as_fraction())
    raise SurdParseError(f"unsupported syntax: {ast.dump(node)}")


def parse_surd(text: str) -> QuadSurd:
    """Parse literals such as ``(39+13*sqrt(173))/82``, ``4/sqrt(17)`` or ``7/3``.

    Any arithmetic combination of integers and ``sqrt(rational)`` over a
    single field is accepted; ``√173`` and ``^`` are accepted as aliases.
    """
    src = _ROOT_SIGN.sub(_root_to_call, text.strip()).replace("√", "sqrt").replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise SurdParseError(f"cannot parse surd literal {text!r}") from exc
    try:
        return _eval_node(tree)
    except (MixedRadicand, ZeroDivisionError) as exc:
        raise SurdParseError(f"{text!r}: {exc}") from exc
