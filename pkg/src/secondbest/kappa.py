"""The kappa quantities behind the second-best approximation constant.

For an irrational ``alpha`` with tails ``alpha_n`` and reversed tails
``alpha_star_n``::

    kappa1_n = (1 + alpha_star_{n-1}) (alpha_n - 1) / (alpha_n + alpha_star_{n-1})
    kappa2_n = (1 - alpha_star_n) (alpha_{n+1} + 1) / (alpha_{n+1} + alpha_star_n)
    kappa4_n = 4 / (alpha_n + alpha_star_{n-1})

and, unless ``alpha`` is equivalent to the golden ratio, the constant is the
liminf of ``min(kappa1_n, kappa2_n, kappa4_n)`` over ``n`` with ``a_n >= 2``.
For a periodic expansion each kappa converges along every residue class of
``n`` modulo the period length, so the liminf is the least of those limits.

Two independent routes are provided.  :func:`k_exact` substitutes the limit
tails from :mod:`secondbest.cf` into the formulas in ``QuadSurd`` arithmetic.
:func:`k_squared` works on the reduced forms ``x_j = (P_j + sqrt(D))/Q_j`` of
the purely periodic tails, where the backward limit is ``-conj(x_j)``; every
kappa limit is then ``c / sqrt(D)`` with ``c`` rational, so ``k**2`` is an
exact rational computed with integers only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .cf import (
    CFExpansion,
    IndexOutOfRange,
    _alpha_star,
    _matrix,
    limit_tails,
    minimal_period,
    period_position,
    residue_of_position,
    shift,
    value,
)
from .exactnum import QuadSurd, sqrt

__all__ = [
    "KappaLimits",
    "KappaProfile",
    "EmptyPeriod",
    "GOLDEN_K",
    "kappa_at",
    "kappa_limits",
    "k_exact",
    "reduced_forms",
    "kappa_coefficients",
    "k_squared",
    "min_kappa_coefficient",
]

#: the constant for numbers equivalent to the golden ratio
GOLDEN_K = 4 / sqrt(5)


class EmptyPeriod(ValueError):
    pass


class KappaLimits(NamedTuple):
    kappa1: QuadSurd
    kappa2: QuadSurd
    kappa4: QuadSurd

    def minimum(self) -> QuadSurd:
        return min(self)


@dataclass(frozen=True)
class KappaProfile:
    """Per-residue kappa limits of a periodic expansion and the resulting constant.

    ``limits`` maps a residue ``r`` (``n % L == r``) to the three limits along
    that class; only residues whose digit is at least 2 are listed.
    """

    cf: CFExpansion
    k_value: QuadSurd
    special_case: str = "generic"
    limits: dict[int, KappaLimits] = field(default_factory=dict)

    @property
    def period_length(self) -> int:
        return len(self.cf.period)

    def minimizers(self) -> list[tuple[int, str]]:
        """All ``(residue, kappa name)`` pairs attaining ``k_value``."""
        names = ("kappa1", "kappa2", "kappa4")
        return [
            (r, name)
            for r, lim in sorted(self.limits.items())
            for name, v in zip(names, lim)
            if v == self.k_value
        ]

    def to_json(self) -> dict:
        return {
            "cf": str(self.cf),
            "special_case": self.special_case,
            "k": {
                "exact": str(self.k_value),
                "radical": self.k_value.radical_form(),
                "decimal": self.k_value.to_decimal(12),
            },
            "limits": [
                {
                    "residue": r,
                    "digit": self.cf.period[period_position(self.cf, r)],
                    **{name: {"exact": str(v), "decimal": v.to_decimal(12)} for name, v in lim._asdict().items()},
                }
                for r, lim in sorted(self.limits.items())
            ],
        }


def _kappa_from(alpha_n, star_prev, alpha_next, star_n, which):
    if which == 1:
        return (1 + star_prev) * (alpha_n - 1) / (alpha_n + star_prev)
    if which == 2:
        return (1 - star_n) * (alpha_next + 1) / (alpha_next + star_n)
    if which == 4:
        return 4 / (alpha_n + star_prev)
    raise ValueError(f"no kappa{which}; use 1, 2 or 4")


def kappa_at(cf: CFExpansion, n: int, which: int) -> QuadSurd:
    """Exact ``kappa^which_n`` for ``n >= 1``."""
    if n < 1:
        raise IndexOutOfRange("kappa_n is defined for n >= 1")
    if which in (1, 4):
        return _kappa_from(value(shift(cf, n)), _alpha_star(cf, n - 1), None, None, which)
    if which == 2:
        return _kappa_from(None, None, value(shift(cf, n + 1)), _alpha_star(cf, n), which)
    raise ValueError(f"no kappa{which}; use 1, 2 or 4")


def kappa_limits(cf: CFExpansion, residue: int) -> KappaLimits:
    """Limits of ``(kappa1_n, kappa2_n, kappa4_n)`` along ``n % L == residue``."""
    if not cf.period:
        raise EmptyPeriod("kappa limits need a periodic expansion")
    L = len(cf.period)
    alpha_n, star_prev = limit_tails(cf, residue % L)
    alpha_next, star_n = limit_tails(cf, (residue + 1) % L)
    return KappaLimits(
        _kappa_from(alpha_n, star_prev, alpha_next, star_n, 1),
        _kappa_from(alpha_n, star_prev, alpha_next, star_n, 2),
        _kappa_from(alpha_n, star_prev, alpha_next, star_n, 4),
    )


def k_exact(cf: CFExpansion) -> KappaProfile:
    """The second-best constant of a periodic expansion, exactly."""
    if not cf.period:
        raise EmptyPeriod("k_exact needs a periodic expansion")
    if all(a == 1 for a in cf.period):
        # no n with a_n >= 2; the liminf formula does not apply here
        return KappaProfile(cf, GOLDEN_K, "golden")
    limits = {
        residue_of_position(cf, j): kappa_limits(cf, residue_of_position(cf, j))
        for j, a in enumerate(cf.period)
        if a >= 2
    }
    k = min(lim.minimum() for lim in limits.values())
    return KappaProfile(cf, k, "generic", limits)


# integer route


def reduced_forms(period: Sequence[int]) -> tuple[int, list[tuple[int, int]]]:
    """``(D, [(P_j, Q_j)])`` with ``x_j = (P_j + sqrt(D))/Q_j`` the purely
    periodic tail starting at ``period[j]``.

    ``D`` is not reduced to its square-free part.
    """
    if not period:
        raise EmptyPeriod("empty period")
    A, B, C, Dm = _matrix(period)
    D = (A - Dm) ** 2 + 4 * B * C
    P, Q = A - Dm, 2 * C
    forms = []
    for a in period:
        forms.append((P, Q))
        P = a * Q - P
        Q, rem = divmod(D - P * P, Q)
        assert rem == 0
    return D, forms


def kappa_coefficients(period: Sequence[int]) -> tuple[int, dict[int, tuple[Fraction, Fraction, Fraction]]]:
    """``(D, {j: (c1, c2, c4)})`` with each kappa limit equal to ``c / sqrt(D)``.

    Keys are period positions ``j`` with ``period[j] >= 2``.
    """
    period = tuple(period)
    D, forms = reduced_forms(period)
    L = len(period)
    out = {}
    for j, a in enumerate(period):
        if a < 2:
            continue
        P, Q = forms[j]
        P1, Q1 = forms[(j + 1) % L]
        c1 = Fraction(D - (Q - P) ** 2, 2 * Q)
        c2 = Fraction((P1 + Q1) ** 2 - D, 2 * Q1)
        c4 = Fraction(2 * Q)
        assert c1 > 0 and c2 > 0
        out[j] = (c1, c2, c4)
    return D, out


def min_kappa_coefficient(period: Sequence[int]) -> tuple[int, int, int]:
    """``(N, M, D)`` with ``N/M`` the least kappa coefficient, so ``k = N / (M sqrt(D))``.

    Integer-only version of :func:`kappa_coefficients` for bulk use; the
    period must be primitive and contain a digit >= 2.
    """
    A, B, C, Dm = 1, 0, 0, 1
    for b in period:
        A, B, C, Dm = A * b + B, A, C * b + Dm, C
    D = (A - Dm) ** 2 + 4 * B * C
    P, Q = A - Dm, 2 * C
    Ps, Qs = [], []
    for a in period:
        Ps.append(P)
        Qs.append(Q)
        P = a * Q - P
        Q = (D - P * P) // Q
    L = len(period)
    bn, bm = None, 1
    for j, a in enumerate(period):
        if a < 2:
            continue
        P, Q = Ps[j], Qs[j]
        j1 = j + 1 if j + 1 < L else 0
        s = Ps[j1] + Qs[j1]
        t = Q - P
        for n, m in ((D - t * t, 2 * Q), (s * s - D, 2 * Qs[j1]), (2 * Q, 1)):
            if bn is None or n * bm < bn * m:
                bn, bm = n, m
    if bn is None:
        raise ValueError("period has no digit >= 2")
    return bn, bm, D


def k_squared(period: Sequence[int]) -> Fraction:
    """Exact square of the second-best constant for the purely periodic ``period``.

    Preperiods and rotations do not change the constant, so only the period
    is needed.
    """
    period = minimal_period(period)
    if all(a == 1 for a in period):
        return Fraction(16, 5)
    n, m, D = min_kappa_coefficient(period)
    return Fraction(n * n, m * m * D)
