"""Exact best and second-best rational approximation constants.

The main entry points::

    >>> from secondbest import parse_cf, k_exact
    >>> k_exact(parse_cf("2;(1,1,3,1,1,1,1,3)")).k_value.to_decimal(6)
    '0.959129'
"""
from .cf import (
    CFExpansion,
    Convergent,
    TailPair,
    convergents,
    equivalent,
    expand,
    limit_tails,
    parse_cf,
    perron_check,
    tails,
    value,
)
from .exactnum import BigRational, MixedRadicand, QuadSurd, compare, compare_mixed, parse_surd, sqrt
from .kappa import KappaProfile, k_exact, k_squared, kappa_at, kappa_limits
from .measure import RealInput, breakpoints, liminf_estimate, psi, psi2
from .spectra import (
    THIRD_ELEMENT,
    audit_periods,
    classify,
    proposition1_table,
    subcase_bound,
    theorem2_report,
)

__version__ = "0.1.0"
