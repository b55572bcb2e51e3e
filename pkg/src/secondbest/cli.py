"""Command-line entry point: ``secondbest <verb> [literal] [options]``.

Exit status is 0 on success, 1 when a verification fails or a computation
raises, and 2 for usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .cf import CFExpansion, CFParseError, convergents, expand, parse_cf, value
from .exactnum import QuadSurd, SurdParseError, parse_surd
from .kappa import k_exact
from .measure import RealInput, breakpoints, liminf_estimate, write_breakpoints_csv
from .spectra import audit_periods, classify, theorem2_report

DEFAULT_PRECISION = 60
DEFAULT_T_MAX = 10**5
DEEP_T_MAX = 10**6

VERBS = ("expand", "value", "convergents", "psi", "psi2", "liminf", "kconst", "classify", "verify-paper", "audit")

_DECIMAL = re.compile(r"^\s*[+-]?(\d+\.\d*|\.\d+)\s*$")


class ParseError(ValueError):
    pass


def parse_literal(text: str):
    """A :class:`CFExpansion`, a :class:`QuadSurd`, or a decimal string."""
    try:
        if ";" in text or text.strip().startswith("["):
            return parse_cf(text)
        if _DECIMAL.match(text):
            return text.strip()
        return parse_surd(text)
    except (CFParseError, SurdParseError) as exc:
        raise ParseError(str(exc)) from exc


def _as_cf(obj) -> CFExpansion:
    if isinstance(obj, CFExpansion):
        return obj
    if isinstance(obj, QuadSurd):
        return expand(obj)
    raise ParseError("expected a continued fraction or surd literal, not a decimal")


def _surd_json(x: QuadSurd, digits: int) -> dict:
    return {"exact": str(x), "pretty": x.pretty(), "decimal": x.to_decimal(digits), "json": x.to_json()}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secondbest",
        description="Exact second-best approximation constants of quadratic irrationals.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="decimal digits")
    common.add_argument("--t-max", type=int, default=None, help=f"scan bound (default {DEFAULT_T_MAX})")
    common.add_argument("--n-max", type=int, default=10, help="last convergent index")
    common.add_argument("--deep", action="store_true", help=f"use t-max {DEEP_T_MAX}")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb, parents=[common])
        if verb not in ("verify-paper", "audit"):
            p.add_argument("literal", help="surd like (1+sqrt(17))/2, CF like 2;(1,1,3), or decimal")
        if verb in ("psi", "psi2"):
            p.add_argument("--csv", metavar="PATH", help="write the breakpoint table as CSV")
        if verb == "liminf":
            p.add_argument("--kind", choices=("lagrange", "second-best"), default="second-best")
        if verb == "audit":
            p.add_argument("--max-len", type=int, default=6)
            p.add_argument("--max-digit", type=int, default=6)
    return parser


def _validate(args, parser):
    if args.precision < 1:
        parser.error("--precision must be positive")
    if args.n_max < 0:
        parser.error("--n-max must be non-negative")
    if args.t_max is not None and args.t_max < 1:
        parser.error("--t-max must be positive")
    if args.verb == "liminf" and args.t_max is not None and args.t_max < 100:
        parser.error("liminf needs --t-max >= 100")
    if args.verb == "audit" and not 1 <= args.max_len <= 16:
        parser.error("--max-len must be between 1 and 16")


def _t_max(args) -> int:
    if args.t_max is not None:
        return args.t_max
    return DEEP_T_MAX if args.deep else DEFAULT_T_MAX


def _run(args) -> tuple[dict, str, bool]:
    """Returns ``(json result, text output, success)``."""
    digits = args.precision
    verb = args.verb
    if verb == "verify-paper":
        rep = theorem2_report()
        return rep.to_json(), rep.to_text(), rep.passed
    if verb == "audit":
        rep = audit_periods(args.max_len, args.max_digit)
        return rep.to_json(), rep.to_text(), rep.passed

    obj = parse_literal(args.literal)
    res: dict = {"input": args.literal}
    if verb == "expand":
        if isinstance(obj, CFExpansion):
            raise ParseError("expand takes a surd literal")
        cf = _as_cf(obj)
        res.update(cf=cf.to_json(), literal=str(cf))
        return res, str(cf), True
    if verb == "value":
        cf = _as_cf(obj)
        x = value(cf)
        res.update(cf=str(cf), value=_surd_json(x, digits))
        return res, f"{x}\n{x.to_decimal(digits)}", True
    if verb == "convergents":
        cf = _as_cf(obj)
        cs = convergents(cf, args.n_max)
        res.update(cf=str(cf), convergents=[{"n": c.index, "p": c.p, "q": c.q} for c in cs])
        return res, "\n".join(f"{c.index}\t{c.p}/{c.q}" for c in cs), True
    if verb in ("psi", "psi2", "liminf"):
        real = RealInput(obj, precision=digits)
        t_max = _t_max(args)
        if verb == "liminf":
            est = liminf_estimate(real, t_max, args.kind)
            res.update(estimate=est.to_json())
            text = (
                f"{est.kind} liminf estimate over [{est.window[0]}, {est.window[1]}]: "
                f"{est.estimate}\nattained at t={est.t} by (q, p)=({est.q}, {est.p})"
            )
            return res, text, True
        kind = "best" if verb == "psi" else "second-best"
        samples = breakpoints(real, t_max, kind)
        last = samples[-1]
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                write_breakpoints_csv(samples, fh)
        res.update(
            t_max=t_max,
            sample={**last.to_json(), "t": t_max},
            breakpoints=[s.to_json() for s in samples],
        )
        text = f"{verb}({t_max}) = {last.value} at (q, p)=({last.q}, {last.p}); {len(samples)} breakpoints"
        return res, text, True
    if verb == "kconst":
        cf = _as_cf(obj)
        prof = k_exact(cf)
        res.update(profile=prof.to_json())
        k = prof.k_value
        lines = [f"k = {k.radical_form()} = {k.pretty()} = {k.to_decimal(digits)}"]
        if prof.special_case != "generic":
            lines.append(f"special case: {prof.special_case}")
        for r, lim in sorted(prof.limits.items()):
            lines.append(
                f"  n = {r} mod {prof.period_length}: "
                + "  ".join(f"{name} {v.pretty()} = {v.to_decimal(6)}" for name, v in lim._asdict().items())
            )
        return res, "\n".join(lines), True
    if verb == "classify":
        cr = classify(_as_cf(obj))
        res.update(classification=cr.to_json())
        pos = "" if cr.position is None else f" at position {cr.position}"
        return res, f"{cr.verdict}: {cr.witness}{pos} in ({','.join(map(str, cr.period))})", True
    raise ParseError(f"unknown verb {verb}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        result, text, ok = _run(args)
    except ParseError as exc:
        print(f"secondbest: parse error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"secondbest {args.verb}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        doc = {"command": args.verb, "status": "ok" if ok else "fail", "result": result}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
