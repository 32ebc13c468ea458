"""Command line interface.

Exit codes: 0 success, 1 input or validation failure, 2 internal
consistency violation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .engine import Configuration, InfiniteOccurrences, iterate
from .groups import GroupError, Integers, group_from_spec
from .io import (FormatError, dumps, load_configuration, load_rule, report_to_json,
                 rule_to_json, trajectory_to_json)
from .oracle import OracleBudgetExceeded, default_budget, oracle_power_equal
from .order import (ConsistencyViolation, construct_order_n, idempotency_sufficient,
                    order_report, upper_bound)
from .rules import LocalMap, NotLazy, RuleError, classify_pattern, eca_rule, is_lazy, minimal_neighborhood

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2


class UsageError(Exception):
    pass


def _rule_source(args):
    if args.eca is not None:
        mu = eca_rule(args.eca)
        return mu, is_lazy(mu)
    if args.rule is None:
        raise UsageError("give --rule FILE or --eca N")
    return None, load_rule(args.rule)


def _lazy(args):
    mu, rule = _rule_source(args)
    if isinstance(rule, NotLazy):
        raise UsageError(f"rule is not lazy: {rule.reason}")
    return rule


def _fmt_set(S) -> str:
    return "{" + ", ".join(str(s) for s in S) + "}"


def cmd_classify(args) -> int:
    mu, rule = _rule_source(args)
    if mu is not None:
        red = minimal_neighborhood(mu)
        print(f"ECA {args.eca}: neighborhood {_fmt_set(mu.neighborhood)}")
        print(f"minimal neighborhood: {_fmt_set(red.neighborhood)}")
    if isinstance(rule, NotLazy):
        print(f"lazy: no ({rule.reason})")
        return EXIT_INPUT
    if mu is None:
        print(f"minimal neighborhood: {_fmt_set(rule.neighborhood)}")
    print("lazy: yes")
    print(f"active transition p = {rule.pattern} on {_fmt_set(rule.neighborhood)}")
    print(f"writing symbol a = {rule.write}")
    print("pattern class: " + ", ".join(classify_pattern(rule.pattern).flags()))
    for b in sorted(set(rule.pattern.values)):
        print(f"fiber S_{b} = {_fmt_set(rule.fiber(b))}")
    return EXIT_OK


def cmd_order(args) -> int:
    rule = _lazy(args)
    try:
        report = order_report(rule, cap=args.cap, budget=args.budget, methods=args.method,
                              strict=False)
    except ConsistencyViolation as exc:
        print(f"consistency violation: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if args.json:
        print(dumps(report_to_json(report)))
    else:
        print(f"rule: {rule}")
        print(f"order: {report.order}  [{report.order.method}]")
        if report.theory is not None:
            print(f"theory: {report.theory}  [{report.theory.method}]")
        if report.oracle is not None:
            print(f"oracle: {report.oracle}")
        print(f"upper bound: {report.bound}")
        print(f"sufficient condition: {report.condition or 'none'}")
        for note in report.notes:
            print(f"note: {note}")
        for v in report.violations:
            print(f"VIOLATION: {v}")
        print(f"consistent: {'yes' if report.consistent else 'no'}")
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def cmd_idempotent(args) -> int:
    rule = _lazy(args)
    cond = idempotency_sufficient(rule)
    try:
        verdict = oracle_power_equal(rule, 2, args.budget)
    except OracleBudgetExceeded as exc:
        verdict = None
        print(f"oracle skipped: {exc}")
    print(f"sufficient condition: {cond or 'none'}")
    if verdict is not None:
        print(f"idempotent (oracle): {'yes' if verdict else 'no'}")
    if cond is not None and verdict is False:
        print("VIOLATION: a sufficient condition holds but the oracle disagrees")
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_bound(args) -> int:
    rule = _lazy(args)
    res = upper_bound(rule, args.cap)
    print(f"upper bound: {res}")
    if res.note:
        print(f"note: {res.note}")
    return EXIT_OK


def _parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise UsageError(f"window must look like LO..HI with LO <= HI, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _parse_cells(text: str, group, q: int):
    cells = []
    for item in filter(None, (s.strip() for s in text.split(";"))):
        pos, _, val = item.rpartition("=")
        if not pos:
            raise UsageError(f"cells must look like POS=SYMBOL;..., got {item!r}")
        cells.append((group.element(pos), int(val)))
    return cells


def render_text(states, lo: int, hi: int) -> list[str]:
    from .rules import _glyph

    Z = Integers()
    return ["".join(_glyph(x(Z.element(i))) for i in range(lo, hi + 1)) for x in states]


def render_pgm(states, lo: int, hi: int, q: int) -> str:
    Z = Integers()
    rows = [" ".join(str(q - 1 - x(Z.element(i))) for i in range(lo, hi + 1)) for x in states]
    return "\n".join([f"P2", f"{hi - lo + 1} {len(states)}", str(q - 1), *rows]) + "\n"


def cmd_simulate(args) -> int:
    rule = _lazy(args)
    G = rule.group
    if args.config:
        x = load_configuration(args.config, G, rule.q)
    else:
        x = Configuration.make(G, args.background, _parse_cells(args.cells or "", G, rule.q))
    tr = iterate(rule, x, args.steps)
    if args.render == "json":
        out = dumps(trajectory_to_json(tr)) + "\n"
    else:
        if not isinstance(G, Integers):
            raise UsageError("text/pgm rendering needs the universe Z; use --render json")
        lo, hi = _parse_window(args.window)
        if args.render == "text":
            lines = render_text(tr.states, lo, hi)
            if tr.fixed_at is not None:
                lines.append(f"fixed point at step {tr.fixed_at}")
            out = "\n".join(lines) + "\n"
        else:
            out = render_pgm(tr.states, lo, hi, rule.q)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_construct(args) -> int:
    G = group_from_spec(args.group)
    rule = construct_order_n(G, G.element(args.g), args.n, q=args.alphabet)
    text = dumps(rule_to_json(rule)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}: {rule}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lazyca", description="Lazy cellular automata over groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def rule_args(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--rule", help="rule file (JSON)")
        src.add_argument("--eca", type=int, help="elementary CA rule number 0..255")

    p = sub.add_parser("classify", help="minimal neighborhood, laziness and pattern class")
    rule_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("order", help="order report with cross-checks")
    rule_args(p)
    p.add_argument("--cap", type=int, default=8)
    p.add_argument("--method", choices=["auto", "oracle", "theory", "bound"], default="auto")
    p.add_argument("--budget", type=int, default=None,
                   help=f"oracle window budget (default $LAZYCA_BUDGET or {default_budget()})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("idempotent", help="sufficient conditions and oracle check of tau^2 = tau")
    rule_args(p)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_idempotent)

    p = sub.add_parser("bound", help="general upper bound on the order")
    rule_args(p)
    p.add_argument("--cap", type=int, default=64)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", help="iterate a rule on a finite configuration")
    rule_args(p)
    p.add_argument("--config", help="configuration file (JSON)")
    p.add_argument("--cells", help="inline cells, e.g. '0=1;1=1;2=1'")
    p.add_argument("--background", type=int, default=0)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--render", choices=["text", "pgm", "json"], default="text")
    p.add_argument("--window", default="-10..10")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("construct", help="rule of prescribed order n with S = {e, g, g^n}")
    p.add_argument("--group", default="Z", help="Z, Z^d, Cm, Fk, Sn or a JSON group object")
    p.add_argument("--g", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "group", None) and args.group.lstrip().startswith("{"):
        args.group = json.loads(args.group)
    try:
        return args.func(args)
    except (UsageError, FormatError, GroupError, RuleError, InfiniteOccurrences,
            OracleBudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
