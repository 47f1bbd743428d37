"""Command-line front end: ``check``, ``props`` and ``sweep``.

Every command prints one JSON document on stdout. Exit status is 0 for a
true verdict (or a clean report), 1 for a false verdict (or oracle
disagreements) and 2 for any error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import automata as au
from . import ca
from . import checker as ck
from . import logic as lg
from . import oracles

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2

PROPERTIES = ("surjective", "injective", "fixed_points")


def load_rule(spec):
    """``eca:<n>`` or the path of a rule table file."""
    if spec.startswith("eca:"):
        return ca.parse_rule(spec)
    rule = ca.parse_rule(Path(spec).read_text(encoding="utf-8"))
    return rule if rule.name else ca.CaRule(rule.states, rule.radius, rule.table, rule.quiescent,
                                            name=spec)


def load_predicates(items):
    out = {}
    for item in items or ():
        name, sep, path = item.partition("=")
        if not sep or not name:
            raise ValueError(f"--pred expects name=file, got {item!r}")
        out[name] = au.loads(Path(path).read_text(encoding="utf-8"))
    return out


def parse_range(text):
    lo, sep, hi = text.partition("..")
    lo = int(lo)
    hi = int(hi) if sep else lo
    if not 0 <= lo <= hi <= 255:
        raise ValueError(f"rule range {text!r} must lie within 0..255")
    return list(range(lo, hi + 1))


def _emit(doc, args):
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    if getattr(args, "json", None):
        Path(args.json).write_text(text + "\n", encoding="utf-8")
    if getattr(args, "text", False):
        print(_human(doc))
    else:
        print(text)


def _human(doc, indent=""):
    lines = []
    for key, value in doc.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_human(value, indent + "  "))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}:")
            for item in value:
                if isinstance(item, dict):
                    lines.append(indent + "  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
                else:
                    lines.append(f"{indent}  - {item}")
        else:
            lines.append(f"{indent}{key}: {json.dumps(value)}")
    return "\n".join(lines)


def cmd_check(args):
    if bool(args.formula) == bool(args.formula_file):
        raise ValueError("give exactly one of --formula and --formula-file")
    text = args.formula or Path(args.formula_file).read_text(encoding="utf-8").strip()
    rule = load_rule(args.rule)
    ctx = ck.context(rule, load_predicates(args.pred), args.state_budget)
    verdict = ck.decide(lg.parse_formula(text), ctx)
    verdict.formula = text
    doc = {"rule": rule.name, **verdict.to_json(timing=args.timing)}
    _emit(doc, args)
    return EXIT_TRUE if verdict.result else EXIT_FALSE


def props_report(rule, max_cycle=2, exact=True, budget=au.DEFAULT_STATE_BUDGET):
    ctx = ck.context(rule, budget=budget)
    fixed, _ = ck.fixed_points(ctx)
    cycles = {str(k): str(ck.k_cycles(ctx, k, exact)) for k in range(2, max_cycle + 1)}
    return {
        "rule": rule.name,
        "surjective": ck.is_surjective(ctx),
        "injective": ck.is_injective(ctx),
        "fixed_points": str(fixed),
        "exact_cycles": exact,
        "cycles": cycles,
    }


def cmd_props(args):
    spec = args.rule_spec or args.rule
    if not spec:
        raise ValueError("props needs a rule")
    _emit(props_report(load_rule(spec), args.max_cycle, args.exact_cycles, args.state_budget), args)
    return EXIT_TRUE


def _property(prop, rule, budget):
    ctx = ck.context(rule, budget=budget)
    if prop == "surjective":
        return ck.is_surjective(ctx)
    if prop == "injective":
        return ck.is_injective(ctx)
    return str(ck.fixed_points(ctx)[0])


_ORACLES = {
    "surjective": oracles.is_surjective,
    "injective": oracles.is_injective,
    "fixed_points": oracles.fixed_point_class,
}


def cmd_sweep(args):
    codes = parse_range(args.range)
    if args.sample is not None:
        codes = sorted(random.Random(args.seed).sample(codes, min(args.sample, len(codes))))
    rows = []
    disagreements = 0
    for code in codes:
        rule = ca.eca(code)
        row = {"rule": code, "value": _property(args.property, rule, args.state_budget)}
        if args.oracle:
            row["oracle"] = _ORACLES[args.property](rule)
            row["agree"] = row["oracle"] == row["value"]
            disagreements += not row["agree"]
        rows.append(row)
    summary = {"property": args.property, "rules": len(rows)}
    if args.oracle:
        summary["disagreements"] = disagreements
    _emit({"rows": rows, "summary": summary}, args)
    return EXIT_FALSE if disagreements else EXIT_TRUE


def build_parser():
    parser = argparse.ArgumentParser(prog="caphase", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state-budget", type=int, default=au.DEFAULT_STATE_BUDGET, metavar="N")
    common.add_argument("--json", metavar="PATH", help="also write the JSON document here")
    common.add_argument("--text", action="store_true", help="print a plain-text report instead")
    common.add_argument("--timing", action="store_true", help="include wall-clock times")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="decide a sentence")
    check.add_argument("--rule", required=True)
    check.add_argument("--formula")
    check.add_argument("--formula-file")
    check.add_argument("--pred", action="append", metavar="NAME=FILE")
    check.set_defaults(run=cmd_check)

    props = sub.add_parser("props", parents=[common], help="preset property report")
    props.add_argument("rule_spec", nargs="?")
    props.add_argument("--rule")
    props.add_argument("--max-cycle", type=int, default=2, metavar="K")
    props.add_argument("--exact-cycles", action=argparse.BooleanOptionalAction, default=True)
    props.set_defaults(run=cmd_props)

    sweep = sub.add_parser("sweep", parents=[common], help="one property over elementary rules")
    sweep.add_argument("range", help="e.g. 0..255")
    sweep.add_argument("property", choices=PROPERTIES)
    sweep.add_argument("--oracle", action="store_true")
    sweep.add_argument("--sample", type=int, metavar="N", help="random subset of the range")
    sweep.add_argument("--seed", type=int, default=0)
    sweep.set_defaults(run=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_TRUE
    try:
        if args.state_budget < 1:
            raise ValueError("--state-budget must be at least 1")
        return args.run(args)
    except (ValueError, OSError, au.ResourceLimit, RecursionError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, indent=2))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
