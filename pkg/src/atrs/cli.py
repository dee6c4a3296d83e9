"""Command line interface.

Subcommands: uncurry, rewrite, dh, dc, check-tmi, search-tmi, verify.
Exit codes: 0 success or property holds, 1 property refuted or check
failed, 2 resources exhausted or result undecided, 3 input error.  All
output is deterministically ordered; --json switches to a JSON report
of the shape {"command", "status", "data"}.
"""

from __future__ import annotations

import argparse
import json
import sys

from .complexity import ComplexityTable, dc_relative_table, dc_table
from .oracles import (
    VerificationReport,
    verify_nf_preservation,
    verify_rightmost_simulation,
    verify_subterm_commutation,
    verify_uncurried_step,
)
from .parsing import (
    InputProblem,
    ParseError,
    format_rule,
    format_term,
    format_tmi,
    format_trs,
    parse_term,
    parse_tmi,
    parse_trs,
)
from .rewriting import (
    Finished,
    FuelExhausted,
    LoopDetected,
    LoopWitness,
    StrategyKind,
    detect_innermost_nontermination,
    normalize,
    redexes,
    derivation_height,
    successors,
)
from .terms import Position, Term
from .tmi import (
    InterpretationError,
    SearchBudgetExhausted,
    check_tmi,
    search_tmi,
)
from .uncurrying import TransformError, detect_atrs, transform

_STRATEGIES = {
    "full": StrategyKind.FULL,
    "innermost": StrategyKind.INNERMOST,
    "ri": StrategyKind.RIGHTMOST_INNERMOST,
}

_EMIT_ORDER = ("input", "eta", "u", "uncurried", "eta-uncurried", "combined")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse usage failures to exit code 3 instead of its default 2
    def error(self, message):
        raise _UsageError(message)


def _pos(p: Position) -> str:
    return "root" if not p else ".".join(str(i) for i in p)


def _witness_lines(witness: LoopWitness) -> list[str]:
    out = [f"start: {format_term(witness.start)}"]
    for st in witness.trace:
        out.append(
            f"  -> {format_term(st.result)}"
            f"  (rule {st.rule_index + 1} at {_pos(st.position)})"
        )
    return out


def _witness_data(witness: LoopWitness) -> dict:
    return {
        "start": format_term(witness.start),
        "trace": [
            {
                "position": list(st.position),
                "rule": st.rule_index + 1,
                "result": format_term(st.result),
            }
            for st in witness.trace
        ],
    }


def _emit(args, status: str, data: dict, lines: list[str]) -> None:
    if args.json:
        report = {"command": args.command, "status": status, "data": data}
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _load_problem(path: str) -> InputProblem:
    with open(path, encoding="utf-8") as handle:
        problem = parse_trs(handle.read(), origin=path)
    for warning in problem.warnings:
        print(f"warning: {path}: {warning}", file=sys.stderr)
    return problem


def _term_argument(problem: InputProblem, text: str) -> Term:
    arities = {s.name: s.arity for s in problem.trs.signature}
    return parse_term(text, problem.declared_vars, arities)


def _cmd_uncurry(args) -> int:
    problem = _load_problem(args.file)
    result = transform(problem.trs, app_hint=args.app or problem.app_hint)
    ctx = result.context
    named = {
        "input": problem.trs,
        "eta": result.eta,
        "u": result.u_rules,
        "uncurried": result.uncurried,
        "eta-uncurried": result.uncurried_eta,
        "combined": result.combined,
    }
    wanted = _EMIT_ORDER if args.emit == "all" else (args.emit,)
    lines: list[str] = []
    if args.show_arities:
        for name in ctx.constant_order:
            lines.append(f"aa({name}) = {ctx.aa[name]}")
    for name in wanted:
        if args.emit == "all":
            lines.append(f"== {name} ==")
        lines.extend(format_trs(named[name]).splitlines())
    data = {
        "arities": {name: ctx.aa[name] for name in ctx.constant_order},
        "systems": {
            name: [format_rule(r) for r in named[name].rules] for name in wanted
        },
    }
    _emit(args, "ok", data, lines)
    return 0


def _cmd_rewrite(args) -> int:
    problem = _load_problem(args.file)
    trs = problem.trs
    kind = _STRATEGIES[args.strategy]
    t = _term_argument(problem, args.term)
    if args.normalize:
        outcome = normalize(trs, t, kind, args.fuel)
        if isinstance(outcome, Finished):
            _emit(args, "ok", {"normal_form": format_term(outcome.value)},
                  [format_term(outcome.value)])
            return 0
        if isinstance(outcome, LoopDetected):
            _emit(args, "loop", {"witness": _witness_data(outcome.witness)},
                  ["loop detected"] + _witness_lines(outcome.witness))
            return 1
        _emit(args, "fuel-exhausted", {"fuel": args.fuel},
              [f"fuel exhausted after {args.fuel} steps"])
        return 2
    if args.steps is not None:
        trace = [format_term(t)]
        current = t
        for _ in range(args.steps):
            steps = redexes(trs, current, kind)
            if not steps:
                break
            current = steps[0].result
            trace.append(f"-> {format_term(current)}")
        _emit(args, "ok", {"trace": trace}, trace)
        return 0
    result = [format_term(u) for u in successors(trs, t, kind)]
    _emit(args, "ok", {"successors": result}, result or ["normal form"])
    return 0


def _cmd_dh(args) -> int:
    problem = _load_problem(args.file)
    kind = _STRATEGIES[args.strategy]
    t = _term_argument(problem, args.term)
    outcome = derivation_height(problem.trs, t, kind, args.fuel)
    if isinstance(outcome, Finished):
        _emit(args, "ok", {"dh": outcome.value}, [f"dh = {outcome.value}"])
        return 0
    if isinstance(outcome, LoopDetected):
        _emit(args, "loop", {"witness": _witness_data(outcome.witness)},
              ["loop detected, height undefined"] + _witness_lines(outcome.witness))
        return 1
    _emit(args, "fuel-exhausted", {"fuel": args.fuel},
          [f"fuel exhausted ({args.fuel} distinct terms explored)"])
    return 2


def _table_output(args, table: ComplexityTable) -> int:
    lines = [f"strategy: {table.strategy.value}"]
    data_rows = []
    for n in sorted(table.rows):
        row = table.rows[n]
        witness = format_term(row.witness) if row.witness is not None else "-"
        lines.append(f"dc({n}) = {row.value}   witness: {witness}")
        data_rows.append({"n": n, "value": row.value, "witness": witness})
    data: dict = {"strategy": table.strategy.value, "rows": data_rows}
    if table.loop is not None:
        lines.append(f"loop at size {table.incomplete_at}, dc undefined")
        lines.extend(_witness_lines(table.loop))
        data["incomplete_at"] = table.incomplete_at
        data["witness"] = _witness_data(table.loop)
        _emit(args, "loop", data, lines)
        return 1
    if table.incomplete_at is not None:
        lines.append(
            f"fuel exhausted at size {table.incomplete_at}"
            f" on {format_term(table.fuel_exhausted_on)}"
        )
        data["incomplete_at"] = table.incomplete_at
        _emit(args, "fuel-exhausted", data, lines)
        return 2
    _emit(args, "ok", data, lines)
    return 0


def _cmd_dc(args) -> int:
    problem = _load_problem(args.file)
    kind = _STRATEGIES[args.strategy]
    if args.relative_to is not None:
        if kind is not StrategyKind.FULL:
            raise _UsageError("relative tables are defined for --strategy full")
        modulo = _load_problem(args.relative_to)
        table = dc_relative_table(
            problem.trs, modulo.trs, args.max_size, args.fuel, args.max_vars
        )
    else:
        table = dc_table(problem.trs, args.max_size, kind, args.fuel, args.max_vars)
    return _table_output(args, table)


def _cmd_check_tmi(args) -> int:
    problem = _load_problem(args.file)
    with open(args.tmi, encoding="utf-8") as handle:
        interp = parse_tmi(handle.read(), problem.trs.signature)
    verdict = check_tmi(interp, problem.trs)
    if verdict.ok:
        degree = verdict.certificate.degree
        lines = ["monotone: yes", "triangular: yes"]
        for i, rule in enumerate(problem.trs.rules):
            lines.append(f"rule {i + 1}: {format_rule(rule)}   strictly oriented")
        lines.append(f"certificate: UpperBound({degree})")
        lines.append(f"dc(n) in O(n^{degree})")
        data = {
            "certificate": {"kind": "upper-bound", "degree": degree},
            "rules": [format_rule(r) for r in problem.trs.rules],
        }
        _emit(args, "ok", data, lines)
        return 0
    lines = [f"check failed: {verdict.failure}"]
    data = {"failure": verdict.failure}
    if verdict.failing_rule_index is not None:
        rule = problem.trs.rules[verdict.failing_rule_index]
        lines.append(f"rule {verdict.failing_rule_index + 1}: {format_rule(rule)}")
        data["rule"] = format_rule(rule)
    _emit(args, "refuted", data, lines)
    return 1


def _cmd_search_tmi(args) -> int:
    problem = _load_problem(args.file)
    try:
        interp = search_tmi(problem.trs, args.dim, args.max_coeff, args.budget)
    except SearchBudgetExhausted as e:
        _emit(args, "budget-exhausted", {"attempts": e.attempts}, [str(e)])
        return 2
    if interp is None:
        _emit(
            args,
            "refuted",
            {},
            [
                f"no certificate at dimension {args.dim}"
                f" with coefficients up to {args.max_coeff}"
            ],
        )
        return 1
    text = format_tmi(interp)
    _emit(args, "ok", {"degree": args.dim, "tmi": text}, text.splitlines())
    return 0


def _report_output(args, report: VerificationReport) -> int:
    lines = [
        f"property: {report.property_name}",
        f"instances checked: {report.instances_checked}",
    ]
    for f in report.failures:
        terms = " | ".join(format_term(t) for t in f.instance)
        lines.append(f"FAIL: expected {f.expected}; observed {f.observed}")
        lines.append(f"  instance: {terms}")
    if report.exhausted:
        lines.append(f"undecided instances: {len(report.exhausted)}")
    data = {
        "property": report.property_name,
        "instances_checked": report.instances_checked,
        "failures": [
            {
                "instance": [format_term(t) for t in f.instance],
                "expected": f.expected,
                "observed": f.observed,
            }
            for f in report.failures
        ],
        "exhausted": len(report.exhausted),
    }
    if report.failures:
        lines.append("refuted")
        _emit(args, "refuted", data, lines)
        return 1
    if report.vacuous:
        lines.append("vacuous: no instances checked")
        _emit(args, "vacuous", data, lines)
        return 2
    if report.exhausted:
        lines.append("undecided: some instances ran out of fuel")
        _emit(args, "undecided", data, lines)
        return 2
    lines.append("holds")
    _emit(args, "ok", data, lines)
    return 0


def _cmd_verify(args) -> int:
    problem = _load_problem(args.file)
    trs = problem.trs
    if args.property == "innermost-loop":
        witness = detect_innermost_nontermination(
            trs, args.max_size, args.fuel, args.max_vars
        )
        if witness is None:
            _emit(args, "ok", {"loop": None},
                  [f"no loop found up to size {args.max_size}"])
            return 0
        _emit(args, "loop", {"loop": _witness_data(witness)},
              ["innermost loop found"] + _witness_lines(witness))
        return 1
    if args.property == "uncurried-step":
        report = verify_uncurried_step(trs, args.max_size, args.fuel)
    elif args.property == "ri-sim":
        report = verify_rightmost_simulation(trs, args.max_size, args.fuel)
    elif args.property == "nf-preservation":
        report = verify_nf_preservation(trs, args.max_size, args.fuel)
    else:
        ctx = detect_atrs(trs, app_hint=problem.app_hint)
        report = verify_subterm_commutation(ctx, args.max_size, args.fuel)
    return _report_output(args, report)


def _build_parser() -> _Parser:
    parser = _Parser(prog="atrs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func, command=name)
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        return p

    p = command("uncurry", _cmd_uncurry, help="uncurry an applicative system")
    p.add_argument("file")
    p.add_argument("--app", help="name of the application symbol")
    p.add_argument(
        "--emit",
        choices=_EMIT_ORDER + ("all",),
        default="combined",
        help="which rule set to print",
    )
    p.add_argument("--show-arities", action="store_true",
                   help="print applicative arities first")

    p = command("rewrite", _cmd_rewrite, help="rewrite a term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="full")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--steps", type=int, help="apply this many first steps")
    group.add_argument("--normalize", action="store_true",
                       help="rewrite to normal form")
    p.add_argument("--fuel", type=int, default=10000)

    p = command("dh", _cmd_dh, help="derivation height of a term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="full")
    p.add_argument("--fuel", type=int, default=10000)

    p = command("dc", _cmd_dc, help="derivational complexity table")
    p.add_argument("file")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="full")
    p.add_argument("--relative-to", metavar="FILE2",
                   help="count only main-system steps, this system free")
    p.add_argument("--fuel", type=int, default=10000)
    p.add_argument("--max-vars", type=int, default=2)

    p = command("check-tmi", _cmd_check_tmi, help="check a matrix interpretation")
    p.add_argument("file")
    p.add_argument("--tmi", required=True, metavar="TMIFILE")

    p = command("search-tmi", _cmd_search_tmi, help="search for an interpretation")
    p.add_argument("file")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--max-coeff", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)

    p = command("verify", _cmd_verify, help="run a property oracle")
    p.add_argument("file")
    p.add_argument(
        "--property",
        required=True,
        choices=[
            "uncurried-step",
            "ri-sim",
            "nf-preservation",
            "subterm-commutation",
            "innermost-loop",
        ],
    )
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--fuel", type=int, default=10000)
    p.add_argument("--max-vars", type=int, default=2)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ParseError, TransformError, InterpretationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
