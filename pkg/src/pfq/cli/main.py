"""Command-line entry point: ``pfq run``, ``pfq fmt`` and ``pfq repl``."""
from __future__ import annotations

import argparse
import json
import sys

from pfq.cli.runner import Runner, exit_code, run
from pfq.cli.syntax import Parser, Script, ScriptSyntaxError, fmt_statement, parse, print_script
from pfq.oracles import SearchBudget


def _budget(args) -> SearchBudget:
    return SearchBudget(args.search_degree, args.search_height, args.search_max)


def _add_budget(p: argparse.ArgumentParser):
    d = SearchBudget()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--search-degree", type=int, default=d.max_total_degree)
    p.add_argument("--search-height", type=int, default=d.max_coeff_height)
    p.add_argument("--search-max", type=int, default=d.max_candidates)


def _summary_line(report: dict) -> str:
    s = report["summary"]
    return f"{s['statements']} statements, {s['passed']} passed, {s['failed']} failed, {s['errors']} errors"


def cmd_run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            script = parse(fh.read())
    except ScriptSyntaxError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(exc, file=sys.stderr)
        return 2
    report = run(script, _budget(args), args.seed)
    report["file"] = args.file
    if args.json:
        text = json.dumps(report, indent=2)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    for st in report["statements"]:
        if st["status"] in ("fail", "error"):
            print(f"{args.file}:{st['line']}: {st['status']}: {st['statement']}", file=sys.stderr)
            if "error" in st:
                print(f"    {st['error']}", file=sys.stderr)
            for c in st.get("expect", []):
                if not c["pass"]:
                    print(f"    expected {c['expect']}, got {c['got']}", file=sys.stderr)
    # keep stdout clean when it carries the JSON report
    print(_summary_line(report), file=sys.stderr if args.json == "-" else sys.stdout)
    return exit_code(report)


def cmd_fmt(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            sys.stdout.write(print_script(parse(fh.read())))
    except ScriptSyntaxError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_repl(args) -> int:
    parser = Parser()
    runner = Runner(_budget(args), args.seed)
    n = 0
    while True:
        try:
            line = input("pfq> ")
        except EOFError:
            print()
            return 0
        n += 1
        if line.strip() in ("quit", "exit"):
            return 0
        try:
            st = parser.parse_line(line, n)
        except ScriptSyntaxError as exc:
            print(f"error: {exc}")
            continue
        if st is None:
            continue
        rep = run(Script((st,)), runner.budget, runner.seed, runner)
        entry = rep["statements"][0]
        entry.pop("timing_ms", None)
        entry.pop("statement", None)
        print(fmt_statement(st))
        print(json.dumps(entry, indent=2))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="pfq", description="Pfister-form linkage invariants: scenario runner")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("file")
    p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    _add_budget(p)
    p.set_defaults(fn=cmd_run)
    p = sub.add_parser("fmt", help="print a scenario file in canonical form")
    p.add_argument("file")
    p.set_defaults(fn=cmd_fmt)
    p = sub.add_parser("repl", help="enter statements interactively")
    _add_budget(p)
    p.set_defaults(fn=cmd_repl)
    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
