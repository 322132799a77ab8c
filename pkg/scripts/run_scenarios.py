"""Run every shipped scenario file and print one summary line per file."""
import argparse
import json
import sys
import time
from importlib.resources import files

from pfq.cli.runner import exit_code, run, strip_timing
from pfq.cli.syntax import parse
from pfq.oracles import SearchBudget


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write all reports (timing stripped) to this file")
    args = ap.parse_args()

    reports, worst = {}, 0
    for path in sorted(files("pfq").joinpath("scenarios").iterdir()):
        if not path.name.endswith(".pfq"):
            continue
        t0 = time.perf_counter()
        rep = run(parse(path.read_text()), SearchBudget(), args.seed)
        s = rep["summary"]
        code = exit_code(rep)
        worst = max(worst, code)
        print(f"{path.name:24s} {s['passed']:3d} passed {s['failed']:2d} failed {s['errors']:2d} errors  {time.perf_counter() - t0:6.2f}s")
        reports[path.name] = strip_timing(rep)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(reports, fh, indent=2)
    return worst


if __name__ == "__main__":
    sys.exit(main())
