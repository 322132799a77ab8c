"""The two vanishing results as randomized suites, with a JSON dump option."""
import argparse
import json
import time

from pfq.fields import char2_rational, prime_field
from pfq.invariant import thm41_instances, thm51_instances, verify_thm41_part1, verify_thm41_part2, verify_thm51
from pfq.oracles import SearchBudget


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write the harness reports here")
    args = ap.parse_args()
    budget = SearchBudget(max_total_degree=3)
    F2 = char2_rational("x", "y")
    F5L = prime_field(5).laurent_ext("x", "y")

    runs = {
        "char2 pairs, shared quadratic and bilinear factor": lambda: verify_thm41_part1(
            thm41_instances(args.count, args.seed, 1, (2, 3), F2), budget
        ),
        "char2 triples, common bilinear slot": lambda: verify_thm41_part1(
            thm41_instances(args.count // 2, args.seed + 500, 1, (2, 2, 3), F2), budget
        ),
        "char2 converse, one (k+1)-fold form": lambda: verify_thm41_part2(
            thm41_instances(args.count // 2, args.seed, 1, (2, 3), F2), budget
        ),
        "(k+1)-linked pairs over F5((x))((y))": lambda: verify_thm51(
            thm51_instances(2 * args.count, args.seed, (1, 2), F5L), budget
        ),
    }
    out = {}
    for label, fn in runs.items():
        t0 = time.perf_counter()
        js = fn().to_json()
        out[label] = js
        print(f"{label:48s} yes={js['yes']:3d} no={js['no']:2d} unknown={js['unknown']:2d}  {time.perf_counter() - t0:6.2f}s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=2)


if __name__ == "__main__":
    main()
