"""Randomized presentation-independence sweep over the supported towers."""
import argparse
import time
from collections import Counter

from pfq.fields import char2_rational, prime_field, rationals
from pfq.invariant import invariance_sweep
from pfq.oracles import SearchBudget

TOWERS = {
    "Q": rationals,
    "QL": lambda: rationals().laurent_ext("x", "y"),
    "F5L": lambda: prime_field(5).laurent_ext("x", "y"),
    "F2": lambda: char2_rational("x", "y"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--towers", nargs="+", default=["Q", "F5L", "F2"], choices=sorted(TOWERS))
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--search-degree", type=int, default=3)
    ap.add_argument("--search-max", type=int, default=100000)
    args = ap.parse_args()
    budget = SearchBudget(max_total_degree=args.search_degree, max_candidates=args.search_max)

    for name in args.towers:
        t0 = time.perf_counter()
        reps = invariance_sweep(TOWERS[name](), args.count, args.seed, budget)
        c = Counter(r.decision.verdict.value for r in reps)
        print(f"{name:4s} yes={c['yes']:4d} no={c['no']:3d} unknown={c['unknown']:3d}  {time.perf_counter() - t0:7.2f}s")
        for r in reps:
            if r.decision.no:
                print(f"  COUNTEREXAMPLE {r.before} vs {r.after}")


if __name__ == "__main__":
    main()
