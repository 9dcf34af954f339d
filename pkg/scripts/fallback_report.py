"""List the terms where the constructive strategy hands over to the DP."""

import argparse
from collections import Counter

from signed_flow.admissibility import admissible_fast
from signed_flow.engine import constructive_flow
from signed_flow.generators import enumerate_terms
from signed_flow.sp import compile


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=7)
    args = ap.parse_args()

    reasons: Counter = Counter()
    total = 0
    for t in enumerate_terms(args.max_edges):
        if not admissible_fast(compile(t).closed()):
            continue
        total += 1
        r = constructive_flow(t)
        for why in r.fallbacks:
            reasons[why.split(" [")[0]] += 1
            print(f"{t}: {why}")
    print(f"{total} admissible terms, {sum(reasons.values())} fallbacks")
    for why, n in reasons.most_common():
        print(f"  {n:6d}  {why}")


if __name__ == "__main__":
    main()
