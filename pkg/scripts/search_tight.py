"""Search for the smallest terms whose flow number is exactly 6."""

import argparse
import time

from signed_flow.census import find_tight
from signed_flow.io import format_flow
from signed_flow.oracle import oracle_flow
from signed_flow.sp import compile


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=10)
    ap.add_argument("--limit", type=int, default=1)
    ap.add_argument("--show-flow", action="store_true", help="print the 6-flow of each witness")
    args = ap.parse_args()

    start = time.perf_counter()
    hits = find_tight(args.max_edges, args.limit)
    elapsed = time.perf_counter() - start
    if not hits:
        print(f"no flow-number-6 term with <= {args.max_edges} edges ({elapsed:.0f}s)")
        return
    for w in hits:
        status = "confirmed" if w.confirmed else "NOT confirmed"
        print(f"{w.term}  edges={w.edges}  6-flow={w.has_6_flow}  5-flow={w.has_5_flow}  {status}")
        if args.show_flow:
            g = compile(w.term).closed()
            print(format_flow(g, oracle_flow(g, 6).witness))
    print(f"scanned {hits[-1].scanned} terms in {elapsed:.0f}s")


if __name__ == "__main__":
    main()
