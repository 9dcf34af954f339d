"""Cross-check admissibility, the DP, the constructive strategy and the oracle
over every canonical term up to a size, writing one JSON line per term."""

import argparse
import json
import time
from dataclasses import asdict

from signed_flow.census import CensusConfig, census, summarize


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=6)
    ap.add_argument("--flow-numbers", action="store_true")
    ap.add_argument("--no-oracle", action="store_true")
    ap.add_argument("--out", default="census.jsonl")
    args = ap.parse_args()
    cfg = CensusConfig(max_edges=args.max_edges, oracle=not args.no_oracle, flow_numbers=args.flow_numbers)

    start = time.perf_counter()
    with open(args.out, "w") as fh:
        def stream():
            for rec in census(cfg):
                fh.write(rec.to_json() + "\n")
                yield rec

        summary = summarize(stream())
    out = {"config": asdict(cfg), "seconds": round(time.perf_counter() - start, 1), **summary.to_dict()}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
