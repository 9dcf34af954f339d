"""Compare the constructed pseudoflow pairs with the exact boundary region
of small strings and necklaces."""

import argparse

from signed_flow.generators import all_necklaces, all_strings
from signed_flow.oracle import brute_boundary_pairs
from signed_flow.pseudoflow import I5, PseudoflowError, necklace_pseudoflow, string_pseudoflow
from signed_flow.sp import compile


def constructed(t, build):
    out = set()
    for a in I5:
        for b in I5:
            try:
                if build(t, a, b) is not None:
                    out.add((a, b))
            except PseudoflowError:
                pass
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-beta", type=int, default=3)
    args = ap.parse_args()
    for label, terms, build in (
        ("string", all_strings(args.max_beta), string_pseudoflow),
        ("necklace", all_necklaces(args.max_beta), necklace_pseudoflow),
    ):
        for t in terms:
            exact = {p for p in brute_boundary_pairs(compile(t), 6) if p[0] in I5 and p[1] in I5}
            made = constructed(t, build)
            extra = made - exact
            print(f"{label:8s} {str(t):40s} exact={len(exact):3d} built={len(made):3d} missing={len(exact - made):3d}"
                  + (f" UNSOUND={sorted(extra)}" if extra else ""))


if __name__ == "__main__":
    main()
