#!/usr/bin/env python3
"""Run the presentation-minimality pipeline over a small (n, m) grid in both
sequence variants and summarize the verdicts. The original recurrence is
expected to fail its difference-window clause for every m >= 2 (and m = 1);
the corrected one should pass everywhere."""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from markedgroups.circle_product import VARIANTS, verify_minimality


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=3)
    ap.add_argument("--mmax", type=int, default=3)
    ap.add_argument("--window", type=int, default=12)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    summary = []
    for variant in VARIANTS:
        for n in range(2, args.nmax + 1):
            for m in range(1, args.mmax + 1):
                rep = verify_minimality(n, m, args.window, variant=variant)
                name = f"minimality_{variant}_n{n}_m{m}.json"
                with open(outdir / name, "w") as fh:
                    json.dump(rep, fh, indent=2, sort_keys=True)
                    fh.write("\n")
                summary.append((variant, n, m, rep["verdict"]))
                print(f"{variant} n={n} m={m}: {rep['verdict']}")

    failed_corrected = [s for s in summary if s[0] == "corrected" and s[3] != "pass"]
    sys.exit(1 if failed_corrected else 0)


if __name__ == "__main__":
    main()
