#!/usr/bin/env python3
"""Cross-validate stabilized limit verdicts against the extension model,
then sweep the separator search over omega pairs. Thin wrapper over the CLI
so the JSON artifacts are the same ones the command line produces."""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from markedgroups.cli import main as cli_main

PAIRS = [
    ("(012)", "(021)"),
    ("(012)", "(0)"),
    ("(021)", "(0)"),
    ("(012)", "(1)"),
    ("(012)", "(2)"),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--max-len", type=int, default=14)
    ap.add_argument("--seed", type=int, default=1729)
    ap.add_argument("--lmax", type=int, default=16)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    cc = outdir / "crosscheck.json"
    code = cli_main([
        "crosscheck", "--samples", str(args.samples), "--max-len", str(args.max_len),
        "--seed", str(args.seed), "--out", str(cc),
    ])
    print(f"crosscheck: exit {code} -> {cc}")

    worst = 0
    for om1, om2 in PAIRS:
        out = outdir / f"separate_{om1}_{om2}.json"
        rc = cli_main([
            "separate", "--omega1", om1, "--omega2", om2,
            "--lmax", str(args.lmax), "--out", str(out),
        ])
        print(f"separate {om1} vs {om2}: exit {rc} -> {out}")
        worst = max(worst, rc)
    sys.exit(max(code, worst))


if __name__ == "__main__":
    main()
