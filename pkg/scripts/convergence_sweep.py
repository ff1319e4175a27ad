#!/usr/bin/env python3
"""Operator-error convergence sweeps for the built-in function family.

Writes one CSV per (function, operator) pair into the output directory,
using the same columns as `slicefock converge`.
"""

import argparse
import pathlib
import sys

from slicefock.cli import main as cli_main

FUNCTIONS = ["exp", "gauss:0.25", "mono:6"]
OPERATORS = ["taylor", "fejer", "vdp", "jackson"]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="sweeps")
    ap.add_argument("--n-list", default="2,4,8,16,32")
    ap.add_argument("--p", default="2")
    ap.add_argument("--alpha", default="1")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for fn in FUNCTIONS:
        for op in OPERATORS:
            path = out / f"{fn.replace(':', '_')}__{op}.csv"
            rc = cli_main([
                "converge", "--fn", fn, "--operator", op,
                "--n-list", args.n_list, "--p", args.p, "--alpha", args.alpha,
                "--out", str(path),
            ])
            if rc != 0:
                print(f"sweep failed for {fn} / {op}", file=sys.stderr)
                return rc
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
