#!/usr/bin/env python3
"""Quantitative-estimate report: delayed-mean error against the
best-approximation bound, and smoothing-difference error against the
matching modulus of smoothness, for one function over a degree sweep."""

import argparse
import json

from slicefock.approx import verify_jackson, verify_vdp
from slicefock.cli import parse_function, parse_slice


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fn", default="exp")
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--slice", default="i")
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--n-list", default="4,8,16,32")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    f = parse_function(args.fn)
    unit = parse_slice(args.slice)
    reports = []
    for n in (int(t) for t in args.n_list.split(",")):
        vdp = verify_vdp(f, n, args.p, args.alpha, unit)
        jack = verify_jackson(f, n, args.m, args.p, args.alpha, unit)
        reports.append({"n": n, "delayed_mean": vdp.to_record(),
                        "smoothing_difference": jack.to_record()})
    payload = json.dumps(reports, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
