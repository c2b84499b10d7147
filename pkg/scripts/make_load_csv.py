#!/usr/bin/env python3
"""Write the deterministic synthetic 15-minute load series to a CSV.

Convenience for driving the CLI benchmark without external data:
    python3 scripts/make_load_csv.py [--out data/synthetic_load.csv]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from anarx.datasets import synthetic_load_series  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/synthetic_load.csv")
    parser.add_argument("--n", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    series = synthetic_load_series(n=args.n, seed=args.seed)
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("load_mw\n")
        for v in series.values:
            fh.write(repr(float(v)) + "\n")
    print(f"wrote {len(series)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
