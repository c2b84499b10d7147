#!/usr/bin/env python3
"""Fetch the classic monthly Zurich sunspot series (1749-1983, 2820 points).

Development tooling, not a library dependency: downloads the widely
mirrored ``monthly-sunspots.csv`` (Month, Sunspots columns), validates it
against well-known landmarks of that series, and writes it to
``data/sunspot_monthly.csv`` where the benchmark configs and the
acceptance tests expect it.

Usage:
    python3 scripts/fetch_sunspots.py [--out data/sunspot_monthly.csv]
    python3 scripts/fetch_sunspots.py --from-file /path/to/monthly-sunspots.csv
"""

import argparse
import csv
import io
import os
import sys
import urllib.request

URLS = [
    "https://raw.githubusercontent.com/jbrownlee/Datasets/master/monthly-sunspots.csv",
]

EXPECTED_POINTS = 2820
FIRST_VALUE = 58.0       # January 1749
MAX_VALUE = 253.8        # October 1957
MEAN_RANGE = (45.0, 58.0)


def parse_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    header = [c.strip().strip('"') for c in rows[0]]
    if "Sunspots" not in header:
        raise SystemExit(f"unexpected header {header}; need a 'Sunspots' column")
    idx = header.index("Sunspots")
    months, values = [], []
    for r in rows[1:]:
        months.append(r[0].strip().strip('"'))
        values.append(float(r[idx]))
    return months, values


def validate(values) -> None:
    n = len(values)
    if n != EXPECTED_POINTS:
        raise SystemExit(f"expected {EXPECTED_POINTS} monthly values, got {n}")
    if values[0] != FIRST_VALUE:
        raise SystemExit(f"first value {values[0]} != {FIRST_VALUE} (Jan 1749)")
    if max(values) != MAX_VALUE:
        raise SystemExit(f"max value {max(values)} != {MAX_VALUE} (Oct 1957)")
    if min(values) < 0.0:
        raise SystemExit("negative sunspot count")
    mean = sum(values) / n
    if not MEAN_RANGE[0] <= mean <= MEAN_RANGE[1]:
        raise SystemExit(f"series mean {mean:.2f} outside plausible range {MEAN_RANGE}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/sunspot_monthly.csv")
    parser.add_argument("--from-file", default=None,
                        help="use a local copy instead of downloading")
    args = parser.parse_args()

    if args.from_file:
        with open(args.from_file, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = None
        for url in URLS:
            try:
                print(f"fetching {url} ...")
                with urllib.request.urlopen(url, timeout=60) as resp:
                    text = resp.read().decode("utf-8")
                break
            except OSError as exc:
                print(f"  failed: {exc}", file=sys.stderr)
        if text is None:
            raise SystemExit(
                "download failed; obtain monthly-sunspots.csv manually and rerun "
                "with --from-file"
            )

    months, values = parse_csv(text)
    validate(values)

    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Month", "Sunspots"])
        for m, v in zip(months, values):
            writer.writerow([m, repr(v)])
    print(f"wrote {len(values)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
