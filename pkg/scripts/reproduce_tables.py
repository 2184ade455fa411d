"""Recompute the B_2 and Flower ratio tables from the built-in certificates and check them."""

import argparse
import sys

from wflpebble.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, action="append", help="Flower sizes (default 3 5 7 9 11 13 15)")
    ap.add_argument("--tsv", action="store_true")
    args = ap.parse_args()
    sizes = args.m or [3, 5, 7, 9, 11, 13, 15]
    argv = ["tables", "all", "--check"] + [x for m in sizes for x in ("--m", str(m))]
    if args.tsv:
        argv.append("--tsv")
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
