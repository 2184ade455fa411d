"""Run the automated heuristic on every family target and compare with the built-in certificates."""

import argparse
import time

from wflpebble.bounds import theorem1_lower_bound
from wflpebble.catalog import UnsupportedTarget, paper_certificate
from wflpebble.certificate import wfl_ratio
from wflpebble.cli import fmt_q
from wflpebble.families import by_name
from wflpebble.heuristic import HeuristicOptions, run_heuristic


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("graphs", nargs="*", default=["petersen", "blanusa2", "blanusa1", "flower3", "flower5", "flower7", "q4"])
    ap.add_argument("--cap", type=int, default=100_000)
    ap.add_argument("--extra-path-length", type=int, default=2)
    ap.add_argument("--no-refine", action="store_true")
    args = ap.parse_args()
    opts = HeuristicOptions(path_combination_cap=args.cap, extra_path_length=args.extra_path_length)
    print("graph\ttarget\tlambda_lower\theuristic\tunrefined\treference\tseconds")
    for name in args.graphs:
        fam = by_name(name)
        g = fam.graph
        for t in fam.target_classes:
            r = g.vid(t)
            t0 = time.perf_counter()
            lam = run_heuristic(g, r, opts, do_refine=not args.no_refine).lam
            dt = time.perf_counter() - t0
            raw = run_heuristic(g, r, opts, do_refine=False).lam
            try:
                ref = fmt_q(wfl_ratio(paper_certificate(fam.family, fam.param, t)))
            except UnsupportedTarget:
                ref = "-"
            print(f"{g.name}\t{t}\t{fmt_q(theorem1_lower_bound(g, r))}\t{fmt_q(lam)}\t{fmt_q(raw)}\t{ref}\t{dt:.2f}")


if __name__ == "__main__":
    main()
