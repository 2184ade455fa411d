"""Exact pebbling numbers on the small family graphs, next to the certificate bounds.

Covers Petersen, Q_2..Q_3 and the Flower snark J_3 (all twelve vertices by default),
and reports the sandwich max{n, 2^e(r)} <= pi(G, r) <= floor(lambda) + 1 per target.
"""

import argparse
import math
import time

from wflpebble.bounds import theorem1_lower_bound
from wflpebble.catalog import UnsupportedTarget, paper_certificate
from wflpebble.certificate import wfl_ratio
from wflpebble.exact import SolveLimits, pebbling_number_target
from wflpebble.families import by_name
from wflpebble.graph import eccentricity
from wflpebble.heuristic import run_heuristic


def best_lambda(fam, r):
    lam = run_heuristic(fam.graph, r).lam
    try:
        lam = min(lam, wfl_ratio(paper_certificate(fam.family, fam.param, fam.graph.label(r))))
    except UnsupportedTarget:
        pass
    return lam


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("graphs", nargs="*", default=["petersen", "q2", "q3", "flower3"])
    ap.add_argument("--class-targets", action="store_true", help="only the family representatives")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--max-states", type=int, default=20_000_000)
    args = ap.parse_args()
    limits = SolveLimits(max_states=args.max_states)
    print("graph\ttarget\tlower\tpi\tlambda_lower\tlambda\tpi_upper\tseconds")
    for name in args.graphs:
        fam = by_name(name)
        g = fam.graph
        targets = [g.vid(t) for t in fam.target_classes] if args.class_targets else range(g.n)
        best = 0
        for r in targets:
            t0 = time.perf_counter()
            pi = pebbling_number_target(g, r, limits, jobs=args.jobs).pi
            dt = time.perf_counter() - t0
            lam = best_lambda(fam, r)
            lower = max(g.n, 2 ** eccentricity(g, r))
            assert lower <= pi <= math.floor(lam) + 1, (name, g.label(r))
            best = max(best, pi)
            print(f"{g.name}\t{g.label(r)}\t{lower}\t{pi}\t{theorem1_lower_bound(g, r)}\t{lam}\t{math.floor(lam) + 1}\t{dt:.2f}")
        print(f"# pi({g.name}) over the listed targets = {best}")


if __name__ == "__main__":
    main()
