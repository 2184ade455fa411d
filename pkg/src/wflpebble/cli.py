"""Command line front end: ``wflpebble <subcommand> ...``.

Every number printed is recomputed at invocation; the expected values below
are only consulted by ``tables --check``.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bounds import basic_bounds, bound_report, theorem1_lower_bound
from .certificate import (
    CertificateError,
    certificate_total,
    min_weight,
    parse_certificate,
    pebbling_upper_bound,
    resolve_graph,
    serialize_certificate,
    surplus_decomposition,
    validate_certificate,
    wfl_ratio,
)
from .exact import BudgetExceeded, SolveLimits, lemma1_check, pebbling_number_target
from .families import by_name
from .graph import Graph, GraphError, format_graph
from .heuristic import HeuristicError, HeuristicOptions, run_heuristic
from .catalog import UnsupportedTarget, covered_targets, paper_certificate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class MismatchAgainstExpected(Exception):
    pass


class FixtureMissing(Exception):
    pass


# ---------------------------------------------------------------- reference data

F = Fraction

# Values reported by earlier work on the same graphs, kept only for side-by-side comparison.
PRIOR_B2 = {"x_1": F(30), "x_2": F(31), "x_3": F(236, 7), "z_1": F(133, 5), "z_2": F(30), "z_3": F(32)}
PRIOR_FLOWER_SMALL = {
    3: {"x_0": F(64, 5), "v_0": F(64, 5), "z_0": F(64, 5)},
    5: {"x_0": F(146, 5), "v_0": F(146, 5), "z_0": F(146, 5)},
    7: {"x_0": F(284, 5), "v_0": F(278, 5), "z_0": F(60)},
}


def prior_flower(m: int, target: str) -> Fraction:
    if m in PRIOR_FLOWER_SMALL:
        return PRIOR_FLOWER_SMALL[m][target]
    k, p = (m - 1) // 2, 2 ** ((m - 1) // 2 + 2)
    return {
        "x_0": F(17, 10) * p + 2 * k - F(18, 5),
        "v_0": F(8, 5) * p + 2 * k - F(8, 5),
        "z_0": F(9, 5) * p + 2 * k - F(18, 5),
    }[target]


# Expected values for ``tables --check``.
EXPECTED = {
    "petersen": {"a_1": F(9)},
    "blanusa2": {"x_1": F(117, 4), "x_2": F(133, 5), "x_3": F(117, 4), "z_1": F(133, 5), "z_2": F(29), "z_3": F(136, 5)},
    "blanusa1": {"a_1": F(30), "b_1": F(26), "c_1": F(29), "d_1": F(141, 5), "e_1": F(29)},
}


def expected_flower(m: int) -> dict[str, Fraction]:
    if m == 3:
        return {"x_0": F(64, 5), "v_0": F(64, 5), "z_0": F(12)}
    k, p = (m - 1) // 2, 2 ** ((m - 1) // 2 + 2)
    return {
        "x_0": F(13, 10) * p + 6 * k - 5,
        "v_0": F(8, 5) * p + 2 * k - F(8, 5),
        "z_0": F(3, 2) * p + 2 * k - 2,
    }


# ---------------------------------------------------------------- formatting


def fmt_q(x: Fraction | int | None) -> str:
    """Exact decimal when the denominator is 2^a 5^b, otherwise ``p/q``."""
    if x is None:
        return "-"
    x = Fraction(x)
    q = x.denominator
    a = b = 0
    while q % 2 == 0:
        q //= 2
        a += 1
    while q % 5 == 0:
        q //= 5
        b += 1
    if q != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(a, b)
    if places == 0:
        return str(x.numerator)
    scaled = abs(x.numerator) * 10**places // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{str(frac).rjust(places, '0').rstrip('0')}"


def render(headers: list[str], rows: list[list[object]], fmt: str) -> str:
    def cell(c) -> str:
        if c is None:
            return "-"
        if isinstance(c, (Fraction, int)) and not isinstance(c, bool):
            return fmt_q(c)
        return str(c)

    cells = [[cell(c) for c in row] for row in rows]
    if fmt == "tsv":
        return "\n".join("\t".join(r) for r in [headers, *cells])
    if fmt == "records":
        return "\n".join(" ".join(f"{h}={c}" for h, c in zip(headers, r)) for r in cells)
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    line = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(headers), line(["-" * w for w in widths]), *(line(r) for r in cells)])


# ---------------------------------------------------------------- helpers


def load_graph(ref: str) -> tuple[Graph, tuple[str, ...] | None]:
    """A family name or a graph file; family graphs come with representative targets."""
    try:
        fam = by_name(ref)
        return fam.graph, fam.target_classes
    except KeyError:
        pass
    return resolve_graph(ref), None


def pick_targets(g: Graph, classes: tuple[str, ...] | None, args) -> list[int]:
    if getattr(args, "target", None):
        return [g.vid(t) for t in args.target]
    if getattr(args, "all_targets", False) or classes is None:
        return list(range(g.n))
    return [g.vid(t) for t in classes]


@dataclass(frozen=True)
class TableRow:
    graph: str
    target: str
    our_lambda: Fraction
    prior_lambda: Fraction | None
    thm1_lower: Fraction
    pi_upper: int

    def __post_init__(self):
        if self.pi_upper != math.floor(self.our_lambda) + 1:
            raise AssertionError("pi_upper must be floor(lambda) + 1")


def table_rows(family: str, param: int | None) -> list[TableRow]:
    fam = by_name(family if param is None else f"{family}{param}")
    g = fam.graph
    rows = []
    try:
        targets = covered_targets(family, param)
    except UnsupportedTarget as exc:
        raise FixtureMissing(str(exc)) from None
    for t in targets:
        c = paper_certificate(family, param, t)
        lam = wfl_ratio(c)
        if family == "blanusa2":
            prior = PRIOR_B2[t]
        elif family == "flower":
            prior = prior_flower(param, t)
        else:
            prior = None
        rows.append(TableRow(g.name, t, lam, prior, theorem1_lower_bound(g, g.vid(t)), math.floor(lam) + 1))
    return rows


# ---------------------------------------------------------------- subcommands


def cmd_gen(args) -> int:
    g, _ = load_graph(args.graph)
    text = format_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bounds(args) -> int:
    g, classes = load_graph(args.graph)
    lo, hi = basic_bounds(g)
    print(f"# {g.name}: n={g.n}, basic bounds {lo} <= pi <= {hi}")
    rows = []
    for r in pick_targets(g, classes, args):
        rep = bound_report(g, r)
        rows.append([
            g.label(r),
            rep.eccentricity,
            ",".join(map(str, rep.ring_profile)),
            "{" + ",".join(map(str, sorted(rep.i_sur))) + "}",
            "{" + ",".join(map(str, sorted(rep.i_no))) + "}",
            rep.lambda_lower_eq2,
            rep.basic_pi_lower,
            rep.basic_pi_upper,
        ])
    print(render(["target", "e", "rings", "I_sur", "I_no", "lambda_lower", "pi_lower", "pi_upper"], rows, args.fmt))
    return EXIT_OK


def cmd_heuristic(args) -> int:
    g, classes = load_graph(args.graph)
    opts = HeuristicOptions(
        path_combination_cap=args.cap,
        extra_path_length=args.extra_path_length,
        enable_weight_reduction=not args.no_refine,
        enable_path_replacement=not args.no_refine,
    )
    rows, reports = [], []
    for r in pick_targets(g, classes, args):
        rep = run_heuristic(g, r, opts, do_refine=not args.no_refine)
        reports.append(rep)
        c = rep.certificate
        rows.append([g.label(r), rep.omega_min_formula, min_weight(c), certificate_total(c), rep.lam, pebbling_upper_bound(c), theorem1_lower_bound(g, r)])
        if args.log_decisions:
            for line in rep.decisions_log:
                print(f"[{g.label(r)}] {line}", file=sys.stderr)
    print(render(["target", "omega_min_eq4", "omega_min", "total", "lambda", "pi_upper", "lambda_lower"], rows, args.fmt))
    if args.emit:
        if len(reports) != 1:
            print("--emit needs exactly one target", file=sys.stderr)
            return EXIT_USAGE
        Path(args.emit).write_text(serialize_certificate(reports[0].certificate, args.graph))
    return EXIT_OK


def cmd_validate(args) -> int:
    path = Path(args.certificate)
    cert = parse_certificate(path.read_text(), base_dir=path.parent)
    g, r = cert.graph, cert.root
    bad = validate_certificate(cert)
    for i, v in bad:
        print(f"T_{i + 1} {v}")
    if bad:
        print(f"INVALID: {len(bad)} violation(s)")
        return EXIT_FAIL
    rep = surplus_decomposition(cert)
    lower = theorem1_lower_bound(g, r)
    print(f"graph {g.name}  root {g.label(r)}  strategies {len(cert.strategies)}")
    print(f"total {fmt_q(certificate_total(cert))}  omega_min {fmt_q(rep.omega_min)}  lambda {fmt_q(rep.lam)}  pi <= {pebbling_upper_bound(cert)}")
    print(f"lambda lower bound {fmt_q(lower)}  gap {fmt_q(rep.lam - lower)}")
    if args.surplus:
        rows = [[g.label(v), s] for v, s in sorted(rep.per_vertex_surplus.items()) if s]
        print(render(["vertex", "surplus"], rows, args.fmt))
    return EXIT_OK


def _limits(args) -> SolveLimits:
    return SolveLimits(max_states=args.max_states, max_vertices=args.max_vertices)


def cmd_exact(args) -> int:
    g, classes = load_graph(args.graph)
    rows, best = [], 0
    for r in pick_targets(g, classes, args):
        res = pebbling_number_target(g, r, _limits(args), jobs=args.jobs)
        witness = " ".join(f"{g.label(v)}:{c}" for v, c in enumerate(res.witness_unsolvable.counts) if c)
        rows.append([g.label(r), res.pi, res.states_visited, witness])
        best = max(best, res.pi)
    print(render(["target", "pi", "states", "unsolvable_witness"], rows, args.fmt))
    print(f"# pi over these targets: {best}")
    return EXIT_OK


def cmd_lemma_check(args) -> int:
    path = Path(args.certificate)
    g = load_graph(args.graph)[0] if args.graph else None
    cert = parse_certificate(path.read_text(), graph=g, base_dir=path.parent)
    if args.samples is not None and args.rng_seed is None:
        print("--samples needs --rng-seed", file=sys.stderr)
        return EXIT_USAGE
    rep = lemma1_check(cert, _limits(args), samples=args.samples, rng_seed=args.rng_seed)
    print(
        f"mode {rep.mode}  pi {rep.pi if rep.pi is not None else '-'}  configurations {rep.configurations_checked}  "
        f"unsolvable {rep.unsolvable_checked}  violations {len(rep.violations)}  tightest {fmt_q(rep.tightest_ratio)}"
    )
    if rep.note:
        print(f"# {rep.note}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _selected(selector: str, ms: list[int]) -> list[tuple[str, int | None]]:
    s = selector.lower()
    out = []
    if s in ("petersen", "all"):
        out.append(("petersen", None))
    if s in ("b2", "blanusa2", "all"):
        out.append(("blanusa2", None))
    if s in ("b1", "blanusa1", "all"):
        out.append(("blanusa1", None))
    if s in ("flower", "all"):
        out += [("flower", m) for m in ms]
    if not out:
        raise KeyError(f"unknown selector {selector!r}")
    return out


def cmd_tables(args) -> int:
    status = EXIT_OK
    for family, param in _selected(args.selector, args.m or [3, 5, 7]):
        rows = table_rows(family, param)
        body = [[r.target, r.our_lambda, r.prior_lambda, r.thm1_lower, r.pi_upper] for r in rows]
        worst = max(rows, key=lambda r: r.our_lambda)
        prior = [r.prior_lambda for r in rows if r.prior_lambda is not None]
        body.append(["graph", worst.our_lambda, max(prior) if prior else None, max(r.thm1_lower for r in rows), worst.pi_upper])
        print(f"# {rows[0].graph}")
        print(render(["target", "lambda", "prior_lambda", "lambda_lower", "pi_upper"], body, args.fmt))
        if args.check:
            want = expected_flower(param) if family == "flower" else EXPECTED[family]
            for r in rows:
                if r.our_lambda != want[r.target]:
                    print(f"MISMATCH {rows[0].graph} {r.target}: got {fmt_q(r.our_lambda)}, expected {fmt_q(want[r.target])}")
                    status = EXIT_FAIL
    if args.check:
        print("check: " + ("ok" if status == EXIT_OK else "FAILED"))
    return status


def cmd_pipeline(args) -> int:
    g, classes = load_graph(args.graph)
    targets = pick_targets(g, classes, args)
    lo, hi = basic_bounds(g)
    print(f"# {g.name}: n={g.n}")
    print(f"basic bounds: {lo} <= pi <= {hi}")
    fam = None
    try:
        fam = by_name(args.graph)
    except KeyError:
        pass
    rows, status = [], EXIT_OK
    graph_lam = Fraction(0)
    for r in targets:
        lab = g.label(r)
        lower = theorem1_lower_bound(g, r)
        heur = run_heuristic(g, r).lam
        best = heur
        if fam is not None:
            try:
                best = min(best, wfl_ratio(paper_certificate(fam.family, fam.param, lab)))
            except UnsupportedTarget:
                pass
        cert_bound = math.floor(best) + 1
        graph_lam = max(graph_lam, best)
        exact = "skipped"
        if not args.no_exact and g.n <= args.max_vertices:
            try:
                pi = pebbling_number_target(g, r, _limits(args), jobs=args.jobs).pi
                exact = str(pi)
                if not lo <= pi <= cert_bound:
                    status = EXIT_FAIL
                    exact += " SANDWICH VIOLATED"
            except BudgetExceeded:
                exact = "budget"
        rows.append([lab, lower, heur, best, cert_bound, exact])
    print(render(["target", "lambda_lower", "heuristic_lambda", "best_lambda", "pi_upper", "exact_pi"], rows, args.fmt))
    print(f"graph: lambda <= {fmt_q(graph_lam)}, so pi <= {math.floor(graph_lam) + 1}")
    return status


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wflpebble", description="Weight Function Lemma bounds for graph pebbling.")
    sub = p.add_subparsers(dest="command", required=True)

    def out_opts(sp):
        sp.add_argument("--tsv", dest="fmt", action="store_const", const="tsv", help="tab-separated output")
        sp.add_argument("--format", dest="fmt", choices=["table", "tsv", "records"], help="output format")
        sp.set_defaults(fmt="table")

    def target_opts(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--target", action="append", help="target label (repeatable)")
        g.add_argument("--all-targets", action="store_true")
        g.add_argument("--class-targets", action="store_true", help="family representatives (default)")

    def limit_opts(sp):
        sp.add_argument("--max-states", type=int, default=5_000_000)
        sp.add_argument("--max-vertices", type=int, default=14)
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("gen", help="print a family graph in graph text format")
    sp.add_argument("graph")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bounds", help="ring-profile lower bounds per target")
    sp.add_argument("--graph", required=True)
    target_opts(sp)
    out_opts(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("heuristic", help="build certificates automatically")
    sp.add_argument("--graph", required=True)
    target_opts(sp)
    sp.add_argument("--cap", type=int, default=100_000, help="trunk combination budget")
    sp.add_argument("--extra-path-length", type=int, default=2)
    sp.add_argument("--no-refine", action="store_true")
    sp.add_argument("--emit", help="write the certificate to this file")
    sp.add_argument("--log-decisions", action="store_true")
    out_opts(sp)
    sp.set_defaults(func=cmd_heuristic)

    sp = sub.add_parser("validate", help="check a certificate file")
    sp.add_argument("certificate")
    sp.add_argument("--surplus", action="store_true", help="list non-zero per-vertex surplus")
    out_opts(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("exact", help="exact pebbling numbers by exhaustive search")
    sp.add_argument("--graph", required=True)
    target_opts(sp)
    limit_opts(sp)
    out_opts(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("lemma-check", help="check the weight inequality on unsolvable configurations")
    sp.add_argument("--graph")
    sp.add_argument("--certificate", required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="default")
    mode.add_argument("--samples", type=int)
    sp.add_argument("--rng-seed", type=int)
    limit_opts(sp)
    sp.set_defaults(func=cmd_lemma_check)

    sp = sub.add_parser("tables", help="evaluate the built-in certificates")
    sp.add_argument("selector", nargs="?", default="all", help="petersen, b2, b1, flower or all")
    sp.add_argument("--m", type=int, action="append", help="Flower size (repeatable; default 3 5 7)")
    sp.add_argument("--check", action="store_true", help="compare against expected values")
    out_opts(sp)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("pipeline", help="bounds, heuristic and (small graphs) exact value")
    sp.add_argument("--graph", required=True)
    target_opts(sp)
    sp.add_argument("--no-exact", action="store_true")
    limit_opts(sp)
    out_opts(sp)
    sp.set_defaults(func=cmd_pipeline)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (MismatchAgainstExpected, FixtureMissing) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GraphError, CertificateError, HeuristicError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
