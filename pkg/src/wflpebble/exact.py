"""Exhaustive pebbling oracle for small graphs.

``is_solvable`` runs a memoized depth-first search over pebbling moves.
``pebbling_number_target`` enumerates configurations size by size.
``lemma1_check`` confirms that no unsolvable configuration outweighs any strategy.
"""

from __future__ import annotations

import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .certificate import Certificate, Configuration, config_weight, require_valid, total_weight, wfl_ratio
from .graph import Graph, distance_row


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveLimits:
    max_states: int = 5_000_000
    max_total_pebbles: int = 64
    max_vertices: int = 14
    # cap on the antichain of maximal unsolvable states used for dominance pruning
    max_antichain: int = 1_000_000

    def __post_init__(self):
        for name in ("max_states", "max_total_pebbles", "max_vertices", "max_antichain"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ExactResult:
    target: int
    pi: int
    witness_unsolvable: Configuration
    exhaustive: bool = True
    states_visited: int = 0

    def __post_init__(self):
        if self.witness_unsolvable.size != self.pi - 1:
            raise AssertionError("witness size must be pi - 1")


class _Solver:
    """Solvability search towards one target, with a memo shared across queries."""

    def __init__(self, g: Graph, r: int, limits: SolveLimits):
        if g.n > limits.max_vertices:
            raise BudgetExceeded(f"{g.n} vertices exceed max_vertices={limits.max_vertices}")
        self.g, self.r, self.limits = g, r, limits
        self.dist = distance_row(g, r)
        self.e = max(self.dist)
        # potential sum C(v) 2^(e - d(v)) never grows under a move; reaching r needs 2^e
        self.pot = [2 ** (self.e - d) for d in self.dist]
        self.need = 2**self.e
        self.thresh = [2**d for d in self.dist]
        # try moves towards the target first
        self.moves = [
            (v, tuple(sorted(g.adj[v], key=lambda u: (self.dist[u], u)))) for v in sorted(range(g.n), key=lambda v: (self.dist[v], v))
        ]
        self.memo: dict[tuple[int, ...], bool] = {}
        self.failed: list[tuple[int, ...]] = []  # antichain of maximal unsolvable states

    def _dominated(self, s: tuple[int, ...]) -> bool:
        return any(all(a <= b for a, b in zip(s, f)) for f in self.failed)

    def _record_failure(self, s: tuple[int, ...]) -> None:
        if len(self.failed) >= self.limits.max_antichain:
            return
        self.failed = [f for f in self.failed if not all(a <= b for a, b in zip(f, s))]
        self.failed.append(s)

    def solvable(self, s: tuple[int, ...]) -> bool:
        if sum(s) > self.limits.max_total_pebbles:
            raise BudgetExceeded(f"{sum(s)} pebbles exceed max_total_pebbles={self.limits.max_total_pebbles}")
        ans = self._solve(s)
        if not ans:
            self._record_failure(s)
        return ans

    def _solve(self, s: tuple[int, ...]) -> bool:
        if s[self.r]:
            return True
        hit = self.memo.get(s)
        if hit is not None:
            return hit
        if any(c >= t for c, t in zip(s, self.thresh)):
            return True
        if sum(c * p for c, p in zip(s, self.pot)) < self.need:
            return False
        if self.failed and self._dominated(s):
            return False
        if len(self.memo) >= self.limits.max_states:
            raise BudgetExceeded(f"more than {self.limits.max_states} states visited")
        ans = False
        lst = list(s)
        for v, nbrs in self.moves:
            if lst[v] < 2:
                continue
            lst[v] -= 2
            for u in nbrs:
                lst[u] += 1
                ok = self._solve(tuple(lst))
                lst[u] -= 1
                if ok:
                    ans = True
                    break
            lst[v] += 2
            if ans:
                break
        self.memo[s] = ans
        return ans


def _check_inputs(g: Graph, counts: tuple[int, ...], r: int) -> None:
    if len(counts) != g.n:
        raise ValueError(f"configuration has {len(counts)} entries, graph has {g.n} vertices")
    if not 0 <= r < g.n:
        raise ValueError(f"target {r} out of range")


def is_solvable(g: Graph, conf: Configuration | Iterable[int], r: int, limits: SolveLimits | None = None) -> bool:
    counts = conf.counts if isinstance(conf, Configuration) else tuple(conf)
    _check_inputs(g, counts, r)
    if any(c < 0 for c in counts):
        raise ValueError("pebble counts must be non-negative")
    if counts[r]:
        return True
    return _Solver(g, r, limits or SolveLimits()).solvable(counts)


# ---------------------------------------------------------------- enumeration


def compositions_colex(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ways to put ``total`` pebbles in ``parts`` slots, in colexicographic order.

    The last slot varies slowest, so ``(t, 0, ..., 0)`` comes first.
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for head in compositions_colex(total - last, parts - 1):
            yield head + (last,)


def _configurations(g: Graph, r: int, t: int, last_value: int | None = None) -> Iterator[tuple[int, ...]]:
    """Size-``t`` configurations with nothing on ``r``, in colex order over the other vertices."""
    others = [v for v in range(g.n) if v != r]
    if last_value is None:
        gen = compositions_colex(t, len(others))
    else:
        gen = (h + (last_value,) for h in compositions_colex(t - last_value, len(others) - 1))
    for comp in gen:
        vec = [0] * g.n
        for v, c in zip(others, comp):
            vec[v] = c
        yield tuple(vec)


def _first_unsolvable(solver: _Solver, g: Graph, r: int, t: int, last_value: int | None = None) -> tuple[int, ...] | None:
    for conf in _configurations(g, r, t, last_value):
        if not solver.solvable(conf):
            return conf
    return None


def _chunk_worker(args) -> tuple[int, tuple[int, ...] | None, int]:
    g, r, t, last, limits = args
    solver = _Solver(g, r, limits)
    return last, _first_unsolvable(solver, g, r, t, last), len(solver.memo)


def _first_unsolvable_parallel(g: Graph, r: int, t: int, limits: SolveLimits, jobs: int) -> tuple[tuple[int, ...] | None, int]:
    # chunks are the values of the slowest colex coordinate, so the answer is the
    # hit from the smallest chunk index regardless of completion order
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_chunk_worker, [(g, r, t, last, limits) for last in range(t + 1)]))
    hits = sorted((last, conf) for last, conf, _ in results if conf is not None)
    return (hits[0][1] if hits else None), sum(n for _, _, n in results)


def pebbling_number_target(g: Graph, r: int, limits: SolveLimits | None = None, jobs: int = 1) -> ExactResult:
    """Exact pi(G, r).

    Start from the sizes already known to admit an unsolvable configuration.
    Go up until every configuration of some size ``t`` is solvable; then pi = t.
    The witness is the colex-first unsolvable configuration of size ``pi - 1``.
    """
    limits = limits or SolveLimits()
    solver = _Solver(g, r, limits)
    if g.n == 1:
        raise ValueError("pebbling needs at least two vertices")
    # one pebble on every other vertex, or 2^e - 1 on a peripheral vertex, cannot reach r
    t = max(g.n, 2**solver.e) - 1
    visited = 0

    def first_bad(size: int):
        nonlocal visited
        if size > limits.max_total_pebbles:
            raise BudgetExceeded(f"size {size} exceeds max_total_pebbles={limits.max_total_pebbles}")
        if jobs > 1:
            conf, n = _first_unsolvable_parallel(g, r, size, limits, jobs)
            visited += n
            return conf
        return _first_unsolvable(solver, g, r, size)

    witness = None
    while True:
        bad = first_bad(t + 1)
        if bad is None:
            break
        witness = bad
        t += 1
    if witness is None:
        witness = first_bad(t)
        if witness is None:  # pragma: no cover - the starting size is unsolvable by construction
            raise AssertionError("known unsolvable size turned out solvable")
    return ExactResult(r, t + 1, Configuration(witness), True, visited + len(solver.memo))


def pebbling_number(
    g: Graph, limits: SolveLimits | None = None, targets: Iterable[int] | None = None, jobs: int = 1
) -> int:
    ts = range(g.n) if targets is None else list(targets)
    return max(pebbling_number_target(g, r, limits, jobs).pi for r in ts)


# ---------------------------------------------------------------- weight-function lemma check


@dataclass
class Lemma1Report:
    target: int
    pi: int | None
    mode: str  # "exhaustive" or "sampled"
    configurations_checked: int = 0
    unsolvable_checked: int = 0
    violations: list[tuple[int, Configuration]] = field(default_factory=list)
    tightest_ratio: Fraction = Fraction(0)
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_conf(rep: Lemma1Report, cert: Certificate, totals: list[Fraction], conf: tuple[int, ...]) -> None:
    rep.unsolvable_checked += 1
    for i, (s, tw) in enumerate(zip(cert.strategies, totals)):
        cw = config_weight(s, conf)
        if cw > tw:
            rep.violations.append((i, Configuration(conf)))
        if tw > 0 and cw / tw > rep.tightest_ratio:
            rep.tightest_ratio = cw / tw


def lemma1_check(
    cert: Certificate,
    limits: SolveLimits | None = None,
    samples: int | None = None,
    rng_seed: int | None = None,
) -> Lemma1Report:
    """Check ``config_weight(T, C) <= total_weight(T)`` over unsolvable configurations ``C``.

    Exhaustive mode covers every unsolvable configuration of size below pi(G, r).
    If that is over budget, or ``samples`` is given, random configurations are drawn instead.
    """
    require_valid(cert)
    limits = limits or SolveLimits()
    g, r = cert.graph, cert.root
    totals = [total_weight(s) for s in cert.strategies]
    note = ""
    if samples is None:
        try:
            pi = pebbling_number_target(g, r, limits).pi
            solver = _Solver(g, r, limits)
            rep = Lemma1Report(r, pi, "exhaustive")
            for size in range(pi):
                for conf in _configurations(g, r, size):
                    rep.configurations_checked += 1
                    if not solver.solvable(conf):
                        _check_conf(rep, cert, totals, conf)
            return rep
        except BudgetExceeded as exc:
            note = f"exhaustive check over budget ({exc}); sampled instead"
            samples = 10_000
            print(note, file=sys.stderr)
    if rng_seed is None:
        raise ValueError("sampled mode needs an explicit rng_seed")
    rng = random.Random(rng_seed)
    bound = math.floor(wfl_ratio(cert))  # unsolvable configurations never exceed this size
    rep = Lemma1Report(r, None, "sampled", note=note)
    solver = _Solver(g, r, limits)
    others = [v for v in range(g.n) if v != r]
    for _ in range(samples):
        size = rng.randint(0, bound)
        vec = [0] * g.n
        for _ in range(size):
            vec[rng.choice(others)] += 1
        conf = tuple(vec)
        rep.configurations_checked += 1
        try:
            if solver.solvable(conf):
                continue
        except BudgetExceeded:
            solver = _Solver(g, r, limits)
            continue
        _check_conf(rep, cert, totals, conf)
    return rep

