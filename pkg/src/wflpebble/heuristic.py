"""Automated construction of WFL certificates.

The pipeline follows four steps.  One strategy per neighbour of the target.
The common minimum weight is predicted from distances to the peripheral
vertices.  Trunks are unions of shortest paths to the periphery with halving
weights.  Branches then lift every remaining vertex to that minimum.  Two
refinement moves (slack removal and path replacement) are applied afterwards
and only ever lower the WFL ratio.

Also here: the explicit tight certificate for hypercubes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .certificate import (
    ZERO,
    Certificate,
    Strategy,
    require_valid,
    surplus_decomposition,
    wfl_ratio,
)
from .families import InvalidParameter, cube
from .graph import (
    Graph,
    PathLimitExceeded,
    all_shortest_paths_avoiding,
    bfs_distances,
    paths_up_to_length,
)

log = logging.getLogger(__name__)


class HeuristicError(RuntimeError):
    pass


class PeripheralUnreachable(HeuristicError):
    pass


class CannotCover(HeuristicError):
    pass


class SearchBudgetExceeded(HeuristicError):
    """Raised internally when the trunk search space exceeds the cap; callers fall back to greedy."""


class ResourceLimit(HeuristicError):
    pass


@dataclass(frozen=True)
class HeuristicOptions:
    path_combination_cap: int = 100_000
    extra_path_length: int = 2
    enable_weight_reduction: bool = True
    enable_path_replacement: bool = True
    refine_passes: int = 10
    # how many of the lowest-surplus trunk combinations get the full fill+refine treatment
    trunk_candidates: int = 8

    def __post_init__(self):
        if self.path_combination_cap < 1:
            raise ValueError("path_combination_cap must be >= 1")
        if self.extra_path_length < 0:
            raise ValueError("extra_path_length must be >= 0")
        if self.refine_passes < 0:
            raise ValueError("refine_passes must be >= 0")
        if self.trunk_candidates < 1:
            raise ValueError("trunk_candidates must be >= 1")


@dataclass(frozen=True)
class HeuristicReport:
    certificate: Certificate
    omega_min_formula: Fraction
    p_min: frozenset[int]
    lam: Fraction
    per_vertex_surplus: dict[int, Fraction]
    decisions_log: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.lam != wfl_ratio(self.certificate):
            raise AssertionError("report lambda does not match its certificate")


# ---------------------------------------------------------------- mutable working trees


@dataclass
class _Tree:
    parent: dict[int, int]
    weight: dict[int, Fraction]

    def copy(self) -> "_Tree":
        return _Tree(dict(self.parent), dict(self.weight))

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for c, p in self.parent.items():
            out.setdefault(p, []).append(c)
        for lst in out.values():
            lst.sort()
        return out

    def order(self, root: int) -> list[int]:
        """Vertices top-down (root first)."""
        kids = self.children()
        out, stack = [], [root]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(kids.get(u, ())))
        return out

    def subtree(self, u: int) -> set[int]:
        kids = self.children()
        out, stack = set(), [u]
        while stack:
            x = stack.pop()
            out.add(x)
            stack.extend(kids.get(x, ()))
        return out


def _to_strategy(g: Graph, r: int, t: _Tree) -> Strategy:
    return Strategy(g, r, t.parent, {v: w for v, w in t.weight.items()})


def _from_strategy(s: Strategy) -> _Tree:
    return _Tree(dict(s.parent), {v: w for v, w in s.weight.items() if v != s.root})


def _combined(n: int, r: int, trees: list[_Tree]) -> list[Fraction]:
    acc = [ZERO] * n
    for t in trees:
        for v, w in t.weight.items():
            acc[v] += w
    acc[r] = ZERO
    return acc


def _ratio(n: int, r: int, trees: list[_Tree]) -> Fraction | None:
    W = _combined(n, r, trees)
    m = min(W[v] for v in range(n) if v != r)
    if m <= 0:
        return None
    return sum(W) / m


def _surplus(W: list[Fraction], r: int, level: Fraction) -> Fraction:
    return sum((w - level for v, w in enumerate(W) if v != r and w > level), ZERO)


# ---------------------------------------------------------------- steps 1-2


def min_weight_formula(g: Graph, r: int) -> tuple[Fraction, frozenset[int]]:
    """Predicted common minimum weight: the lightest peripheral vertex under trunk weights alone.

    A peripheral vertex cut off from a neighbour by removing ``r`` gets nothing
    from that neighbour's trunk (the 2^-inf term).  A neighbour that reaches no
    peripheral vertex at all has no trunk, and the construction does not apply.
    """
    dist_r = bfs_distances(g, r)
    e = max(dist_r.values())
    periph = sorted(v for v, d in dist_r.items() if d == e)
    per_nbr = [bfs_distances(g, v, {r}) for v in g.adj[r]]
    for v, d in zip(g.adj[r], per_nbr):
        if not any(u in d for u in periph):
            raise PeripheralUnreachable(f"no peripheral vertex reachable from {g.label(v)} once {g.label(r)} is removed")
    sums = {}
    for u in periph:
        sums[u] = sum((Fraction(2) ** (e - 1 - d[u]) for d in per_nbr if u in d), ZERO)
    best = min(sums.values())
    return best, frozenset(u for u, s in sums.items() if s == best)


# ---------------------------------------------------------------- step 3


def _trunk_tree(g: Graph, r: int, vj: int, verts: frozenset[int], e: int, dist: dict[int, int]) -> _Tree:
    parent, weight = {vj: r}, {}
    for x in sorted(verts):
        weight[x] = Fraction(2) ** (e - 1 - dist[x])
        if x != vj:
            # any predecessor inside the union is fine: all of them sit one level closer
            parent[x] = min(y for y in g.adj[x] if y in verts and dist.get(y) == dist[x] - 1)
    return _Tree(parent, weight)


def _first_shortest_path(g: Graph, u: int, v: int, removed: set[int]) -> tuple[int, ...]:
    from_v = bfs_distances(g, v, removed)
    path = [u]
    while path[-1] != v:
        last = path[-1]
        path.append(min(w for w in g.adj[last] if from_v.get(w) == from_v[last] - 1))
    return tuple(path)


def _trunk_vertex_sets(g: Graph, r: int, vj: int, periph: list[int], cap: int) -> list[frozenset[int]]:
    """Distinct vertex sets of shortest-path unions from ``vj`` to every peripheral vertex."""
    reach = bfs_distances(g, vj, {r})
    per = [all_shortest_paths_avoiding(g, vj, u, {r}, limit=cap) for u in periph if u in reach]
    if math.prod(len(p) for p in per) > cap:
        raise SearchBudgetExceeded(f"{math.prod(len(p) for p in per)} path combinations for {g.label(vj)}")
    seen = {frozenset().union(*combo) for combo in product(*per)}
    return sorted(seen, key=sorted)


@dataclass(frozen=True)
class _TrunkChoice:
    surplus: Fraction
    trees: tuple[_Tree, ...]


def _trunk_candidates(g: Graph, r: int, opts: HeuristicOptions, notes: list[str]) -> list[_TrunkChoice]:
    dist_r = bfs_distances(g, r)
    e = max(dist_r.values())
    periph = sorted(v for v, d in dist_r.items() if d == e)
    level, _ = min_weight_formula(g, r)
    nbrs = list(g.adj[r])
    dists = [bfs_distances(g, v, {r}) for v in nbrs]
    cap = opts.path_combination_cap

    def score(trees) -> Fraction:
        return _surplus(_combined(g.n, r, list(trees)), r, level)

    try:
        options = [_trunk_vertex_sets(g, r, v, periph, cap) for v in nbrs]
        total = math.prod(len(o) for o in options)
        if total > cap:
            raise SearchBudgetExceeded(f"{total} trunk combinations exceed cap {cap}")
    except (SearchBudgetExceeded, PathLimitExceeded) as exc:
        notes.append(f"trunk search over budget ({exc}); using greedy trunks")
        return [_TrunkChoice(ZERO, _greedy_trunks(g, r, periph, e, dists, level, cap))]

    built = [[_trunk_tree(g, r, v, s, e, d) for s in opts_v] for v, d, opts_v in zip(nbrs, dists, options)]
    ranked = []
    for idx in product(*(range(len(o)) for o in options)):
        trees = tuple(built[j][i] for j, i in enumerate(idx))
        ranked.append((score(trees), idx, trees))
    ranked.sort(key=lambda x: (x[0], x[1]))
    notes.append(
        f"trunk combinations: {total} (per neighbour {[len(o) for o in options]}); "
        f"best trunk surplus {ranked[0][0]}"
    )
    return [_TrunkChoice(s, t) for s, _, t in ranked[: opts.trunk_candidates]]


def _greedy_trunks(g, r, periph, e, dists, level, cap) -> tuple[_Tree, ...]:
    nbrs = list(g.adj[r])
    chosen: list[set[int]] = [{v} for v in nbrs]

    def trees_for(sets):
        return [_trunk_tree(g, r, v, frozenset(s), e, d) for v, d, s in zip(nbrs, dists, sets)]

    for j, v in enumerate(nbrs):
        for u in periph:
            if u not in dists[j]:
                continue
            try:
                paths = all_shortest_paths_avoiding(g, v, u, {r}, limit=cap)
            except PathLimitExceeded:
                paths = [_first_shortest_path(g, v, u, {r})]
            best = None
            for p in paths:
                trial = [set(s) for s in chosen]
                trial[j] |= set(p)
                sc = _surplus(_combined(g.n, r, trees_for(trial)), r, level)
                if best is None or sc < best[0]:
                    best = (sc, trial)
            chosen = best[1]
    return tuple(trees_for(chosen))


def build_trunks(g: Graph, r: int, opts: HeuristicOptions | None = None) -> list[Strategy]:
    """Trunk strategies of least total surplus (ties broken by lexicographic combination order)."""
    opts = opts or HeuristicOptions()
    min_weight_formula(g, r)  # surfaces PeripheralUnreachable early
    best = _trunk_candidates(g, r, opts, [])[0]
    return [_to_strategy(g, r, t) for t in best.trees]


# ---------------------------------------------------------------- step 4


def _raise_plan(t: _Tree, r: int, v: int, new_w: Fraction) -> dict[int, Fraction]:
    """Weights needed along the ancestor chain of ``v`` so that ``v`` can carry ``new_w``."""
    plan = {v: new_w}
    x = v
    while True:
        p = t.parent[x]
        if p == r:
            return plan
        need = 2 * plan[x]
        if t.weight.get(p, ZERO) >= need:
            return plan
        plan[p] = need
        x = p


def _plan_cost(W: list[Fraction], t: _Tree, plan: dict[int, Fraction], level: Fraction) -> Fraction:
    cost = ZERO
    for y, nw in plan.items():
        inc = nw - t.weight.get(y, ZERO)
        cost += max(ZERO, W[y] + inc - level) - max(ZERO, W[y] - level)
    return cost


def _fill(g: Graph, r: int, trees: list[_Tree], level: Fraction, dist_r: dict[int, int], notes: list[str] | None) -> None:
    lab = g.label
    while True:
        W = _combined(g.n, r, trees)
        deficient = sorted((v for v in range(g.n) if v != r and W[v] < level), key=lambda v: (-dist_r[v], v))
        if not deficient:
            return
        for s in deficient:
            delta = level - W[s]
            # free moves first: weight that fits under an existing parent creates no surplus
            free = None
            for ti, t in enumerate(trees):
                if s in t.parent:
                    p = t.parent[s]
                    room = delta if p == r else t.weight[p] / 2 - t.weight.get(s, ZERO)
                    cands = [(p, room, False)]
                else:
                    cands = [(p, t.weight[p] / 2, True) for p in g.adj[s] if p != r and p in t.parent]
                for p, room, new in cands:
                    amt = min(delta, room)
                    if amt > 0 and (free is None or amt > free[0]):
                        free = (amt, ti, p, new)
            if free is not None:
                amt, ti, p, new = free
                t = trees[ti]
                if new:
                    t.parent[s] = p
                t.weight[s] = t.weight.get(s, ZERO) + amt
                if notes is not None:
                    notes.append(f"branch T_{ti + 1}: {lab(s)} += {amt} under {lab(p)}")
                break
            # otherwise pay for it: cheapest ancestor raise over all strategies
            best = None
            for ti, t in enumerate(trees):
                if s in t.parent:
                    plans = [(t.parent[s], _raise_plan(t, r, s, t.weight.get(s, ZERO) + delta), False)]
                else:
                    plans = []
                    for p in g.adj[s]:
                        if p != r and p in t.parent:
                            probe = _Tree(dict(t.parent), t.weight)
                            probe.parent[s] = p
                            plans.append((p, _raise_plan(probe, r, s, delta), True))
                for p, plan, new in plans:
                    key = (_plan_cost(W, t, plan, level), ti, p)
                    if best is None or key < best[0]:
                        best = (key, ti, p, plan, new)
            if best is None:
                continue
            (cost, ti, p), _, _, plan, new = best[0], *best[1:]
            t = trees[ti]
            if new:
                t.parent[s] = p
            t.weight.update(plan)
            if notes is not None:
                raised = ", ".join(f"{lab(y)}={w}" for y, w in sorted(plan.items()) if y != s)
                notes.append(f"branch T_{ti + 1}: {lab(s)} -> {plan[s]} via {lab(p)}; raised [{raised}] surplus +{cost}")
            break
        else:
            raise CannotCover(f"no strategy can be extended to reach {', '.join(lab(v) for v in deficient)}")


def fill_branches(
    g: Graph, r: int, trunks: list[Strategy], omega_min: Fraction, opts: HeuristicOptions | None = None
) -> Certificate:
    """Extend trunk strategies with branches until every non-root vertex weighs at least ``omega_min``."""
    trees = [_from_strategy(s) for s in trunks]
    _fill(g, r, trees, Fraction(omega_min), bfs_distances(g, r), None)
    return Certificate(g, r, tuple(_to_strategy(g, r, t) for t in trees))


# ---------------------------------------------------------------- refinement


def _remove_slack(n: int, r: int, trees: list[_Tree]) -> list[_Tree]:
    """Lower weights bottom-up wherever a vertex sits above the current minimum."""
    W = _combined(n, r, trees)
    m = min(W[v] for v in range(n) if v != r)
    for t in trees:
        kids = t.children()
        for v in reversed(t.order(r)[1:]):
            floor = 2 * max((t.weight.get(c, ZERO) for c in kids.get(v, ())), default=ZERO)
            new = max(floor, t.weight[v] - (W[v] - m), ZERO)
            if new < t.weight[v]:
                W[v] -= t.weight[v] - new
                t.weight[v] = new
        # weightless leaves carry nothing; peel them off
        changed = True
        while changed:
            changed = False
            has_kids = set(t.parent.values())
            for v in [v for v in t.parent if t.weight[v] == 0 and v not in has_kids]:
                del t.parent[v]
                del t.weight[v]
                changed = True
    kept = [t for t in trees if t.parent]
    return kept or trees[:1]


def _replacement_moves(g: Graph, r: int, t: _Tree, L: int):
    vj = next(v for v, p in t.parent.items() if p == r)
    dist = bfs_distances(g, vj, {r})
    tree = set(t.parent) | {r}
    seen = set()
    for u in sorted(t.parent):
        if u == vj:
            continue
        sub = t.subtree(u)
        for path in paths_up_to_length(g, vj, u, dist[u] + L, {r}, limit=10_000):
            i = len(path) - 2
            suffix = []
            while path[i] not in tree:
                suffix.append(path[i])
                i -= 1
            a = path[i]
            if a in sub:
                continue
            key = (u, a, tuple(reversed(suffix)))
            if (not suffix and a == t.parent[u]) or key in seen:
                continue
            seen.add(key)
            yield key


def _apply_move(t: _Tree, r: int, u: int, a: int, chain: tuple[int, ...], lift: bool) -> _Tree:
    t = t.copy()
    k = len(chain)
    sub = t.subtree(u)
    if lift:
        # keep the subtree as is; make the new chain and a's ancestors heavy enough
        wu = t.weight[u]
        for i, x in enumerate(chain):
            t.weight[x] = wu * 2 ** (k - i)
        top = chain[0] if chain else u
        for x, p in zip((*chain, u), (a, *chain)):
            t.parent[x] = p
        for y, nw in _raise_plan(t, r, top, t.weight[top]).items():
            t.weight[y] = max(t.weight.get(y, ZERO), nw)
    else:
        wa = t.weight[a]
        for i, x in enumerate(chain):
            t.weight[x] = wa / 2 ** (i + 1)
        cap = wa / 2 ** (k + 1)
        if t.weight[u] > cap:
            f = cap / t.weight[u]
            for x in sub:
                t.weight[x] *= f
        for x, p in zip((*chain, u), (a, *chain)):
            t.parent[x] = p
    return t


def _polish(g: Graph, r: int, trees: list[_Tree], level: Fraction, dist_r, opts: HeuristicOptions) -> list[_Tree]:
    _fill(g, r, trees, level, dist_r, None)
    if opts.enable_weight_reduction:
        trees = _remove_slack(g.n, r, trees)
    return trees


def _refine_trees(g: Graph, r: int, trees: list[_Tree], opts: HeuristicOptions, notes: list[str]) -> list[_Tree]:
    dist_r = bfs_distances(g, r)
    if opts.enable_weight_reduction:
        before = _ratio(g.n, r, trees)
        trees = _remove_slack(g.n, r, trees)
        after = _ratio(g.n, r, trees)
        if after < before:
            notes.append(f"weight reduction: lambda {before} -> {after}")
    if not opts.enable_path_replacement:
        return trees
    cur = _ratio(g.n, r, trees)
    for _ in range(opts.refine_passes):
        W = _combined(g.n, r, trees)
        level = min(W[v] for v in range(g.n) if v != r)
        best = None
        for ti, t in enumerate(trees):
            for u, a, chain in _replacement_moves(g, r, t, opts.extra_path_length):
                for lift in (False, True):
                    trial = [x.copy() for x in trees]
                    trial[ti] = _apply_move(t, r, u, a, chain, lift)
                    try:
                        trial = _polish(g, r, trial, level, dist_r, opts)
                    except CannotCover:
                        continue
                    lam = _ratio(g.n, r, trial)
                    if lam is not None and lam < cur and (best is None or lam < best[0]):
                        best = (lam, trial, ti, u, a, chain, lift)
        if best is None:
            break
        lam, trees, ti, u, a, chain, lift = best
        route = " ".join(g.label(x) for x in (a, *chain, u))
        notes.append(f"path replacement T_{ti + 1}: {g.label(u)} re-routed {route} ({'lift' if lift else 'scale'}); lambda {cur} -> {lam}")
        cur = lam
    return trees


def refine(cert: Certificate, opts: HeuristicOptions | None = None) -> Certificate:
    """Slack removal plus path replacement; never returns a larger WFL ratio than it is given."""
    opts = opts or HeuristicOptions()
    g, r = cert.graph, cert.root
    trees = _refine_trees(g, r, [_from_strategy(s) for s in cert.strategies], opts, [])
    out = Certificate(g, r, tuple(_to_strategy(g, r, t) for t in trees))
    return out if wfl_ratio(out) <= wfl_ratio(cert) else cert


# ---------------------------------------------------------------- full pipeline


def run_heuristic(g: Graph, r: int, opts: HeuristicOptions | None = None, do_refine: bool = True) -> HeuristicReport:
    opts = opts or HeuristicOptions()
    notes: list[str] = []
    level, p_min = min_weight_formula(g, r)
    notes.append(f"omega_min predicted {level} at {sorted(g.label(u) for u in p_min)}")
    dist_r = bfs_distances(g, r)
    best = None
    errors = []
    for rank, choice in enumerate(_trunk_candidates(g, r, opts, notes)):
        trial_notes: list[str] = []
        trees = [t.copy() for t in choice.trees]
        try:
            _fill(g, r, trees, level, dist_r, trial_notes)
        except CannotCover as exc:
            errors.append(exc)
            continue
        if do_refine:
            trees = _refine_trees(g, r, trees, opts, trial_notes)
        lam = _ratio(g.n, r, trees)
        if best is None or lam < best[0]:
            best = (lam, rank, trees, trial_notes)
    if best is None:
        raise errors[0]
    lam, rank, trees, trial_notes = best
    notes.append(f"kept trunk candidate #{rank + 1}")
    notes.extend(trial_notes)
    cert = Certificate(g, r, tuple(_to_strategy(g, r, t) for t in trees))
    require_valid(cert)
    rep = surplus_decomposition(cert)
    return HeuristicReport(cert, level, p_min, rep.lam, rep.per_vertex_surplus, tuple(notes))


# ---------------------------------------------------------------- hypercube


DEFAULT_CUBE_BUDGET = math.factorial(7) * 2**7


def cube_certificate(d: int, budget: int = DEFAULT_CUBE_BUDGET) -> Certificate:
    """Tight certificate for the all-zeros target of Q_d: one strategy, closed under all bit permutations."""
    if d < 2:
        raise InvalidParameter(f"cube certificate needs d >= 2, got {d}")
    if math.factorial(d) * 2**d > budget:
        raise ResourceLimit(f"d={d}: {math.factorial(d)} strategies on {2**d} vertices exceed budget {budget}")
    fam = cube(d)
    g = fam.graph
    r = g.vid("0" * d)
    parent: dict[int, int] = {}
    weight: dict[int, Fraction] = {}
    full = [r]  # vertices of the previous level carrying the full level weight
    for j in range(1, d + 1):
        level_w, size = 2 ** (d - j), math.comb(d, j)
        if level_w > size:
            want = [level_w]
        else:
            a, b = divmod(size, level_w)
            want = [level_w] * a + ([b] if b else [])
        # upward neighbours of the heavy vertices one level down
        up = sorted({(p, c) for p in full for c in g.adj[p] if g.label(c).count("1") == j}, key=lambda x: (x[1], x[0]))
        picked: dict[int, int] = {}
        for p, c in up:
            picked.setdefault(c, p)
        kids = sorted(picked)
        if len(kids) < len(want):
            raise HeuristicError(f"level {j}: only {len(kids)} attachable vertices for {len(want)} weights")
        full = []
        for c, w in zip(kids, want):
            parent[c] = picked[c]
            weight[c] = Fraction(w)
            if w == level_w:
                full.append(c)
    strategies = []
    for perm in permutations(range(d)):
        def image(v: int, perm=perm) -> int:
            s = g.label(v)
            return g.vid("".join(s[perm[i]] for i in range(d)))

        strategies.append(
            Strategy(g, r, {image(c): image(p) for c, p in parent.items()}, {image(v): w for v, w in weight.items()})
        )
    return Certificate(g, r, tuple(strategies))
