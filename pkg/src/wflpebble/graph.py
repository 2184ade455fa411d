"""Simple connected graphs with labelled vertices and the metric helpers used everywhere else."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

DEFAULT_PATH_LIMIT = 100_000


class GraphError(ValueError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownLabel(GraphError):
    pass


class Disconnected(GraphError):
    pass


class DuplicateLabel(GraphError):
    pass


class RingIndexOutOfRange(GraphError):
    pass


class NoPath(GraphError):
    pass


class PathLimitExceeded(GraphError):
    pass


class GraphFormatError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple connected graph.

    Vertices are dense ids ``0..n-1``; ``labels[i]`` is the printable name of
    vertex ``i``.  ``adj[i]`` is the sorted tuple of neighbours of ``i``.
    """

    labels: tuple[str, ...]
    adj: tuple[tuple[int, ...], ...]
    name: str = "graph"
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.adj == other.adj

    def __hash__(self):
        return hash((self.labels, self.adj))

    def vid(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown vertex label {label!r} in graph {self.name!r}") from None

    def label(self, v: int) -> str:
        return self.labels[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])


def from_edge_list(labels: Sequence[str], edges: Iterable[tuple[str, str]], name: str = "graph") -> Graph:
    labels = tuple(labels)
    if not labels:
        raise GraphError("a graph needs at least one vertex")
    index: dict[str, int] = {}
    for i, lab in enumerate(labels):
        if not lab or any(c.isspace() for c in lab):
            raise GraphError(f"bad vertex label {lab!r}")
        if lab in index:
            raise DuplicateLabel(f"label {lab!r} appears twice")
        index[lab] = i
    nbrs: list[set[int]] = [set() for _ in labels]
    for a, b in edges:
        if a not in index:
            raise UnknownLabel(f"edge endpoint {a!r} is not a vertex")
        if b not in index:
            raise UnknownLabel(f"edge endpoint {b!r} is not a vertex")
        u, v = index[a], index[b]
        if u == v:
            raise SelfLoop(f"self-loop at {a!r}")
        if v in nbrs[u]:
            raise DuplicateEdge(f"edge {a!r}-{b!r} given twice")
        nbrs[u].add(v)
        nbrs[v].add(u)
    g = Graph(labels, tuple(tuple(sorted(s)) for s in nbrs), name)
    if len(bfs_distances(g, 0)) != g.n:
        raise Disconnected(f"graph {name!r} is not connected")
    return g


# ---------------------------------------------------------------- metrics


def bfs_distances(g: Graph, src: int, removed: frozenset[int] | set[int] = frozenset()) -> dict[int, int]:
    """Distances from ``src`` in ``g - removed``; unreachable vertices are absent."""
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in dist and w not in removed:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance_row(g: Graph, src: int) -> list[int]:
    d = bfs_distances(g, src)
    return [d[v] for v in range(g.n)]


def all_pairs_distances(g: Graph) -> list[list[int]]:
    return [distance_row(g, v) for v in range(g.n)]


def distance(g: Graph, u: int, v: int) -> int:
    return bfs_distances(g, u)[v]


def eccentricity(g: Graph, v: int) -> int:
    return max(bfs_distances(g, v).values())


def diameter(g: Graph) -> int:
    return max(eccentricity(g, v) for v in range(g.n))


def neighborhood_ring(g: Graph, r: int, j: int) -> set[int]:
    dist = bfs_distances(g, r)
    e = max(dist.values())
    if not 0 <= j <= e:
        raise RingIndexOutOfRange(f"ring index {j} outside 0..{e}")
    return {v for v, d in dist.items() if d == j}


def ring_sizes(g: Graph, r: int) -> list[int]:
    """``[|N_0(r)|, |N_1(r)|, ..., |N_e(r)|]``."""
    dist = bfs_distances(g, r)
    sizes = [0] * (max(dist.values()) + 1)
    for d in dist.values():
        sizes[d] += 1
    return sizes


def peripheral(g: Graph, r: int) -> set[int]:
    dist = bfs_distances(g, r)
    e = max(dist.values())
    return {v for v, d in dist.items() if d == e}


def distance_avoiding(g: Graph, u: int, v: int, removed: Iterable[int] = ()) -> int | None:
    """BFS distance from ``u`` to ``v`` in ``g - removed``; ``None`` when unreachable."""
    removed = frozenset(removed)
    if u in removed or v in removed:
        raise GraphError("endpoints must not be removed")
    return bfs_distances(g, u, removed).get(v)


def all_shortest_paths_avoiding(
    g: Graph, u: int, v: int, removed: Iterable[int] = (), limit: int = DEFAULT_PATH_LIMIT
) -> list[tuple[int, ...]]:
    """Every shortest ``u``-``v`` path in ``g - removed``, sorted by vertex-id sequence."""
    removed = frozenset(removed)
    if u in removed or v in removed:
        raise GraphError("endpoints must not be removed")
    from_v = bfs_distances(g, v, removed)
    if u not in from_v:
        raise NoPath(f"no path {g.label(u)} -> {g.label(v)} avoiding {sorted(removed)}")
    paths: list[tuple[int, ...]] = []

    def extend(prefix: list[int]) -> None:
        last = prefix[-1]
        if last == v:
            if len(paths) >= limit:
                raise PathLimitExceeded(f"more than {limit} shortest paths")
            paths.append(tuple(prefix))
            return
        for w in g.adj[last]:  # adjacency is sorted, so output is lexicographic
            if from_v.get(w) == from_v[last] - 1:
                prefix.append(w)
                extend(prefix)
                prefix.pop()

    extend([u])
    return paths


def paths_up_to_length(
    g: Graph, u: int, v: int, max_len: int, removed: Iterable[int] = (), limit: int = DEFAULT_PATH_LIMIT
) -> list[tuple[int, ...]]:
    """Simple ``u``-``v`` paths with at most ``max_len`` edges, avoiding ``removed``.

    Sorted by length, then by vertex-id sequence.
    """
    removed = frozenset(removed)
    from_v = bfs_distances(g, v, removed)
    out: list[tuple[int, ...]] = []
    if u not in from_v or from_v[u] > max_len:
        return out

    def extend(prefix: list[int], seen: set[int]) -> None:
        last = prefix[-1]
        if last == v:
            if len(out) >= limit:
                raise PathLimitExceeded(f"more than {limit} paths")
            out.append(tuple(prefix))
            return
        budget = max_len - (len(prefix) - 1)
        for w in g.adj[last]:
            if w in seen or w not in from_v or from_v[w] + 1 > budget:
                continue
            seen.add(w)
            prefix.append(w)
            extend(prefix, seen)
            prefix.pop()
            seen.discard(w)

    extend([u], {u})
    out.sort(key=lambda p: (len(p), p))
    return out


def is_bridgeless(g: Graph) -> bool:
    for u, v in g.edges():
        seen = {u}
        stack = [u]
        while stack:
            a = stack.pop()
            for b in g.adj[a]:
                if (a, b) in ((u, v), (v, u)) or b in seen:
                    continue
                seen.add(b)
                stack.append(b)
        if v not in seen:
            return False
    return True


def girth(g: Graph) -> int | None:
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in g.adj[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    parent[b] = a
                    queue.append(b)
                elif parent[a] != b:
                    cyc = dist[a] + dist[b] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


# ---------------------------------------------------------------- text format


def format_graph(g: Graph) -> str:
    lines = [f"graph {g.name}", "vertices " + " ".join(g.labels)]
    lines += [f"edge {g.label(u)} {g.label(v)}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    name = None
    labels: list[str] | None = None
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "graph":
            if name is not None or len(rest) != 1:
                raise GraphFormatError(f"line {lineno}: bad graph header")
            name = rest[0]
        elif head == "vertices":
            if name is None or labels is not None:
                raise GraphFormatError(f"line {lineno}: 'vertices' must follow 'graph' exactly once")
            labels = rest
        elif head == "edge":
            if labels is None or len(rest) != 2:
                raise GraphFormatError(f"line {lineno}: bad edge line")
            edges.append((rest[0], rest[1]))
        else:
            raise GraphFormatError(f"line {lineno}: unknown keyword {head!r}")
    if name is None or labels is None:
        raise GraphFormatError("missing 'graph' or 'vertices' line")
    return from_edge_list(labels, edges, name)
