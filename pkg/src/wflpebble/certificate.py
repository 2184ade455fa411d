"""Weighted rooted subtrees (strategies), certificates built from them, and their derived ratios.

All weights are :class:`fractions.Fraction`; nothing here touches floating point.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .graph import Graph, UnknownLabel, parse_graph

ZERO = Fraction(0)


class CertificateError(ValueError):
    pass


class RootHasNoWeight(CertificateError):
    pass


class ZeroMinWeight(CertificateError):
    pass


class InvalidCertificate(CertificateError):
    pass


class CertificateSyntaxError(CertificateError):
    pass


class UnknownVertex(CertificateError):
    pass


class GraphMismatch(CertificateError):
    pass


class InvalidRational(CertificateError):
    pass


class ReconstructionError(CertificateError):
    pass


def parse_rational(token: str) -> Fraction:
    num, sep, den = token.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise InvalidRational(f"not a rational: {token!r}") from None
    if q == 0:
        raise InvalidRational(f"zero denominator: {token!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: str | None
    detail: str

    def __str__(self):
        where = f" at {self.vertex}" if self.vertex is not None else ""
        return f"[{self.rule}]{where}: {self.detail}"


@dataclass(frozen=True, eq=False)
class Strategy:
    """A subtree rooted at ``root`` given by a child -> parent map, plus vertex weights."""

    graph: Graph
    root: int
    parent: Mapping[int, int]
    weight: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "parent", dict(self.parent))
        object.__setattr__(self, "weight", {v: Fraction(w) for v, w in self.weight.items()})

    def __eq__(self, other):
        if not isinstance(other, Strategy):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.root == other.root
            and self.parent == other.parent
            and {v: w for v, w in self.weight.items() if w}
            == {v: w for v, w in other.weight.items() if w}
        )

    @property
    def vertices(self) -> set[int]:
        return {self.root, *self.parent}

    def w(self, v: int) -> Fraction:
        return self.weight.get(v, ZERO)

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for c, p in self.parent.items():
            out.setdefault(p, []).append(c)
        for lst in out.values():
            lst.sort()
        return out

    def bfs_order(self) -> list[int]:
        kids = self.children()
        order, queue = [], deque([self.root])
        while queue:
            u = queue.popleft()
            order.append(u)
            queue.extend(kids.get(u, ()))
        return order

    def depth(self) -> dict[int, int]:
        d = {self.root: 0}
        for u in self.bfs_order()[1:]:
            d[u] = d[self.parent[u]] + 1
        return d

    def scaled(self, factor: Fraction) -> "Strategy":
        return Strategy(self.graph, self.root, self.parent, {v: w * factor for v, w in self.weight.items()})


def validate_strategy(s: Strategy) -> list[Violation]:
    """Every broken strategy rule; the empty list means the strategy is valid."""
    g, lab = s.graph, s.graph.label
    out: list[Violation] = []
    if len(s.vertices) < 2:
        out.append(Violation("size", lab(s.root), "n(T) >= 2 required: the tree has only its root"))
    if s.root in s.parent:
        out.append(Violation("root-parent", lab(s.root), "the root cannot have a parent"))
    tree = s.vertices
    for c, p in sorted(s.parent.items()):
        if not (0 <= c < g.n and 0 <= p < g.n):
            out.append(Violation("vertex", None, f"vertex id out of range in edge {p}->{c}"))
            continue
        if not g.has_edge(p, c):
            out.append(Violation("edge", lab(c), f"{lab(p)}-{lab(c)} is not an edge of {g.name}"))
    # every parent chain must end at the root
    for c in sorted(s.parent):
        seen = {c}
        u = c
        while u != s.root:
            if u not in s.parent:
                out.append(Violation("disconnected", lab(c) if 0 <= c < g.n else str(c), "parent chain does not reach the root"))
                break
            u = s.parent[u]
            if u in seen:
                out.append(Violation("cycle", lab(c) if 0 <= c < g.n else str(c), "parent chain contains a cycle"))
                break
            seen.add(u)
    for v, w in sorted(s.weight.items()):
        name = lab(v) if 0 <= v < g.n else str(v)
        if w < 0:
            out.append(Violation("negative", name, f"weight {format_rational(w)} < 0"))
        if v == s.root and w != 0:
            out.append(Violation("root-weight", name, f"root weight must be 0, got {format_rational(w)}"))
        elif v not in tree and w != 0:
            out.append(Violation("off-tree", name, f"weight {format_rational(w)} on a vertex outside the tree"))
    for c, p in sorted(s.parent.items()):
        if p == s.root or not (0 <= c < g.n and 0 <= p < g.n):
            continue
        if s.w(p) < 2 * s.w(c):
            out.append(
                Violation(
                    "halving",
                    lab(c),
                    f"edge ({lab(p)},{lab(c)}): parent weight {format_rational(s.w(p))} < 2 x {format_rational(s.w(c))}",
                )
            )
    return out


def total_weight(s: Strategy) -> Fraction:
    return sum((w for v, w in s.weight.items() if v != s.root), ZERO)


@dataclass(frozen=True)
class Configuration:
    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("pebble counts must be non-negative")

    @property
    def size(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_labels(cls, g: Graph, counts: Mapping[str, int]) -> "Configuration":
        vec = [0] * g.n
        for lab, c in counts.items():
            vec[g.vid(lab)] = c
        return cls(tuple(vec))


def config_weight(s: Strategy, conf: Configuration | Sequence[int]) -> Fraction:
    counts = conf.counts if isinstance(conf, Configuration) else conf
    return sum((w * counts[v] for v, w in s.weight.items() if v != s.root), ZERO)


@dataclass(frozen=True, eq=False)
class Certificate:
    graph: Graph
    root: int
    strategies: tuple[Strategy, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if not self.strategies:
            raise CertificateError("a certificate needs at least one strategy")
        for s in self.strategies:
            if s.graph != self.graph or s.root != self.root:
                raise CertificateError("all strategies must share the certificate's graph and root")

    def __eq__(self, other):
        if not isinstance(other, Certificate):
            return NotImplemented
        return self.graph == other.graph and self.root == other.root and self.strategies == other.strategies

    def scaled(self, factor: Fraction) -> "Certificate":
        return Certificate(self.graph, self.root, tuple(s.scaled(factor) for s in self.strategies))


def validate_certificate(c: Certificate) -> list[tuple[int, Violation]]:
    return [(i, v) for i, s in enumerate(c.strategies) for v in validate_strategy(s)]


def require_valid(c: Certificate) -> None:
    bad = validate_certificate(c)
    if bad:
        raise InvalidCertificate("; ".join(f"T_{i + 1} {v}" for i, v in bad))


def combined_weight(c: Certificate, v: int) -> Fraction:
    if v == c.root:
        raise RootHasNoWeight("the root carries no weight")
    return sum((s.w(v) for s in c.strategies), ZERO)


def combined_weights(c: Certificate) -> dict[int, Fraction]:
    acc = {v: ZERO for v in range(c.graph.n) if v != c.root}
    for s in c.strategies:
        for v, w in s.weight.items():
            if v != c.root:
                acc[v] += w
    return acc


def certificate_total(c: Certificate) -> Fraction:
    return sum((total_weight(s) for s in c.strategies), ZERO)


def min_weight(c: Certificate) -> Fraction:
    return min(combined_weights(c).values())


def wfl_ratio(c: Certificate) -> Fraction:
    m = min_weight(c)
    if m <= 0:
        raise ZeroMinWeight("some non-root vertex has no weight; the certificate gives no bound")
    return certificate_total(c) / m


def pebbling_upper_bound(c: Certificate) -> int:
    return math.floor(wfl_ratio(c)) + 1


@dataclass(frozen=True)
class SurplusReport:
    n_minus_1: int
    omega_min: Fraction
    per_vertex_surplus: dict[int, Fraction]
    lam: Fraction

    def __post_init__(self):
        if self.lam != self.n_minus_1 + sum(self.per_vertex_surplus.values(), ZERO):
            raise AssertionError("surplus decomposition does not add up")

    @property
    def total_surplus(self) -> Fraction:
        return sum(self.per_vertex_surplus.values(), ZERO)


def surplus_decomposition(c: Certificate) -> SurplusReport:
    weights = combined_weights(c)
    m = min(weights.values())
    if m <= 0:
        raise ZeroMinWeight("some non-root vertex has no weight; the certificate gives no bound")
    surplus = {v: (w - m) / m for v, w in weights.items()}
    return SurplusReport(c.graph.n - 1, m, surplus, wfl_ratio(c))


# ---------------------------------------------------------------- building from weight lists


def strategy_from_weights(g: Graph, root: int, items: Sequence[tuple[str, Fraction | int | str]]) -> Strategy:
    """Rebuild a strategy from an ordered vertex/weight listing.

    Each listed vertex is attached to the first earlier-listed vertex adjacent
    to it whose weight is at least twice its own; the root is used only when
    no such vertex exists and the vertex is a neighbour of the root.
    """
    parent: dict[int, int] = {}
    weight: dict[int, Fraction] = {}
    placed: list[int] = []
    pending = [(g.vid(lab), w if isinstance(w, Fraction) else parse_rational(str(w))) for lab, w in items]
    if len({v for v, _ in pending}) != len(pending):
        raise ReconstructionError("a vertex is listed twice")
    # Heavier vertices first so that a parent is always placed before its child;
    # the listing order breaks ties.
    order = sorted(range(len(pending)), key=lambda i: (-pending[i][1], i))
    for i in order:
        v, w = pending[i]
        cands = [p for p in placed if g.has_edge(p, v) and weight[p] >= 2 * w]
        cands.sort(key=lambda p: next(j for j, (u, _) in enumerate(pending) if u == p))
        if cands:
            parent[v] = cands[0]
        elif g.has_edge(root, v):
            parent[v] = root
        else:
            raise ReconstructionError(f"no admissible parent for {g.label(v)} (weight {format_rational(w)})")
        weight[v] = w
        placed.append(v)
    return Strategy(g, root, parent, weight)


def certificate_from_tables(g: Graph, root: str, tables: Iterable[Sequence[tuple[str, object]]]) -> Certificate:
    r = g.vid(root)
    return Certificate(g, r, tuple(strategy_from_weights(g, r, t) for t in tables))


# ---------------------------------------------------------------- text format


def serialize_certificate(c: Certificate, graph_ref: str | None = None) -> str:
    g = c.graph
    lines = ["certificate", f"graph {graph_ref or g.name}", f"root {g.label(c.root)}"]
    for s in c.strategies:
        lines.append("strategy")
        for v in s.bfs_order()[1:]:
            lines.append(f"  edge {g.label(s.parent[v])} {g.label(v)}")
        for v in sorted((v for v in s.vertices if v != s.root), key=g.label):
            lines.append(f"  weight {g.label(v)} {format_rational(s.w(v))}")
    return "\n".join(lines) + "\n"


def resolve_graph(ref: str, base_dir: str | Path | None = None) -> Graph:
    from .families import by_name

    try:
        return by_name(ref).graph
    except KeyError:
        pass
    path = Path(ref)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    if not path.is_file():
        raise GraphMismatch(f"graph {ref!r} is neither a known family nor a readable file")
    return parse_graph(path.read_text())


def parse_certificate(text: str, graph: Graph | None = None, base_dir: str | Path | None = None) -> Certificate:
    header: dict[str, str] = {}
    blocks: list[list[tuple[int, list[str]]]] = []
    seen_magic = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if not seen_magic:
            if head != "certificate" or rest:
                raise CertificateSyntaxError(f"line {lineno}: expected 'certificate'")
            seen_magic = True
        elif head in ("graph", "root"):
            if blocks or head in header or len(rest) != 1:
                raise CertificateSyntaxError(f"line {lineno}: bad {head!r} line")
            header[head] = rest[0]
        elif head == "strategy":
            if rest:
                raise CertificateSyntaxError(f"line {lineno}: 'strategy' takes no arguments")
            blocks.append([])
        elif head in ("edge", "weight"):
            if not blocks or len(rest) != 2:
                raise CertificateSyntaxError(f"line {lineno}: bad {head!r} line")
            blocks[-1].append((lineno, [head, *rest]))
        else:
            raise CertificateSyntaxError(f"line {lineno}: unknown keyword {head!r}")
    if not seen_magic or "graph" not in header or "root" not in header:
        raise CertificateSyntaxError("missing 'certificate', 'graph' or 'root' line")
    if not blocks:
        raise CertificateSyntaxError("no strategies")
    if graph is None:
        graph = resolve_graph(header["graph"], base_dir)
    elif header["graph"] != graph.name:
        raise GraphMismatch(f"certificate is for {header['graph']!r}, graph given is {graph.name!r}")

    def vid(lab: str, lineno: int) -> int:
        try:
            return graph.vid(lab)
        except UnknownLabel:
            raise UnknownVertex(f"line {lineno}: {lab!r} is not a vertex of {graph.name}") from None

    root = vid(header["root"], 0)
    strategies = []
    for block in blocks:
        parent: dict[int, int] = {}
        weight: dict[int, Fraction] = {}
        for lineno, (kind, a, b) in block:
            if kind == "edge":
                p, ch = vid(a, lineno), vid(b, lineno)
                if ch in parent:
                    raise CertificateSyntaxError(f"line {lineno}: {b} already has a parent")
                parent[ch] = p
            else:
                v = vid(a, lineno)
                if v in weight:
                    raise CertificateSyntaxError(f"line {lineno}: weight for {a} given twice")
                weight[v] = parse_rational(b)
        strategies.append(Strategy(graph, root, parent, weight))
    return Certificate(graph, root, tuple(strategies))
