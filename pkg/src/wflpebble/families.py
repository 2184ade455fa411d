"""Generators for the named graphs: Petersen, Flower snarks J_m, Blanusa B_1/B_2, cubes Q_d."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .graph import Graph, from_edge_list, parse_graph


class InvalidParameter(ValueError):
    pass


@dataclass(frozen=True)
class FamilyGraph:
    graph: Graph
    family: str
    param: int | None
    target_classes: tuple[str, ...]

    def __post_init__(self):
        if not self.target_classes:
            raise ValueError("target_classes must be non-empty")
        for lab in self.target_classes:
            self.graph.vid(lab)


def sub(letter: str, i: int) -> str:
    return f"{letter}_{i}"


def petersen() -> FamilyGraph:
    # outer 5-cycle a_1..a_5, inner pentagram b_1..b_5, spokes a_i b_i
    outer = [f"a_{i}" for i in range(1, 6)]
    inner = [f"b_{i}" for i in range(1, 6)]
    edges = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
    edges += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
    edges += list(zip(outer, inner))
    g = from_edge_list(outer + inner, edges, "petersen")
    return FamilyGraph(g, "petersen", None, ("a_1",))


def flower(m: int) -> FamilyGraph:
    if m < 3 or m % 2 == 0:
        raise InvalidParameter(f"Flower snark needs odd m >= 3, got {m}")
    k = (m - 1) // 2
    idx = range(-k, k + 1)
    labels = [sub(c, i) for c in "vxyz" for i in idx]
    edges = []
    for i in idx:
        for c in "vxy":
            edges.append((sub(c, i), sub("z", i)))
    # v-cycle: consecutive indices mod m
    for i in range(-k, k):
        edges.append((sub("v", i), sub("v", i + 1)))
    edges.append((sub("v", k), sub("v", -k)))
    # x and y paths closed into one 2m-cycle by the twisted edges
    for c in "xy":
        for i in range(-k, k):
            edges.append((sub(c, i), sub(c, i + 1)))
    edges.append((sub("x", k), sub("y", -k)))
    edges.append((sub("y", k), sub("x", -k)))
    g = from_edge_list(labels, edges, f"flower{m}")
    return FamilyGraph(g, "flower", m, ("x_0", "v_0", "z_0"))


def _load_fixture(name: str) -> Graph:
    text = resources.files(__package__).joinpath("data", f"{name}.graph").read_text()
    return parse_graph(text)


def blanusa2() -> FamilyGraph:
    return FamilyGraph(_load_fixture("blanusa2"), "blanusa2", None, ("x_1", "x_2", "x_3", "z_1", "z_2", "z_3"))


def blanusa1() -> FamilyGraph:
    return FamilyGraph(_load_fixture("blanusa1"), "blanusa1", None, ("a_1", "b_1", "c_1", "d_1", "e_1"))


def cube(d: int) -> FamilyGraph:
    if d < 1:
        raise InvalidParameter(f"cube dimension must be >= 1, got {d}")
    labels = [format(i, f"0{d}b") for i in range(2**d)]
    edges = [(labels[i], labels[i ^ (1 << b)]) for i in range(2**d) for b in range(d) if i < i ^ (1 << b)]
    g = from_edge_list(labels, edges, f"cube{d}")
    return FamilyGraph(g, "cube", d, ("0" * d,))


def by_name(spec: str) -> FamilyGraph:
    """Resolve names like ``petersen``, ``blanusa2``, ``flower7``, ``cube4``."""
    s = spec.strip().lower()
    if s == "petersen":
        return petersen()
    if s in ("blanusa1", "b1"):
        return blanusa1()
    if s in ("blanusa2", "b2"):
        return blanusa2()
    for prefix, fn in (("flower", flower), ("j", flower), ("cube", cube), ("q", cube)):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            return fn(int(s[len(prefix):]))
    raise KeyError(f"unknown graph family {spec!r}")
