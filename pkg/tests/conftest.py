import random

import pytest
from hypothesis import settings, strategies as st

from wflpebble.graph import from_edge_list

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def labels_for(n):
    return [f"v{i}" for i in range(n)]


def random_connected_graph(rng: random.Random, n: int, p: float = 0.3, name: str = "rand"):
    """Random spanning tree plus each remaining pair independently with probability ``p``."""
    labs = labels_for(n)
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in edges and rng.random() < p:
                edges.add((a, b))
    return from_edge_list(labs, [(labs[a], labs[b]) for a, b in sorted(edges)], name)


@st.composite
def connected_graphs(draw, min_n=2, max_n=9):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    edges = {(p, i) for i, p in zip(range(1, n), parents)}
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges]
    extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    labs = labels_for(n)
    return from_edge_list(labs, [(labs[a], labs[b]) for a, b in sorted(edges | set(extra))], "hyp")


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        key = report.nodeid.split("::")[-1]
        _ACCEPTANCE[key] = ("PASS" if report.outcome == "passed" else "FAIL", report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("_")[2])):
        status, _ = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{status}  {key}")


@pytest.fixture
def rng():
    return random.Random(20240601)
