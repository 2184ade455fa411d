import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings

from conftest import connected_graphs, random_connected_graph
from wflpebble.bounds import cube_lower_bound, theorem1_lower_bound
from wflpebble.catalog import paper_certificate
from wflpebble.certificate import (
    Certificate,
    certificate_total,
    combined_weight,
    min_weight,
    validate_certificate,
    wfl_ratio,
)
from wflpebble.families import InvalidParameter, blanusa2, flower, petersen
from wflpebble.graph import bfs_distances, eccentricity, from_edge_list, neighborhood_ring, peripheral
from wflpebble.heuristic import (
    CannotCover,
    HeuristicOptions,
    PeripheralUnreachable,
    ResourceLimit,
    build_trunks,
    cube_certificate,
    fill_branches,
    min_weight_formula,
    refine,
    run_heuristic,
)

F = Fraction


def shape(strategies):
    key = lambda s: (tuple(sorted(s.parent.items())), tuple(sorted(s.weight.items())))
    return sorted(map(key, strategies))


def depth_from_child_of_root(s, v):
    d = 0
    while s.parent[v] != s.root:
        v = s.parent[v]
        d += 1
    return d


def has_peripheral_paths(g, r):
    try:
        min_weight_formula(g, r)
        return True
    except PeripheralUnreachable:
        return False


# ---------------------------------------------------------------- minimum weight prediction


def test_min_weight_formula_examples():
    g = petersen().graph
    assert all(min_weight_formula(g, r)[0] == 2 for r in range(g.n))
    for m in (3, 5, 7, 9):
        j = flower(m).graph
        z0 = j.vid("z_0")
        w, pmin = min_weight_formula(j, z0)
        assert w == 3 and pmin == peripheral(j, z0)
    b = blanusa2().graph
    w, pmin = min_weight_formula(b, b.vid("x_3"))
    assert w == 2 and pmin == {b.vid("x_2'")}


def test_peripheral_unreachable():
    # the pendant neighbour l of r reaches no peripheral vertex once r is gone
    g = from_edge_list(list("lrab"), [("l", "r"), ("r", "a"), ("a", "b")])
    with pytest.raises(PeripheralUnreachable):
        min_weight_formula(g, g.vid("r"))
    with pytest.raises(PeripheralUnreachable):
        run_heuristic(g, g.vid("r"))


def test_cut_vertex_target():
    # centre of a 3-path: each end only sees itself, contributing 1 to itself and 0 to the other
    g = from_edge_list(list("abc"), [("a", "b"), ("b", "c")])
    w, pmin = min_weight_formula(g, g.vid("b"))
    assert w == 1 and pmin == {g.vid("a"), g.vid("c")}
    assert run_heuristic(g, g.vid("b")).lam == 2


def test_options_validation():
    with pytest.raises(ValueError):
        HeuristicOptions(path_combination_cap=0)
    with pytest.raises(ValueError):
        HeuristicOptions(extra_path_length=-1)


# ---------------------------------------------------------------- trunks


def test_petersen_trunks_are_half_the_reference():
    g = petersen().graph
    r = g.vid("a_1")
    half = paper_certificate("petersen").scaled(F(1, 2))
    assert shape(build_trunks(g, r)) == shape(half.strategies)


@pytest.mark.parametrize("m", [3, 5, 7, 9])
def test_flower_z0_trunks(m):
    g = flower(m).graph
    k = (m - 1) // 2
    trunks = build_trunks(g, g.vid("z_0"))
    assert len(trunks) == 3
    for a, s in zip("vxy", trunks):
        want = {f"{a}_0": 2 ** (k + 1), f"z_{k}": 1, f"z_-{k}": 1}
        for j in range(1, k + 1):
            want[f"{a}_{j}"] = want[f"{a}_-{j}"] = 2 ** (k + 1 - j)
        assert {g.label(v): w for v, w in s.weight.items()} == want


def test_star_trunks():
    g = from_edge_list(list("cabd"), [("c", "a"), ("c", "b"), ("c", "d")])
    trunks = build_trunks(g, g.vid("c"))
    assert sorted(tuple(s.weight.values()) for s in trunks) == [(1,), (1,), (1,)]
    assert run_heuristic(g, g.vid("c")).lam == 3


@settings(max_examples=40)
@given(connected_graphs(min_n=2, max_n=9))
def test_trunk_weight_law(g):
    for r in range(g.n):
        if not has_peripheral_paths(g, r):
            continue
        e = eccentricity(g, r)
        trunks = build_trunks(g, r)
        assert len(trunks) == len(neighborhood_ring(g, r, 1))
        for s in trunks:
            assert validate_certificate(Certificate(g, r, (s,))) == []
            for v, w in s.weight.items():
                assert w == F(2) ** (e - 1 - depth_from_child_of_root(s, v))


# ---------------------------------------------------------------- branches


def test_fill_is_noop_on_petersen():
    g = petersen().graph
    trunks = build_trunks(g, 0)
    filled = fill_branches(g, 0, trunks, F(2))
    assert shape(filled.strategies) == shape(trunks)
    assert wfl_ratio(filled) == 9


def test_fill_without_trunks_cannot_cover():
    g = petersen().graph
    with pytest.raises(CannotCover):
        fill_branches(g, 0, [], F(2))


@pytest.mark.parametrize("m", [5, 7, 9])
def test_flower_z0_branches(m):
    g = flower(m).graph
    k = (m - 1) // 2
    r = g.vid("z_0")
    cert = fill_branches(g, r, build_trunks(g, r), F(3))
    assert validate_certificate(cert) == []
    for j in range(1, k):
        for zj in (f"z_{j}", f"z_-{j}"):
            v = g.vid(zj)
            assert combined_weight(cert, v) == 3
            # each inner z vertex hangs off the trunk vertex of the same index
            parents = {g.label(s.parent[v]) for s in cert.strategies if v in s.parent}
            assert parents and all(p.split("_")[1] == zj.split("_")[1] for p in parents)
    assert wfl_ratio(cert) == F(3, 2) * 2 ** (k + 2) + 2 * k - 2


# ---------------------------------------------------------------- refinement and pipeline


def test_refine_keeps_tight_certificates():
    c = paper_certificate("petersen")
    assert refine(c) == c
    j3 = paper_certificate("flower", 3, "z_0")
    assert wfl_ratio(refine(j3)) == 12


@pytest.mark.parametrize(
    "family, m, target",
    [("blanusa2", None, "z_2"), ("blanusa1", None, "d_1"), ("flower", 5, "x_0"), ("flower", 3, "x_0")],
)
def test_refine_is_monotone_on_references(family, m, target):
    c = paper_certificate(family, m, target)
    out = refine(c)
    assert validate_certificate(out) == []
    assert wfl_ratio(out) <= wfl_ratio(c)


def test_refine_is_monotone_on_unrefined_runs():
    b = blanusa2().graph
    for t in ("x_1", "x_3", "z_2"):
        raw = run_heuristic(b, b.vid(t), do_refine=False).certificate
        out = refine(raw)
        assert wfl_ratio(out) <= wfl_ratio(raw)


def test_run_heuristic_anchors():
    g = petersen().graph
    assert {run_heuristic(g, r).lam for r in range(g.n)} == {9}
    assert run_heuristic(flower(3).graph, flower(3).graph.vid("z_0")).lam == 12
    assert run_heuristic(flower(5).graph, flower(5).graph.vid("z_0")).lam == 26


def test_report_contents():
    g = flower(3).graph
    rep = run_heuristic(g, g.vid("z_0"))
    assert rep.omega_min_formula == 3 and min_weight(rep.certificate) == 3
    assert rep.lam == wfl_ratio(rep.certificate)
    assert sum(rep.per_vertex_surplus.values()) == 1
    assert rep.decisions_log and any("omega_min" in line for line in rep.decisions_log)


def test_switches_change_nothing_when_already_tight():
    g = petersen().graph
    opts = HeuristicOptions(enable_weight_reduction=False, enable_path_replacement=False)
    assert run_heuristic(g, 0, opts).lam == 9


def test_greedy_fallback_when_cap_is_tiny():
    b = blanusa2().graph
    r = b.vid("x_1")
    rep = run_heuristic(b, r, HeuristicOptions(path_combination_cap=1))
    assert validate_certificate(rep.certificate) == []
    assert any("greedy" in line for line in rep.decisions_log)
    assert rep.lam >= theorem1_lower_bound(b, r)


def test_determinism():
    b = blanusa2().graph
    r = b.vid("z_2")
    a, c = run_heuristic(b, r), run_heuristic(b, r)
    assert a.certificate == c.certificate and a.decisions_log == c.decisions_log


def test_random_graph_outputs_are_sound():
    rng = random.Random(7)
    ran = 0
    for i in range(60):
        g = random_connected_graph(rng, rng.randint(3, 9), rng.uniform(0.2, 0.7), f"h{i}")
        r = rng.randrange(g.n)
        if not has_peripheral_paths(g, r):
            continue
        rep = run_heuristic(g, r)
        assert validate_certificate(rep.certificate) == []
        assert rep.lam >= theorem1_lower_bound(g, r)
        assert rep.lam <= run_heuristic(g, r, do_refine=False).lam
        ran += 1
    assert ran >= 30


# ---------------------------------------------------------------- hypercube


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_cube_certificate(d):
    c = cube_certificate(d)
    assert len(c.strategies) == [1, 1, 2, 6, 24, 120][d]
    assert validate_certificate(c) == []
    level = min_weight(c)
    assert level == [1, 1, 2, 6, 24, 120][d]
    dist = bfs_distances(c.graph, c.root)
    for j in range(1, d + 1):
        ring = [v for v in range(c.graph.n) if dist[v] == j]
        assert sum(combined_weight(c, v) for v in ring) == max(2 ** (d - j), comb(d, j)) * level
    assert wfl_ratio(c) == cube_lower_bound(d)


def test_cube3_values():
    c = cube_certificate(3)
    assert (certificate_total(c), min_weight(c), wfl_ratio(c)) == (48, 6, 8)


def test_cube_errors():
    with pytest.raises(InvalidParameter):
        cube_certificate(1)
    with pytest.raises(ResourceLimit):
        cube_certificate(8)
    with pytest.raises(ResourceLimit):
        cube_certificate(4, budget=10)
