import random
from collections import deque
from fractions import Fraction
from math import comb

import pytest

from conftest import random_connected_graph
from wflpebble.catalog import paper_certificate
from wflpebble.certificate import (
    Certificate,
    Configuration,
    InvalidCertificate,
    Strategy,
    config_weight,
)
from wflpebble.exact import (
    BudgetExceeded,
    ExactResult,
    SolveLimits,
    compositions_colex,
    is_solvable,
    lemma1_check,
    pebbling_number,
    pebbling_number_target,
)
from wflpebble.families import blanusa2, cube, flower, petersen
from wflpebble.graph import distance, from_edge_list

BIG = SolveLimits(max_vertices=20)


def path(n):
    labs = [f"p{i}" for i in range(n)]
    return from_edge_list(labs, list(zip(labs, labs[1:])), f"P{n}")


def cycle(n):
    labs = [f"c{i}" for i in range(n)]
    return from_edge_list(labs, list(zip(labs, labs[1:] + labs[:1])), f"C{n}")


def naive_solvable(g, counts, r):
    """Breadth-first closure over all pebbling moves, no pruning at all."""
    start = tuple(counts)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s[r]:
            return True
        for v in range(g.n):
            if s[v] >= 2:
                for u in g.adj[v]:
                    nxt = list(s)
                    nxt[v] -= 2
                    nxt[u] += 1
                    nxt = tuple(nxt)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return False


def random_configuration(rng, n, r, total):
    vec = [0] * n
    for _ in range(total):
        vec[rng.randrange(n)] += 1
    return vec


# ---------------------------------------------------------------- solvability


def test_trivial_anchors():
    g = petersen().graph
    for r in range(g.n):
        on_r = [0] * g.n
        on_r[r] = 1
        assert is_solvable(g, on_r, r)
        for v in range(g.n):
            if v != r:
                single = [0] * g.n
                single[v] = 1
                assert not is_solvable(g, single, r)
    assert not is_solvable(g, [0] * g.n, 0)


@pytest.mark.parametrize(
    "fg",
    [petersen(), flower(3), flower(5), blanusa2(), cube(4)],
    ids=lambda fg: fg.graph.name,
)
def test_single_stack(fg):
    g = fg.graph
    for t in fg.target_classes:
        r = g.vid(t)
        for v in range(g.n):
            if v == r:
                continue
            d = distance(g, v, r)
            conf = [0] * g.n
            conf[v] = 2**d
            assert is_solvable(g, conf, r, BIG)
            conf[v] -= 1
            assert not is_solvable(g, conf, r, BIG)


def test_against_naive_solver():
    rng = random.Random(11)
    for i in range(300):
        g = random_connected_graph(rng, rng.randint(2, 6), rng.uniform(0.2, 0.8), f"n{i}")
        r = rng.randrange(g.n)
        conf = random_configuration(rng, g.n, r, rng.randint(0, 9))
        assert is_solvable(g, conf, r) == naive_solvable(g, conf, r), (g, conf, r)


def test_monotone_under_adding_pebbles():
    rng = random.Random(5)
    for i in range(500):
        g = random_connected_graph(rng, rng.randint(2, 10), rng.uniform(0.15, 0.6), f"m{i}")
        r = rng.randrange(g.n)
        conf = random_configuration(rng, g.n, r, rng.randint(0, 12))
        more = list(conf)
        more[rng.randrange(g.n)] += 1
        if is_solvable(g, conf, r):
            assert is_solvable(g, more, r)
        if not is_solvable(g, more, r):
            assert not is_solvable(g, conf, r)


def test_input_errors():
    g = path(3)
    with pytest.raises(ValueError):
        is_solvable(g, [1, 0], 0)
    with pytest.raises(ValueError):
        is_solvable(g, [-1, 0, 3], 0)
    with pytest.raises(ValueError):
        is_solvable(g, [0, 0, 4], 7)
    with pytest.raises(ValueError):
        SolveLimits(max_states=0)


def test_budget_exceeded_is_raised():
    g = flower(5).graph
    with pytest.raises(BudgetExceeded):
        is_solvable(g, [0] + [1] * (g.n - 1), 0)  # 20 vertices > default 14
    p = petersen().graph
    with pytest.raises(BudgetExceeded):
        pebbling_number_target(p, 0, SolveLimits(max_states=20))
    with pytest.raises(BudgetExceeded):
        pebbling_number_target(p, 0, SolveLimits(max_total_pebbles=6))


# ---------------------------------------------------------------- enumeration


def test_colex_order():
    assert list(compositions_colex(2, 3)) == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    assert list(compositions_colex(0, 2)) == [(0, 0)]
    assert list(compositions_colex(3, 0)) == []
    for t, n in ((4, 3), (5, 5), (7, 4)):
        got = list(compositions_colex(t, n))
        assert len(got) == len(set(got)) == comb(t + n - 1, n - 1)
        assert all(sum(c) == t for c in got)
        assert got == sorted(got, key=lambda c: c[::-1])


# ---------------------------------------------------------------- pebbling numbers


def test_small_pebbling_numbers():
    k2 = path(2)
    assert pebbling_number_target(k2, 0).pi == pebbling_number_target(k2, 1).pi == 2
    assert pebbling_number_target(path(3), 0).pi == 4
    assert pebbling_number_target(path(3), 1).pi == 3
    assert pebbling_number(cycle(4)) == 4
    assert pebbling_number(cycle(5)) == 5
    assert pebbling_number(cube(3).graph) == 8


def test_witness():
    g = petersen().graph
    res = pebbling_number_target(g, g.vid("a_1"))
    assert res.pi == 10 and res.exhaustive
    assert res.witness_unsolvable.size == 9
    assert not is_solvable(g, res.witness_unsolvable, res.target)
    again = pebbling_number_target(g, g.vid("a_1"))
    assert again.witness_unsolvable == res.witness_unsolvable
    with pytest.raises(AssertionError):
        ExactResult(0, 3, Configuration((1, 0)))


def test_witness_is_colex_first():
    g = path(3)
    res = pebbling_number_target(g, 0)
    first = next(
        c for c in compositions_colex(res.pi - 1, 2) if not is_solvable(g, (0,) + c, 0)
    )
    assert res.witness_unsolvable.counts == (0,) + first


def test_parallel_matches_sequential():
    g = cycle(6)
    seq = pebbling_number_target(g, 0)
    par = pebbling_number_target(g, 0, jobs=2)
    assert (seq.pi, seq.witness_unsolvable) == (par.pi, par.witness_unsolvable)


def test_targets_argument():
    g = path(3)
    assert pebbling_number(g, targets=[1]) == 3
    assert pebbling_number(g) == 4


# ---------------------------------------------------------------- lemma check


def test_lemma_gate_rejects_invalid_certificate():
    g = path(3)
    bad = Strategy(g, 0, {1: 0, 2: 1}, {1: Fraction(1), 2: Fraction(1)})
    with pytest.raises(InvalidCertificate):
        lemma1_check(Certificate(g, 0, (bad,)))


def test_lemma_on_small_graphs():
    g = path(3)
    cert = Certificate(g, 0, (Strategy(g, 0, {1: 0, 2: 1}, {1: Fraction(2), 2: Fraction(1)}),))
    rep = lemma1_check(cert)
    assert rep.ok and rep.mode == "exhaustive" and rep.pi == 4
    assert rep.tightest_ratio == 1
    assert config_weight(cert.strategies[0], [0, 0, 0]) == 0
    rep = lemma1_check(paper_certificate("flower", 3, "z_0"), SolveLimits(max_total_pebbles=6), rng_seed=3)
    assert rep.mode == "sampled" and rep.note and rep.ok


def test_sampled_mode_needs_seed():
    c = paper_certificate("petersen")
    with pytest.raises(ValueError):
        lemma1_check(c, samples=10)
    a = lemma1_check(c, samples=200, rng_seed=1)
    b = lemma1_check(c, samples=200, rng_seed=1)
    assert a.ok and a.mode == "sampled" and a.configurations_checked == 200
    assert (a.unsolvable_checked, a.tightest_ratio) == (b.unsolvable_checked, b.tightest_ratio)
