import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_tf_matching, two_triangle_walk
from tri2m.decomposition import (
    Decomposition,
    Element,
    _chorded_four_cycles,
    _leading_four_cycles,
    augmenting_element,
    decompose,
    find_dangerous_subgraphs,
    is_bumpy,
    oracle_guided_augment,
    verify_decomposition,
)
from tri2m.graph import build_graph
from tri2m.matching import (
    AlternatingWalk,
    is_amenable,
    is_augmenting,
    is_feasible,
    is_triangle_free,
    is_two_matching,
)
from tri2m.oracle import brute_force_optimum, generate_instance


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def dangerous_instance():
    # a=0, b=1, c=2, d=3
    g = build_graph(4, [(0, 1), (0, 3), (3, 2), (3, 1), (1, 2)])
    m = {g.edge_id(0, 1), g.edge_id(0, 3), g.edge_id(3, 2)}
    n = {g.edge_id(3, 1), g.edge_id(1, 2)}
    return g, m, n


def test_dangerous_pattern_found_once():
    g, m, n = dangerous_instance()
    (ds,) = find_dangerous_subgraphs(g, m, n)
    assert (ds.a, ds.b, ds.c, ds.d) == (0, 1, 2, 3)


def test_bumpy_examples():
    g, m, n = dangerous_instance()
    assert is_bumpy(g, m, n, 0, 1, 2)
    assert not is_bumpy(g, m, n, 0, 1, 3)  # (a,b,d) lies in a triangle of M and N
    c5 = cycle(5)
    assert not is_bumpy(c5, {0}, {1}, 0, 1, 2)


def test_equal_matchings_give_empty_decomposition():
    g = cycle(5)
    d = decompose(g, {0, 2}, {0, 2})
    assert d.elements == ()
    assert verify_decomposition(g, {0, 2}, {0, 2}, d)


def test_empty_against_five_cycle():
    # with M empty an alternating walk has one edge, so every edge is its own path
    g = cycle(5)
    d = decompose(g, set(), set(range(5)))
    assert sorted(el.walk.edge_ids for el in d.elements) == [(e,) for e in range(5)]
    assert all(not el.is_cycle and is_augmenting(g, set(), el.walk) for el in d.elements)
    assert verify_decomposition(g, set(), set(range(5)), d)


def test_decompose_rejects_bad_input():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        decompose(g, {0, 1, 2}, set())


def test_verify_rejects_duplicated_edge():
    g = cycle(5)
    d = decompose(g, set(), set(range(5)))
    doubled = Decomposition(d.elements + (Element(AlternatingWalk((0,), 0), "path"),))
    assert not verify_decomposition(g, set(), set(range(5)), doubled)


def test_verify_rejects_interleaved_walk():
    inst = two_triangle_walk()
    w = inst.walk("interleaved")
    n = frozenset(inst.m ^ set(w.edge_ids))
    d = Decomposition((Element(w, "path"),))
    assert not verify_decomposition(inst.graph, inst.m, n, d)
    good = Decomposition((Element(inst.walk("amenable"), "path"),))
    assert verify_decomposition(inst.graph, inst.m, inst.m ^ set(inst.walk("amenable").edge_ids), good)


def test_augment_single_edge():
    g = build_graph(2, [(0, 1)])
    assert oracle_guided_augment(g, set(), {0}).edges == {0}
    with pytest.raises(ValueError):
        oracle_guided_augment(g, {0}, {0})


def test_augment_two_triangle_instance():
    inst = two_triangle_walk()
    m = inst.edge_set(["ab", "ac"])
    best = brute_force_optimum(inst.graph)
    out = oracle_guided_augment(inst.graph, m, best.witness)
    assert len(out) == 3
    assert is_triangle_free(inst.graph, out.edges)


def random_pair(seed, n_max=9):
    rng = random.Random(seed)
    flavor = rng.choice(["uniform", "triangle-rich", "subcubic"])
    g = generate_instance(rng.randint(2, n_max), rng.uniform(0.3, 0.9), seed, flavor)
    return g, random_tf_matching(g, rng, rng.choice([1.0, 0.7])), random_tf_matching(g, rng)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposition_is_valid(seed):
    g, m, n = random_pair(seed)
    d = decompose(g, m, n)
    assert verify_decomposition(g, m, n, d)
    for el in d.elements:
        w = el.walk
        if not el.is_cycle and is_augmenting(g, m, w) and is_amenable(g, m, w, closed=False):
            assert is_feasible(g, m, w)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_no_chorded_four_cycle_left_after_first_stage(seed):
    g, m, n = random_pair(seed)
    d = decompose(g, m, n)
    if d.route != "constructive":
        return
    k = _leading_four_cycles(list(d.elements))
    residual = {e for el in d.elements[k:] for e in el.walk.edge_ids}
    assert _chorded_four_cycles(g, m, n, residual) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_iterated_augmentation_reaches_optimum(seed):
    rng = random.Random(seed)
    g = generate_instance(rng.randint(2, 8), rng.uniform(0.3, 0.9), seed, rng.choice(["uniform", "triangle-rich"]))
    best = brute_force_optimum(g)
    current = frozenset()
    while len(current) < best.optimum_size:
        current = oracle_guided_augment(g, current, best.witness).edges
        assert is_two_matching(g, current) and is_triangle_free(g, current)
    assert len(current) == best.optimum_size


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_relabeling_preserves_counts(seed):
    g, m, n = random_pair(seed, n_max=8)
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    h = build_graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])
    mh = {h.edge_id(perm[g.edges[e][0]], perm[g.edges[e][1]]) for e in m}
    nh = {h.edge_id(perm[g.edges[e][0]], perm[g.edges[e][1]]) for e in n}
    d, dh = decompose(g, m, n), decompose(h, mh, nh)
    assert verify_decomposition(h, mh, nh, dh)
    # element counts depend on tie-breaking by label, so only totals are compared
    assert sum(len(w) for w in d.walks()) == sum(len(w) for w in dh.walks())


def test_augmenting_element_none_when_not_larger():
    g = cycle(5)
    assert augmenting_element(g, set(range(5)), set(range(5))) is None
