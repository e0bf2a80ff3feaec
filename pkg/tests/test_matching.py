import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import blocked_triangle, hinge_swap_small, two_triangle_walk
from tri2m.graph import build_graph
from tri2m.matching import (
    AlternatingWalk,
    MatchingError,
    TwoMatching,
    WalkError,
    apply_walk,
    classify_triangle,
    deficient_vertices,
    format_matching,
    format_walk,
    is_alternating,
    is_amenable,
    is_augmenting,
    is_feasible,
    is_triangle_free,
    is_two_matching,
    parse_matching,
    parse_walks,
    walk_from_vertices,
)
from tri2m.oracle import enumerate_alternating_walks, generate_instance, greedy_initial_matching


def complete(n):
    return build_graph(n, list(combinations(range(n), 2)))


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


# -- degree and triangle checks ------------------------------------------------------


def test_two_matching_examples():
    assert is_two_matching(cycle(5), range(5))
    assert is_two_matching(complete(3), range(3))
    assert not is_two_matching(complete(4), range(5))
    assert is_two_matching(complete(4), [])


def test_triangle_free_examples():
    k3 = complete(3)
    assert is_triangle_free(k3, {k3.edge_id(0, 1), k3.edge_id(1, 2)})
    assert not is_triangle_free(k3, range(3))
    inst = hinge_swap_small()
    assert is_triangle_free(inst.graph, inst.m)


def test_two_matching_type_rejects_degree_three():
    with pytest.raises(MatchingError):
        TwoMatching(complete(4), frozenset(range(5)))


def test_deficient_vertices():
    assert deficient_vertices(cycle(5), range(5)) == frozenset()
    assert deficient_vertices(complete(3), []) == {0, 1, 2}
    inst = hinge_swap_small()
    # degree scan over the listed matching edges
    deg = {v: 0 for v in inst.names}
    for e in inst.matching:
        deg[e[0]] += 1
        deg[e[1]] += 1
    expected = {inst.vertex(v) for v, d in deg.items() if d < 2}
    assert deficient_vertices(inst.graph, inst.m) == expected


# -- triangle classification ---------------------------------------------------------


def test_classify_type_two_and_one():
    g = complete(3)
    (t,) = g.triangles()
    c2 = classify_triangle(g, {g.edge_id(0, 1), g.edge_id(0, 2)}, t)
    assert (c2.type_index, c2.top_vertex) == (2, 0)
    c1 = classify_triangle(g, {g.edge_id(1, 2)}, t)
    assert (c1.type_index, c1.top_vertex) == (1, 0)


def test_classify_type_zero_uses_timestamps():
    g = complete(3)
    (t,) = g.triangles()
    assert classify_triangle(g, set(), t).top_vertex is None
    assert classify_triangle(g, set(), t, {0: 1, 1: 2, 2: 3}).top_vertex == 0
    assert classify_triangle(g, set(), t, {0: 1, 1: 1, 2: 3}).top_vertex is None


# -- walks ------------------------------------------------------------------------------


def test_long_walk_alternating_augmenting_feasible():
    inst = hinge_swap_small()
    w = inst.walk("long")
    assert is_alternating(inst.graph, inst.m, w)
    assert is_augmenting(inst.graph, inst.m, w)
    assert is_feasible(inst.graph, inst.m, w)


def test_single_edge_between_isolated_vertices_augments():
    g = build_graph(2, [(0, 1)])
    assert is_augmenting(g, set(), AlternatingWalk((0,), 0))


def test_repeated_edge_not_alternating():
    g = cycle(4)
    assert not is_alternating(g, {1}, AlternatingWalk((0, 1, 1), 0))


def test_apply_identity_and_examples():
    inst = two_triangle_walk()
    assert apply_walk(inst.m, AlternatingWalk((), 0)) == inst.m
    got = apply_walk(inst.m, inst.walk("amenable"), inst.graph)
    assert got == inst.edge_set(["cd", "sa", "bc", "ad", "ez"])
    blocked = blocked_triangle()
    after = apply_walk(blocked.m, blocked.walk("short"), blocked.graph)
    assert blocked.edge_set(["ab", "ac", "bc"]) <= after


def test_apply_rejects_non_alternating():
    g = cycle(4)
    with pytest.raises(WalkError):
        apply_walk({0}, AlternatingWalk((1, 2), 1), g)


def test_feasibility_examples():
    blocked = blocked_triangle()
    assert not is_feasible(blocked.graph, blocked.m, blocked.walk("short"))
    inst = two_triangle_walk()
    assert is_feasible(inst.graph, inst.m, inst.walk("interleaved"))


def test_amenability_examples():
    inst = two_triangle_walk()
    assert is_amenable(inst.graph, inst.m, inst.walk("amenable"))
    assert not is_amenable(inst.graph, inst.m, inst.walk("interleaved"))
    small = hinge_swap_small()
    assert not is_amenable(small.graph, small.m, small.walk("short"))
    assert is_amenable(small.graph, small.m, small.walk("long"))


def test_empty_walk_is_trivially_fine():
    inst = two_triangle_walk()
    w = AlternatingWalk((), 0)
    assert is_alternating(inst.graph, inst.m, w)
    assert is_amenable(inst.graph, inst.m, w)
    assert is_feasible(inst.graph, inst.m, w)


def test_closed_walk_counts_wraparound_pair():
    # 4-cycle 0-1-2-3 with chord 0-2
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    m = {g.edge_id(0, 1), g.edge_id(2, 3), g.edge_id(0, 2)}
    w = walk_from_vertices(g, [1, 2, 3, 0, 1])
    assert is_alternating(g, m, w)
    assert w.is_closed(g)
    # triangle (0,1,2) is covered only by the pair (0,1),(1,2) that wraps around
    assert is_amenable(g, m, w)
    assert not is_amenable(g, m, w, closed=False)


# -- text formats ---------------------------------------------------------------------


def test_matching_round_trip():
    inst = two_triangle_walk()
    text = format_matching(inst.graph, inst.m)
    assert text.splitlines()[-1] == f"s {len(inst.m)}"
    assert parse_matching(inst.graph, text) == inst.m


def test_matching_parse_errors():
    inst = two_triangle_walk()
    with pytest.raises(MatchingError):
        parse_matching(inst.graph, "m 1 7\n")  # not an edge
    with pytest.raises(MatchingError):
        parse_matching(inst.graph, "m 1 2\ns 2\n")  # wrong size
    with pytest.raises(MatchingError):
        parse_matching(inst.graph, "m 1 2\nm 2 1\n")  # duplicate
    with pytest.raises(MatchingError):
        parse_matching(inst.graph, "x 1 2\n")


def test_walk_round_trip():
    inst = two_triangle_walk()
    w = inst.walk("amenable")
    (back,) = parse_walks(inst.graph, format_walk(inst.graph, w))
    assert back == w
    with pytest.raises(WalkError):
        parse_walks(inst.graph, "w 1 99\n")


# -- properties -----------------------------------------------------------------------


def random_case(seed):
    rng = random.Random(seed)
    flavor = rng.choice(["uniform", "triangle-rich", "subcubic"])
    g = generate_instance(rng.randint(3, 7), rng.uniform(0.3, 0.8), seed, flavor)
    m = greedy_initial_matching(g).edges
    m = frozenset(e for e in m if rng.random() < 0.7)
    return g, m


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_apply_is_involution(seed):
    g, m = random_case(seed)
    for s in range(g.n):
        for w in enumerate_alternating_walks(g, m, s, 5)[:30]:
            assert apply_walk(apply_walk(m, w, g), w) == m


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_augmenting_walks_keep_degree_bound_and_grow(seed):
    g, m = random_case(seed)
    for s in sorted(deficient_vertices(g, m)):
        for w in enumerate_alternating_walks(g, m, s, 7):
            if is_augmenting(g, m, w):
                after = apply_walk(m, w, g)
                assert is_two_matching(g, after)
                assert len(after) == len(m) + 1
