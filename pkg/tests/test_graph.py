from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tri2m.graph import (
    GraphError,
    brute_force_triangles,
    build_graph,
    enumerate_triangles,
    format_graph,
    parse_graph,
)


def complete(n):
    return build_graph(n, list(combinations(range(n), 2)))


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return build_graph(n, chosen)


def test_build_k3():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert (g.n, g.m) == (3, 3)
    assert g.edge_id(2, 0) == 2


def test_build_c5_has_no_triangles():
    g = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert g.m == 5
    assert enumerate_triangles(g) == ()


def test_duplicate_edge_rejected():
    with pytest.raises(GraphError, match="duplicate"):
        build_graph(3, [(0, 1), (1, 0)])


def test_loop_rejected():
    with pytest.raises(GraphError):
        build_graph(3, [(1, 1)])


def test_endpoint_out_of_range():
    with pytest.raises(GraphError):
        build_graph(2, [(0, 2)])


def test_k3_triangle():
    (t,) = enumerate_triangles(complete(3))
    assert t.vertices == (0, 1, 2)
    assert sorted(t.edge_ids) == [0, 1, 2]


def test_k4_has_four_triangles():
    assert len(enumerate_triangles(complete(4))) == 4


def test_adjacency_consistent():
    g = complete(5)
    for e, (u, v) in enumerate(g.edges):
        assert sum(1 for w, f in g.adjacency[u] if f == e and w == v) == 1
        assert sum(1 for w, f in g.adjacency[v] if f == e and w == u) == 1


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_triangles_match_triple_scan(g):
    assert sorted(t.vertices for t in enumerate_triangles(g)) == sorted(brute_force_triangles(g))


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_format_parse_round_trip(g):
    h = parse_graph(format_graph(g, comment="round trip"))
    assert h.n == g.n
    assert h.edges == g.edges


def test_parse_is_whitespace_tolerant_and_one_based():
    g = parse_graph("c hello\n  p   edge 3 2\n\ne 1  2\n e 2 3 \n")
    assert g.edges == ((0, 1), (1, 2))


def test_parse_errors_name_one_based_pair():
    with pytest.raises(GraphError, match=r"\(1, 1\)|1 1"):
        parse_graph("p edge 2 1\ne 1 1\n")
    with pytest.raises(GraphError):
        parse_graph("p edge 2 2\ne 1 2\n")  # edge count mismatch
    with pytest.raises(GraphError):
        parse_graph("e 1 2\n")  # missing header
