import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import hinge_swap_small
from tri2m.gadget import (
    CORE,
    HALF,
    PAIR,
    HingeError,
    all_hinges,
    build_gadget,
    counterpart_half_edge,
    dump,
    hinge_id,
    lift_walk,
    project_walk,
    remove_hinge,
    restore_hinge,
    splitter_degree,
)
from tri2m.graph import build_graph
from tri2m.matching import (
    AlternatingWalk,
    degrees,
    deficient_vertices,
    is_alternating,
    is_augmenting,
)
from tri2m.oracle import (
    enumerate_alternating_walks,
    enumerate_gadget_reachability,
    generate_instance,
    greedy_initial_matching,
)
from tri2m.search import root_copy


def random_case(seed, n_max=7):
    rng = random.Random(seed)
    flavor = rng.choice(["uniform", "triangle-rich", "subcubic"])
    g = generate_instance(rng.randint(2, n_max), rng.uniform(0.3, 0.9), seed, flavor)
    m = frozenset(e for e in greedy_initial_matching(g).edges if rng.random() < 0.75)
    return g, m


def test_counts_on_nine_vertex_instance():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    assert (gg.node_count, gg.edge_count) == (28, 30)


def test_counts_on_k3():
    g = build_graph(3, list(combinations(range(3), 2)))
    gg = build_gadget(g, frozenset())
    assert (gg.node_count, gg.edge_count) == (12, 15)


def test_edge_kinds_and_matched_edges():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    kinds = [gg.kind[ge] for ge in range(gg.edge_count)]
    unmatched = inst.graph.m - len(inst.m)
    assert kinds.count(PAIR) == len(inst.m)
    assert kinds.count(CORE) == unmatched
    assert kinds.count(HALF) == 4 * unmatched


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_built_gadget_passes_audit(seed):
    g, m = random_case(seed)
    gg = build_gadget(g, m)
    assert gg.audit() == []
    deg = degrees(g, m)
    for v in range(g.n):
        assert (len(gg.exposed_copies(v)) >= 1) == (deg[v] < 2)
    # hinge count: one per (unmatched edge, matched edge at either endpoint)
    expected = sum(deg[u] + deg[v] for e, (u, v) in enumerate(g.edges) if e not in m)
    assert len(all_hinges(gg)) == expected


def test_counterpart_of_named_hinge():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    bc, ce = inst.eid("bc"), inst.eid("ce")
    c = inst.vertex("c")
    h = hinge_id(gg, bc, ce)
    assert h.pivot == c
    ge = counterpart_half_edge(gg, h)
    assert gg.half_edge_copy(ge) == gg.copy_toward(c, ce)
    assert gg.half_edge_splitter(ge) == gg.splitter_of[(bc, c)]


def test_hinge_id_errors():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    with pytest.raises(HingeError):
        hinge_id(gg, inst.eid("ab"), inst.eid("ac"))  # first edge matched
    with pytest.raises(HingeError):
        hinge_id(gg, inst.eid("sd"), inst.eid("ce"))  # disjoint


def test_remove_restore_round_trip():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    original = gg.copy()
    h = hinge_id(gg, inst.eid("bc"), inst.eid("ce"))
    x = gg.splitter_of[(inst.eid("bc"), inst.vertex("c"))]
    assert splitter_degree(gg, x) == 3
    remove_hinge(gg, h)
    assert splitter_degree(gg, x) == 2
    assert "h - " in dump(gg)
    with pytest.raises(HingeError):
        remove_hinge(gg, h)
    restore_hinge(gg, h)
    assert gg == original
    with pytest.raises(HingeError):
        restore_hinge(gg, h)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_removals_keep_core_edges(seed):
    g, m = random_case(seed)
    gg = build_gadget(g, m)
    rng = random.Random(seed)
    for h in all_hinges(gg):
        if rng.random() < 0.5:
            remove_hinge(gg, h)
    for ge in range(gg.edge_count):
        if gg.kind[ge] == CORE:
            assert gg.present[ge]
            for x in (gg.eu[ge], gg.ev[ge]):
                assert splitter_degree(gg, x) >= 1


def test_project_lift_long_walk():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    w = inst.walk("long")
    assert project_walk(gg, lift_walk(gg, w)) == w
    assert project_walk(gg, []) == AlternatingWalk((), 0)


def test_project_rejects_removed_half_edge():
    inst = hinge_swap_small()
    gg = build_gadget(inst.graph, inst.m)
    nodes = lift_walk(gg, inst.walk("long"))
    remove_hinge(gg, hinge_id(gg, inst.eid("bc"), inst.eid("ab")))
    with pytest.raises(Exception):
        project_walk(gg, nodes)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_lift_project_round_trip(seed):
    g, m = random_case(seed)
    gg = build_gadget(g, m)
    for s in sorted(deficient_vertices(g, m)):
        for w in enumerate_alternating_walks(g, m, s, 6)[:40]:
            if not is_augmenting(g, m, w):
                continue
            p = project_walk(gg, lift_walk(gg, w))
            assert p == w
            assert is_alternating(g, m, p)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_reachability_matches_graph_walks(seed):
    g, m = random_case(seed, n_max=6)
    gg = build_gadget(g, m)
    full = bytearray([1]) * gg.edge_count
    for s in sorted(deficient_vertices(g, m)):
        even, aug = enumerate_gadget_reachability(gg, full, root_copy(gg, s))
        gadget_even = {v >> 1 for v in even if gg.is_copy(v)}
        gadget_aug = {v >> 1 for v in aug if gg.is_copy(v)}
        walks = enumerate_alternating_walks(g, m, s, g.m)
        graph_even = {s} | {w.end_vertex(g) for w in walks if len(w) % 2 == 0}
        graph_aug = {w.end_vertex(g) for w in walks if is_augmenting(g, m, w)}
        assert gadget_even == graph_even
        assert gadget_aug == graph_aug
