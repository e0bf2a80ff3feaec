import random
from array import array

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tri2m import kernels
from tri2m.gadget import build_gadget
from tri2m.oracle import generate_instance, greedy_initial_matching, triangle_csr, upper_bound

compiled = kernels.compiled_kernels
python = kernels.python_kernels

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def test_implementation_label():
    assert kernels.IMPLEMENTATION in ("python", "cython")
    assert python.IMPLEMENTATION == "python"


def random_gadget(seed):
    rng = random.Random(seed)
    g = generate_instance(rng.randint(2, 12), rng.uniform(0.2, 0.8), seed, rng.choice(["uniform", "triangle-rich"]))
    m = frozenset(e for e in greedy_initial_matching(g).edges if rng.random() < 0.7)
    gg = build_gadget(g, m)
    mask = bytearray(1 if rng.random() < 0.85 else 0 for _ in range(gg.edge_count))
    node_ok = bytearray(1 if rng.random() < 0.9 else 0 for _ in range(gg.node_count))
    roots = [v for v in range(gg.node_count) if gg.mate[v] < 0 and gg.is_copy(v)]
    return rng, gg, mask, node_ok, roots


@needs_compiled
@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_search_kernels_agree(seed):
    rng, gg, mask, node_ok, roots = random_gadget(seed)
    args = (gg.adj_start, gg.adj_edge, gg.eu, gg.ev, gg.mate)
    for r in roots:
        assert python.find_path(*args, mask, r) == compiled.find_path(*args, mask, r)
        for ok in (None, node_ok):
            assert bytes(python.even_set(*args, mask, ok, r)) == bytes(compiled.even_set(*args, mask, ok, r))
        t = rng.randrange(gg.node_count)
        assert python.even_reachable(*args, mask, node_ok, r, t) == compiled.even_reachable(*args, mask, node_ok, r, t)


@needs_compiled
@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_branch_and_bound_kernels_agree(seed):
    rng = random.Random(seed)
    g = generate_instance(rng.randint(0, 9), rng.uniform(0.2, 0.9), seed, rng.choice(["uniform", "triangle-rich"]))
    eu = array("l", (u for u, _ in g.edges))
    ev = array("l", (v for _, v in g.edges))
    start, pairs = triangle_csr(g)
    ub = upper_bound(g)
    a = python.bnb_optimum(g.n, eu, ev, start, pairs, 0, ub, 10**7)
    b = compiled.bnb_optimum(g.n, eu, ev, start, pairs, 0, ub, 10**7)
    assert a[0] == b[0] and a[2] == b[2]
    assert (a[1] is None) == (b[1] is None)
    if a[1] is not None:
        assert bytes(a[1]) == bytes(b[1])
