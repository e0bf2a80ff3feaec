"""Ground truth: exact optimum, exhaustive walk enumeration, instance generation."""

from __future__ import annotations

import random
from array import array
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from . import kernels
from .graph import Graph, build_graph
from .matching import (
    AlternatingWalk,
    EdgeSet,
    TwoMatching,
    _edge_set,
    degrees,
    is_amenable,
    is_augmenting,
)

DEFAULT_BUDGET = 50_000_000
FLAVORS = ("uniform", "triangle-rich", "subcubic")


class OracleBudgetExceeded(RuntimeError):
    """The branch-and-bound ran out of nodes before proving optimality."""


@dataclass(frozen=True)
class OracleResult:
    optimum_size: int
    witness: frozenset[int]
    node_budget: int
    nodes_used: int = 0


def greedy_initial_matching(g: Graph) -> TwoMatching:
    """Maximal triangle-free 2-matching, adding edges in id order."""
    chosen: set[int] = set()
    deg = [0] * g.n
    per_edge = g.edge_triangles()
    for e, (u, v) in enumerate(g.edges):
        if deg[u] >= 2 or deg[v] >= 2:
            continue
        if any(all(f in chosen for f in t.edge_ids if f != e) for t in per_edge[e]):
            continue
        chosen.add(e)
        deg[u] += 1
        deg[v] += 1
    return TwoMatching(g, frozenset(chosen))


def triangle_csr(g: Graph) -> tuple[array, array]:
    """Per edge, the other two edges of every triangle through it."""
    start, pairs = array("l", [0]), array("l")
    for e, tris in enumerate(g.edge_triangles()):
        for t in tris:
            pairs.extend(f for f in t.edge_ids if f != e)
        start.append(len(pairs) // 2)
    return start, pairs


def upper_bound(g: Graph) -> int:
    return sum(min(2, g.degree(v)) for v in range(g.n)) // 2


def brute_force_optimum(g: Graph, limit: int = DEFAULT_BUDGET) -> OracleResult:
    """Exact maximum triangle-free 2-matching by branch and bound.

    Raises:
        OracleBudgetExceeded: more than ``limit`` search nodes were needed.
    """
    greedy = greedy_initial_matching(g)
    ub = upper_bound(g)
    if len(greedy) >= ub:
        return OracleResult(len(greedy), greedy.edges, limit, 0)
    eu = array("l", (u for u, _ in g.edges))
    ev = array("l", (v for _, v in g.edges))
    start, pairs = triangle_csr(g)
    size, mask, nodes = kernels.bnb_optimum(g.n, eu, ev, start, pairs, len(greedy), ub, limit)
    if size < 0:
        raise OracleBudgetExceeded(f"branch and bound exceeded {limit} nodes")
    if mask is None:
        return OracleResult(len(greedy), greedy.edges, limit, nodes)
    witness = frozenset(e for e in range(g.m) if mask[e])
    return OracleResult(size, witness, limit, nodes)


def subset_optimum(g: Graph) -> int:
    """Optimum by plain subset enumeration; only for very small graphs."""
    from .matching import is_triangle_free, is_two_matching

    for k in range(g.m, -1, -1):
        for sub in combinations(range(g.m), k):
            if is_two_matching(g, sub) and is_triangle_free(g, sub):
                return k
    return 0


class WalkCapExceeded(RuntimeError):
    pass


def enumerate_alternating_walks(
    g: Graph, m: EdgeSet, s: int, length_cap: int, first_matched: bool = False
) -> list[AlternatingWalk]:
    """All alternating walks from ``s`` with 1..``length_cap`` edges.

    The first edge is unmatched unless ``first_matched``.  Vertices may
    repeat, edges may not.
    """
    edges = _edge_set(m)
    out: list[AlternatingWalk] = []
    used: set[int] = set()
    ids: list[int] = []

    def extend(v: int, want_matched: bool) -> None:
        if len(ids) >= length_cap:
            return
        for w, e in g.adjacency[v]:
            if e in used or (e in edges) != want_matched:
                continue
            used.add(e)
            ids.append(e)
            out.append(AlternatingWalk(tuple(ids), s))
            extend(w, not want_matched)
            ids.pop()
            used.discard(e)

    extend(s, first_matched)
    return out


def enumerate_amenable_augmenting_walks(
    g: Graph, m: EdgeSet, s: int, length_cap: Optional[int] = None, *, strict_cap: bool = False
) -> list[AlternatingWalk]:
    """Amenable augmenting walks from ``s``.

    ``length_cap`` defaults to the edge count, which covers every walk.  With
    ``strict_cap`` a walk cut off by the cap raises :class:`WalkCapExceeded`.
    """
    edges = _edge_set(m)
    cap = g.m if length_cap is None else length_cap
    if degrees(g, edges)[s] >= 2:
        return []
    walks = enumerate_alternating_walks(g, edges, s, cap)
    if strict_cap and cap < g.m and any(len(w) == cap for w in walks):
        raise WalkCapExceeded(f"walks from {s} reach the cap {cap}")
    return [w for w in walks if len(w) % 2 == 1 and is_augmenting(g, edges, w) and is_amenable(g, edges, w)]


def generate_instance(n: int, edge_probability: float, seed: int, flavor: str = "uniform") -> Graph:
    """Deterministic random graph; all randomness comes from ``seed``."""
    if n < 0 or not 0.0 <= edge_probability <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    rng = random.Random(seed)
    pairs: set[tuple[int, int]] = set()
    if flavor == "uniform":
        for u, v in combinations(range(n), 2):
            if rng.random() < edge_probability:
                pairs.add((u, v))
    elif flavor == "subcubic":
        deg = [0] * n
        candidates = list(combinations(range(n), 2))
        rng.shuffle(candidates)
        for u, v in candidates:
            if deg[u] < 3 and deg[v] < 3 and rng.random() < edge_probability:
                pairs.add((u, v))
                deg[u] += 1
                deg[v] += 1
    else:
        # overlapping planted triangles plus sparse background noise
        if n >= 3:
            for _ in range(max(1, n // 2 + 1)):
                a, b, c = sorted(rng.sample(range(n), 3))
                pairs.update({(a, b), (a, c), (b, c)})
                if rng.random() < 0.5:
                    d = rng.choice([x for x in range(n) if x not in (a, b, c)] or [a])
                    if d != a:
                        pairs.update({tuple(sorted((d, b))), tuple(sorted((d, c)))})
        for u, v in combinations(range(n), 2):
            if rng.random() < edge_probability / 3:
                pairs.add((u, v))
    return build_graph(n, sorted(pairs))


def enumerate_gadget_reachability(gg, edge_mask, root: int) -> tuple[frozenset[int], frozenset[int]]:
    """Nodes of the gadget reached from ``root`` by even alternating paths, and
    exposed nodes reached by odd ones, over the edges in ``edge_mask`` plus
    every matched edge.  Plain path enumeration; for small gadgets only.
    """
    even, aug = {root}, set()
    on_path = bytearray(gg.node_count)
    on_path[root] = 1

    def extend(v: int) -> None:
        # v was reached by an even path; leave through an unmatched edge
        for i in gg.incident(v):
            ge = gg.adj_edge[i]
            if not edge_mask[ge] or gg.mate_edge[v] == ge:
                continue
            w = gg.other(ge, v)
            if on_path[w]:
                continue
            x = gg.mate[w]
            if x < 0:
                aug.add(w)
                continue
            if on_path[x]:
                continue
            even.add(x)
            on_path[w] = on_path[x] = 1
            extend(x)
            on_path[w] = on_path[x] = 0

    extend(root)
    return frozenset(even), frozenset(aug)


def structure_audit(S) -> Optional[str]:
    """Compare the reachability recorded by a search structure with path
    enumeration over the gadget edges it has scanned; ``None`` when equal.

    Reachability is per vertex of G: even paths to some copy of a vertex,
    and augmenting paths to some copy of a deficient vertex.
    """
    gg = S.gg
    mask = bytearray(S.seen)
    for ge in range(gg.edge_count):
        if not S.allowed[ge] or ge in S.s_excluded:
            mask[ge] = 0
    even, aug = enumerate_gadget_reachability(gg, mask, S.root)
    copies = 2 * gg.graph.n

    def vertices(nodes) -> frozenset[int]:
        return frozenset(v >> 1 for v in nodes if v < copies)

    want_even, want_aug = vertices(even), vertices(aug)
    have_even = vertices(v for v in range(gg.node_count) if S.even[v])
    have_aug = vertices(v for v in range(gg.node_count) if S.odd[v] and gg.mate[v] < 0)
    if want_even == have_even and want_aug == have_aug:
        return None
    return (
        f"even: structure {sorted(have_even)} vs enumeration {sorted(want_even)}; "
        f"augmenting: structure {sorted(have_aug)} vs enumeration {sorted(want_aug)}"
    )
