"""Decomposing ``M xor N`` into amenable M-alternating paths and cycles.

The constructive route first peels off chorded alternating 4-cycles, then
grows maximal walks while refusing bumpy turns, starting inside a
dangerous subgraph whenever one is left.  Its output is always checked.
When the check fails, an exhaustive search over per-vertex pairings of
``M - N`` edges with ``N - M`` edges takes over (at most two maximal
pairings exist per vertex).  ``Decomposition.route`` records which route
produced the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .graph import Graph
from .matching import (
    AlternatingWalk,
    EdgeSet,
    TwoMatching,
    _edge_set,
    apply_walk,
    is_alternating,
    is_amenable,
    is_augmenting,
    is_triangle_free,
    is_two_matching,
)


class DecompositionError(RuntimeError):
    """No valid decomposition or augmenting element could be produced."""


@dataclass(frozen=True)
class Element:
    walk: AlternatingWalk
    kind: str  # "path" or "cycle"

    @property
    def is_cycle(self) -> bool:
        return self.kind == "cycle"


@dataclass(frozen=True)
class Decomposition:
    elements: tuple[Element, ...]
    route: str = "constructive"

    def walks(self) -> list[AlternatingWalk]:
        return [el.walk for el in self.elements]


@dataclass(frozen=True)
class DangerousSubgraph:
    """``(a,b), (a,d), (d,c)`` in ``M - N`` and ``(d,b), (b,c)`` in ``N - M``."""

    a: int
    b: int
    c: int
    d: int
    m_edges: tuple[int, int, int]
    n_edges: tuple[int, int]


def _check_inputs(g: Graph, m: frozenset[int], n: frozenset[int]) -> None:
    for name, s in (("M", m), ("N", n)):
        if not (is_two_matching(g, s) and is_triangle_free(g, s)):
            raise ValueError(f"{name} is not a triangle-free 2-matching")


def _dangerous(g: Graph, m_only: set[int], n_only: set[int]) -> list[DangerousSubgraph]:
    out = []
    for b in range(g.n):
        n_nb = [(x, e) for x, e in g.adjacency[b] if e in n_only]
        m_nb = [(x, e) for x, e in g.adjacency[b] if e in m_only]
        for (d, e_db), (c, e_bc) in product(n_nb, n_nb):
            if d == c:
                continue
            if not g.has_edge(d, c) or g.edge_id(d, c) not in m_only:
                continue
            for a, e_ab in m_nb:
                if a in (c, d) or not g.has_edge(a, d):
                    continue
                e_ad = g.edge_id(a, d)
                if e_ad in m_only:
                    out.append(
                        DangerousSubgraph(a, b, c, d, (e_ab, e_ad, g.edge_id(d, c)), (e_db, e_bc))
                    )
    out.sort(key=lambda ds: (ds.a, ds.b, ds.c, ds.d))
    return out


def find_dangerous_subgraphs(g: Graph, m: EdgeSet, n: EdgeSet) -> list[DangerousSubgraph]:
    """Every labelled occurrence of the five-edge pattern inside ``M xor N``."""
    ms, ns = _edge_set(m), _edge_set(n)
    return _dangerous(g, set(ms - ns), set(ns - ms))


def _in_triangle(g: Graph, union: frozenset[int], a: int, b: int, c: int) -> bool:
    return g.has_edge(a, c) and g.edge_id(a, c) in union


def _bumpy(g: Graph, m_only: set[int], n_only: set[int], union: frozenset[int], a: int, b: int, c: int) -> bool:
    if not (g.has_edge(a, b) and g.has_edge(b, c)):
        return False
    if g.edge_id(a, b) not in m_only or g.edge_id(b, c) not in n_only:
        return False
    if _in_triangle(g, union, a, b, c):
        return False
    for d, e_db in g.adjacency[b]:
        if d in (a, c) or e_db not in n_only:
            continue
        if (
            g.has_edge(a, d)
            and g.edge_id(a, d) in m_only
            and g.has_edge(d, c)
            and g.edge_id(d, c) in m_only
        ):
            return True
    return False


def is_bumpy(g: Graph, m: EdgeSet, n: EdgeSet, a: int, b: int, c: int) -> bool:
    """Whether the turn ``(a, b, c)`` is the bumpy traversal of a dangerous subgraph."""
    ms, ns = _edge_set(m), _edge_set(n)
    return _bumpy(g, set(ms - ns), set(ns - ms), ms | ns, a, b, c)


# -- construction ---------------------------------------------------------------------


def _chorded_four_cycles(g: Graph, m: frozenset[int], n: frozenset[int], residual: set[int]):
    """Yield one chorded alternating 4-cycle ``(a, b, c, d)`` in ``residual`` or None."""
    for e_ab in sorted(residual):
        if e_ab not in m:
            continue
        for a, b in (g.edges[e_ab], g.edges[e_ab][::-1]):
            for c, e_bc in g.adjacency[b]:
                if c == a or e_bc not in residual or e_bc not in n:
                    continue
                for d, e_cd in g.adjacency[c]:
                    if d in (a, b) or e_cd not in residual or e_cd not in m:
                        continue
                    if not g.has_edge(d, a):
                        continue
                    e_da = g.edge_id(d, a)
                    if e_da not in residual or e_da not in n:
                        continue
                    if g.has_edge(a, c) and g.edge_id(a, c) in m and g.has_edge(b, d) and g.edge_id(b, d) in n:
                        return a, (e_ab, e_bc, e_cd, e_da)
    return None


def _forced_pairs(g: Graph, m: frozenset[int], n: frozenset[int]) -> dict[tuple[int, int], int]:
    """``(v, e) -> f`` where e and f must be consecutive at v.

    This holds when e is N-only, f is M-only, and the third edge of their
    triangle is shared: otherwise e would close a triangle with M.
    """
    shared = m & n
    forced: dict[tuple[int, int], int] = {}
    for t in g.triangles():
        ids = t.edge_ids
        for i, s_e in enumerate(ids):
            if s_e not in shared:
                continue
            e1, e2 = ids[(i + 1) % 3], ids[(i + 2) % 3]
            for e, f in ((e1, e2), (e2, e1)):
                if e in n and e not in m and f in m and f not in n:
                    v = (set(g.edges[e]) & set(g.edges[f])).pop()
                    forced[(v, e)] = f
                    forced[(v, f)] = e
    return forced


def _grow(g, m, n_only_all, m_only_all, union, residual, walk_vertices, walk_edges, forced):
    """Extend the walk at its end while an unused opposite-type, non-bumpy edge exists."""
    while True:
        last = walk_edges[-1]
        prev, v = walk_vertices[-2], walk_vertices[-1]
        want_m = last not in m
        best = None
        must = forced.get((v, last))
        for w, e in g.adjacency[v]:
            if e not in residual or (e in m) != want_m:
                continue
            if must is not None and e != must:
                continue
            if must is None and forced.get((v, e), last) != last:
                continue
            # the turn prev-v-w, written with the matched edge first
            if want_m:
                bumpy = _bumpy(g, m_only_all, n_only_all, union, w, v, prev)
            else:
                bumpy = _bumpy(g, m_only_all, n_only_all, union, prev, v, w)
            if bumpy:
                continue
            # turns inside a triangle of M + N come first, then lowest id
            key = (not _in_triangle(g, union, prev, v, w), e)
            if best is None or key < best[0]:
                best = (key, w, e)
        if best is None:
            return
        _, w, e = best
        residual.discard(e)
        walk_vertices.append(w)
        walk_edges.append(e)


def _constructive(g: Graph, m: frozenset[int], n: frozenset[int]) -> list[Element]:
    m_only, n_only = set(m - n), set(n - m)
    union = m | n
    residual = m_only | n_only
    forced = _forced_pairs(g, m, n)
    elements: list[Element] = []
    while True:
        found = _chorded_four_cycles(g, m, n, residual)
        if found is None:
            break
        start, ids = found
        residual.difference_update(ids)
        elements.append(Element(AlternatingWalk(ids, start), "cycle"))
    while residual:
        danger = _dangerous(g, m_only & residual, n_only & residual)
        if danger:
            ds = danger[0]
            verts, ids = [ds.d, ds.b, ds.a], [ds.n_edges[0], ds.m_edges[0]]
        else:
            e = min(residual)
            u, v = g.edges[e]
            verts, ids = [u, v], [e]
        residual.difference_update(ids)
        _grow(g, m, n_only, m_only, union, residual, verts, ids, forced)
        # grow backwards by extending the reversed walk
        verts.reverse()
        ids.reverse()
        _grow(g, m, n_only, m_only, union, residual, verts, ids, forced)
        closed = False
        if len(ids) >= 4 and len(ids) % 2 == 0 and verts[0] == verts[-1]:
            a, b = ids[-1], ids[0]
            if (a in m) != (b in m):
                m_first = a if a in m else b
                x = g.other_end(m_first, verts[0])
                other = b if m_first == a else a
                z = g.other_end(other, verts[0])
                closed = not _bumpy(g, m_only, n_only, union, x, verts[0], z)
        walk = AlternatingWalk(tuple(ids), verts[0])
        elements.append(Element(walk, "cycle" if closed else "path"))
    return elements


def _pairing_choices(g: Graph, m: frozenset[int], support: set[int], v: int) -> list[tuple[tuple[int, int], ...]]:
    ms = [e for _, e in g.adjacency[v] if e in support and e in m]
    ns = [e for _, e in g.adjacency[v] if e in support and e not in m]
    if not ms or not ns:
        return [()]
    if len(ms) == 1 and len(ns) == 1:
        return [((ms[0], ns[0]),)]
    if len(ms) == 1:
        return [((ms[0], ns[0]),), ((ms[0], ns[1]),)]
    if len(ns) == 1:
        return [((ms[0], ns[0]),), ((ms[1], ns[0]),)]
    return [((ms[0], ns[0]), (ms[1], ns[1])), ((ms[0], ns[1]), (ms[1], ns[0]))]


def _walks_from_pairing(g: Graph, support: set[int], pairing: dict[tuple[int, int], int]) -> list[Element]:
    """Trace edges through the per-vertex pairing; ``pairing[(v, e)]`` is e's partner at v."""
    used: set[int] = set()
    out = []

    def trace(e: int, v: int) -> tuple[list[int], int]:
        # walk forward from vertex v along e
        ids = [e]
        used.add(e)
        cur = g.other_end(e, v)
        while True:
            nxt = pairing.get((cur, ids[-1]))
            if nxt is None or nxt in used:
                return ids, cur
            used.add(nxt)
            ids.append(nxt)
            cur = g.other_end(nxt, cur)

    # paths first: start at an unpaired end
    for e in sorted(support):
        if e in used:
            continue
        for v in g.edges[e]:
            if (v, e) not in pairing:
                ids, _ = trace(e, v)
                out.append(Element(AlternatingWalk(tuple(ids), v), "path"))
                break
    for e in sorted(support):
        if e in used:
            continue
        v = g.edges[e][0]
        ids, _ = trace(e, v)
        out.append(Element(AlternatingWalk(tuple(ids), v), "cycle"))
    return out


def _pairing_search(g: Graph, m: frozenset[int], support: set[int], accept) -> Optional[list[Element]]:
    vertices = sorted({v for e in support for v in g.edges[e]})
    options = [_pairing_choices(g, m, support, v) for v in vertices]
    for combo in product(*options):
        pairing: dict[tuple[int, int], int] = {}
        for v, pairs in zip(vertices, combo):
            for x, y in pairs:
                pairing[(v, x)] = y
                pairing[(v, y)] = x
        elements = _walks_from_pairing(g, support, pairing)
        if accept(elements):
            return elements
    return None


def _element_ok(g: Graph, m: frozenset[int], el: Element) -> bool:
    w = el.walk
    if not is_alternating(g, m, w):
        return False
    if el.is_cycle:
        if len(w) < 4 or len(w) % 2 or w.end_vertex(g) != w.start_vertex:
            return False
        # the closing pair must alternate too
        if (w.edge_ids[0] in m) == (w.edge_ids[-1] in m):
            return False
    return is_amenable(g, m, w, closed=el.is_cycle)


def decompose(g: Graph, m: EdgeSet, n: EdgeSet) -> Decomposition:
    """Split ``M xor N`` into amenable M-alternating paths and cycles.

    Raises:
        ValueError: ``m`` or ``n`` is not a triangle-free 2-matching.
        DecompositionError: no valid decomposition was found (never expected).
    """
    ms, ns = _edge_set(m), _edge_set(n)
    _check_inputs(g, ms, ns)
    elements = _constructive(g, ms, ns)
    d = Decomposition(tuple(elements), "constructive")
    if verify_decomposition(g, ms, ns, d):
        return d
    accept = lambda els: all(_element_ok(g, ms, el) for el in els)
    # keep the chorded 4-cycles and search pairings on what is left
    cycles = [el for el in elements[: _leading_four_cycles(elements)]]
    rest = set(ms ^ ns) - {e for el in cycles for e in el.walk.edge_ids}
    found = _pairing_search(g, ms, rest, accept)
    if found is not None:
        d = Decomposition(tuple(cycles + found), "pairing-residual")
        if verify_decomposition(g, ms, ns, d):
            return d
    found = _pairing_search(g, ms, set(ms ^ ns), accept)
    if found is None:
        raise DecompositionError("no amenable decomposition found")
    return Decomposition(tuple(found), "pairing-full")


def _leading_four_cycles(elements: list[Element]) -> int:
    k = 0
    while k < len(elements) and elements[k].is_cycle and len(elements[k].walk) == 4:
        k += 1
    return k


def verify_decomposition(g: Graph, m: EdgeSet, n: EdgeSet, d: Decomposition) -> bool:
    """Edge-disjoint, covers exactly ``M xor N``, and every element alternates and is amenable."""
    ms, ns = _edge_set(m), _edge_set(n)
    seen: set[int] = set()
    for el in d.elements:
        for e in el.walk.edge_ids:
            if e in seen:
                return False
            seen.add(e)
        if not _element_ok(g, ms, el):
            return False
    return seen == set(ms ^ ns)


def augmenting_element(g: Graph, m: EdgeSet, n: EdgeSet) -> Optional[AlternatingWalk]:
    """An amenable M-augmenting element of some decomposition of ``M xor N``."""
    ms, ns = _edge_set(m), _edge_set(n)

    def pick(elements: Iterable[Element]) -> Optional[AlternatingWalk]:
        for el in elements:
            if not el.is_cycle and is_augmenting(g, ms, el.walk) and is_amenable(g, ms, el.walk, closed=False):
                return el.walk
        return None

    walk = pick(decompose(g, ms, ns).elements)
    if walk is not None:
        return walk
    found = _pairing_search(g, ms, set(ms ^ ns), lambda els: pick(els) is not None)
    return pick(found) if found is not None else None


def oracle_guided_augment(g: Graph, m: EdgeSet, n_opt: EdgeSet) -> TwoMatching:
    """Apply an amenable augmenting element of ``M xor N``; needs ``|N| > |M|``."""
    ms, ns = _edge_set(m), _edge_set(n_opt)
    if len(ns) <= len(ms):
        raise ValueError("n_opt must be larger than m")
    walk = augmenting_element(g, ms, ns)
    if walk is None:
        raise DecompositionError("decomposition has no augmenting element")
    result = apply_walk(ms, walk, g)
    if not (is_two_matching(g, result) and is_triangle_free(g, result)) or len(result) != len(ms) + 1:
        raise DecompositionError(f"augmenting element {walk} is not feasible")
    return TwoMatching(g, result)
