"""2-matchings, alternating walks, and the checkers built on them.

A walk is a sequence of edge ids plus the vertex it starts from; vertices may
repeat but edges may not.  Every predicate here is a pure function of
``(graph, matching, walk)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

from .graph import Graph, Triangle


class MatchingError(ValueError):
    """Raised when an edge set violates the degree bound or a file is malformed."""


class WalkError(ValueError):
    """Raised for walks that are not well formed with respect to a graph."""


@dataclass(frozen=True)
class TwoMatching:
    graph: Graph
    edges: frozenset[int]

    def __post_init__(self) -> None:
        deg = [0] * self.graph.n
        for e in self.edges:
            if not 0 <= e < self.graph.m:
                raise MatchingError(f"edge id {e} out of range")
            for v in self.graph.edges[e]:
                deg[v] += 1
                if deg[v] > 2:
                    raise MatchingError(f"vertex {v} has degree {deg[v]} > 2")

    @classmethod
    def from_pairs(cls, g: Graph, pairs: Iterable[Sequence[int]]) -> "TwoMatching":
        return cls(g, frozenset(g.edge_id(u, v) for u, v in pairs))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e: object) -> bool:
        return e in self.edges

    def __iter__(self):
        return iter(sorted(self.edges))

    def degree(self, v: int) -> int:
        return sum(1 for _, e in self.graph.adjacency[v] if e in self.edges)

    def degrees(self) -> list[int]:
        return degrees(self.graph, self.edges)

    def pairs(self) -> list[tuple[int, int]]:
        return [self.graph.edges[e] for e in sorted(self.edges)]


EdgeSet = Union[TwoMatching, Iterable[int]]


def _edge_set(m: EdgeSet) -> frozenset[int]:
    if isinstance(m, TwoMatching):
        return m.edges
    if isinstance(m, frozenset):
        return m
    return frozenset(m)


def degrees(g: Graph, edges: Iterable[int]) -> list[int]:
    deg = [0] * g.n
    for e in edges:
        u, v = g.edges[e]
        deg[u] += 1
        deg[v] += 1
    return deg


@dataclass(frozen=True)
class AlternatingWalk:
    """Edge sequence traversed from ``start_vertex``.

    The alternation requirement is relative to a matching and is checked by
    :func:`is_alternating`, not at construction.
    """

    edge_ids: tuple[int, ...]
    start_vertex: int

    def __len__(self) -> int:
        return len(self.edge_ids)

    def vertices(self, g: Graph) -> list[int]:
        seq = [self.start_vertex]
        cur = self.start_vertex
        for e in self.edge_ids:
            cur = g.other_end(e, cur)
            seq.append(cur)
        return seq

    def end_vertex(self, g: Graph) -> int:
        return self.vertices(g)[-1]

    def is_closed(self, g: Graph) -> bool:
        """Closed even walk, i.e. an alternating cycle when alternation holds."""
        return (
            len(self.edge_ids) >= 2
            and len(self.edge_ids) % 2 == 0
            and self.end_vertex(g) == self.start_vertex
        )

    def reversed(self, g: Graph) -> "AlternatingWalk":
        return AlternatingWalk(tuple(reversed(self.edge_ids)), self.end_vertex(g))


def walk_from_vertices(g: Graph, vertices: Sequence[int]) -> AlternatingWalk:
    """Build a walk from its vertex sequence ``(v0, v1, ..., vk)``."""
    if not vertices:
        raise WalkError("a walk needs at least its start vertex")
    ids = []
    for u, v in zip(vertices, vertices[1:]):
        if not g.has_edge(u, v):
            raise WalkError(f"({u}, {v}) is not an edge")
        ids.append(g.edge_id(u, v))
    return AlternatingWalk(tuple(ids), int(vertices[0]))


@dataclass(frozen=True)
class TriangleClass:
    triangle: Triangle
    type_index: int
    top_vertex: Optional[int]


def is_two_matching(g: Graph, m: EdgeSet) -> bool:
    edges = _edge_set(m)
    if any(not 0 <= e < g.m for e in edges):
        return False
    return all(d <= 2 for d in degrees(g, edges))


def is_triangle_free(g: Graph, m: EdgeSet) -> bool:
    edges = _edge_set(m)
    return not any(all(e in edges for e in t.edge_ids) for t in g.triangles())


def triangles_in(g: Graph, m: EdgeSet) -> list[Triangle]:
    edges = _edge_set(m)
    return [t for t in g.triangles() if all(e in edges for e in t.edge_ids)]


def deficient_vertices(g: Graph, m: EdgeSet) -> frozenset[int]:
    return frozenset(v for v, d in enumerate(degrees(g, _edge_set(m))) if d < 2)


def classify_triangle(
    g: Graph,
    m: EdgeSet,
    t: Triangle,
    processed_order: Optional[Mapping[int, int]] = None,
) -> TriangleClass:
    """Type (number of matched edges) and top vertex of ``t``.

    For type 0 the top vertex is the one processed strictly first according
    to ``processed_order``; ties among the earliest give no top vertex.
    """
    a, b, c = t.vertices
    if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)):
        raise ValueError(f"{t.vertices} is not a triangle of the graph")
    edges = _edge_set(m)
    in_m = [e in edges for e in t.edge_ids]
    kind = sum(in_m)
    top: Optional[int] = None
    if kind in (1, 2):
        # the edge opposite the top is the odd one out: matched for type 1,
        # unmatched for type 2
        odd_one = in_m.index(kind == 1)
        u, v = g.edges[t.edge_ids[odd_one]]
        top = t.other_vertex(u, v)
    elif kind == 0 and processed_order is not None:
        stamps = sorted((processed_order[v], v) for v in t.vertices if v in processed_order)
        if stamps and (len(stamps) == 1 or stamps[0][0] < stamps[1][0]):
            top = stamps[0][1]
    return TriangleClass(t, kind, top)


def is_alternating(g: Graph, m: EdgeSet, w: AlternatingWalk) -> bool:
    edges = _edge_set(m)
    if not 0 <= w.start_vertex < g.n:
        return False
    if len(set(w.edge_ids)) != len(w.edge_ids):
        return False
    cur = w.start_vertex
    prev_in: Optional[bool] = None
    for e in w.edge_ids:
        if not 0 <= e < g.m:
            return False
        u, v = g.edges[e]
        if cur == u:
            cur = v
        elif cur == v:
            cur = u
        else:
            return False
        here = e in edges
        if prev_in is not None and here == prev_in:
            return False
        prev_in = here
    return True


def is_augmenting(g: Graph, m: EdgeSet, w: AlternatingWalk) -> bool:
    edges = _edge_set(m)
    if not is_alternating(g, edges, w):
        return False
    k = len(w.edge_ids)
    if k % 2 == 0 or w.edge_ids[0] in edges or w.edge_ids[-1] in edges:
        return False
    deg = degrees(g, edges)
    s, t = w.start_vertex, w.end_vertex(g)
    if s == t:
        # both ends land on the same vertex, which must take two new edges
        return deg[s] == 0
    return deg[s] < 2 and deg[t] < 2


def apply_walk(m: EdgeSet, w: AlternatingWalk, g: Optional[Graph] = None) -> frozenset[int]:
    """Return ``M xor P``.

    When ``g`` is given (or ``m`` is a :class:`TwoMatching`) the walk is
    checked for alternation first and :class:`WalkError` is raised otherwise.
    """
    edges = _edge_set(m)
    if g is None and isinstance(m, TwoMatching):
        g = m.graph
    if g is not None and not is_alternating(g, edges, w):
        raise WalkError("walk is not alternating with respect to the matching")
    return edges.symmetric_difference(w.edge_ids)


def is_feasible(g: Graph, m: EdgeSet, w: AlternatingWalk) -> bool:
    edges = _edge_set(m)
    if not is_alternating(g, edges, w):
        return False
    result = edges.symmetric_difference(w.edge_ids)
    return is_two_matching(g, result) and is_triangle_free(g, result)


def consecutive_pairs(
    g: Graph, w: AlternatingWalk, closed: Optional[bool] = None
) -> set[frozenset[int]]:
    """Unordered pairs of edges adjacent on ``w``.

    A closed walk also pairs its last edge with its first; ``closed`` overrides
    the default test (even length, returns to its start).
    """
    ids = w.edge_ids
    pairs = {frozenset((ids[i], ids[i + 1])) for i in range(len(ids) - 1)}
    if w.is_closed(g) if closed is None else closed:
        pairs.add(frozenset((ids[-1], ids[0])))
    return pairs


def non_amenable_triangles(
    g: Graph, m: EdgeSet, w: AlternatingWalk, closed: Optional[bool] = None
) -> list[Triangle]:
    """Triangles inside ``M | P`` none of whose edge pairs is consecutive on ``w``."""
    if not w.edge_ids:
        return []
    edges = _edge_set(m)
    on_walk = set(w.edge_ids)
    pairs = consecutive_pairs(g, w, closed)
    bad = []
    for t in g.triangles():
        if not all(e in edges or e in on_walk for e in t.edge_ids):
            continue
        e1, e2, e3 = t.edge_ids
        if (
            frozenset((e1, e2)) in pairs
            or frozenset((e1, e3)) in pairs
            or frozenset((e2, e3)) in pairs
        ):
            continue
        bad.append(t)
    return bad


def is_amenable(g: Graph, m: EdgeSet, w: AlternatingWalk, closed: Optional[bool] = None) -> bool:
    return not non_amenable_triangles(g, m, w, closed)


# --- text formats -----------------------------------------------------------


def format_matching(g: Graph, m: EdgeSet) -> str:
    edges = sorted(_edge_set(m))
    lines = [f"m {g.edges[e][0] + 1} {g.edges[e][1] + 1}" for e in edges]
    lines.append(f"s {len(edges)}")
    return "\n".join(lines) + "\n"


def parse_matching(g: Graph, text: str) -> frozenset[int]:
    """Parse ``m <u> <v>`` lines (1-based) and an optional ``s <size>`` line.

    Returns the edge-id set; the degree bound is not checked here so that
    :func:`tri2m.solver.verify` can report violations by vertex.
    """
    ids: list[int] = []
    size = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        try:
            if tokens[0] == "m" and len(tokens) == 3:
                u, v = int(tokens[1]) - 1, int(tokens[2]) - 1
                if not g.has_edge(u, v):
                    raise MatchingError(
                        f"line {lineno}: ({u + 1}, {v + 1}) is not an edge of the graph"
                    )
                ids.append(g.edge_id(u, v))
            elif tokens[0] == "s" and len(tokens) == 2:
                size = int(tokens[1])
            else:
                raise MatchingError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except ValueError as exc:
            if isinstance(exc, MatchingError):
                raise
            raise MatchingError(f"line {lineno}: {exc}") from None
    if len(set(ids)) != len(ids):
        raise MatchingError("matching lists an edge twice")
    if size is not None and size != len(ids):
        raise MatchingError(f"summary line says {size} edges, found {len(ids)}")
    return frozenset(ids)


def format_walk(g: Graph, w: AlternatingWalk) -> str:
    return "w " + " ".join(str(v + 1) for v in w.vertices(g))


def parse_walks(g: Graph, text: str) -> list[AlternatingWalk]:
    walks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] != "w" or len(tokens) < 2:
            raise WalkError(f"line {lineno}: expected 'w <v0> <v1> ...'")
        try:
            vertices = [int(tok) - 1 for tok in tokens[1:]]
        except ValueError:
            raise WalkError(f"line {lineno}: non-integer vertex") from None
        if any(not 0 <= v < g.n for v in vertices):
            raise WalkError(f"line {lineno}: vertex out of range")
        walks.append(walk_from_vertices(g, vertices))
    return walks
