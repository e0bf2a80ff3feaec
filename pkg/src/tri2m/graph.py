"""Undirected simple graphs, triangle enumeration and DIMACS-style I/O.

Vertices are the integers ``0 .. n-1``.  Edge identifiers are assigned in
input order.  Files use 1-based vertex numbers; the conversion happens in
:func:`parse_graph` and :func:`format_graph` only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for malformed graph input (loops, duplicates, bad endpoints)."""


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[int, int, int]
    edge_ids: tuple[int, int, int]

    def other_vertex(self, u: int, v: int) -> int:
        for w in self.vertices:
            if w != u and w != v:
                return w
        raise ValueError(f"({u}, {v}) is not an edge of {self.vertices}")


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``edges[k]`` is the pair ``(u, v)`` with ``u < v`` for edge id ``k``.
    ``adjacency[v]`` lists ``(neighbor, edge_id)`` in increasing edge id order.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)
    _index: dict = field(repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        """Return the id of edge ``(u, v)``; raise ``KeyError`` if absent."""
        if u > v:
            u, v = v, u
        return self._index[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._index

    def other_end(self, edge: int, v: int) -> int:
        a, b = self.edges[edge]
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} is not an endpoint of edge {edge}")

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def triangles(self) -> tuple[Triangle, ...]:
        cached = self._cache.get("triangles")
        if cached is None:
            cached = tuple(_scan_triangles(self))
            self._cache["triangles"] = cached
        return cached

    def edge_triangles(self) -> tuple[tuple[Triangle, ...], ...]:
        """Triangles containing each edge, indexed by edge id."""
        cached = self._cache.get("edge_triangles")
        if cached is None:
            per_edge: list[list[Triangle]] = [[] for _ in self.edges]
            for t in self.triangles():
                for e in t.edge_ids:
                    per_edge[e].append(t)
            cached = tuple(tuple(ts) for ts in per_edge)
            self._cache["edge_triangles"] = cached
        return cached

    def canonical_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))


def build_graph(vertex_count: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Build a simple graph on vertices ``0 .. vertex_count-1``.

    Raises:
        GraphError: on a loop, a duplicate edge, or an endpoint out of range.
            The message names the offending pair.
    """
    if vertex_count < 0:
        raise GraphError(f"negative vertex count {vertex_count}")
    edges: list[tuple[int, int]] = []
    index: dict = {}
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(vertex_count)]
    for pair in edge_list:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphError(f"endpoint out of range in edge ({u}, {v})")
        if u == v:
            raise GraphError(f"loop edge ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        if key in index:
            raise GraphError(f"duplicate edge ({u}, {v})")
        eid = len(edges)
        index[key] = eid
        edges.append(key)
        adjacency[u].append((v, eid))
        adjacency[v].append((u, eid))
    return Graph(
        vertex_count=vertex_count,
        edges=tuple(edges),
        adjacency=tuple(tuple(a) for a in adjacency),
        _index=index,
    )


def _scan_triangles(g: Graph) -> list[Triangle]:
    # neighbor-intersection scan; each triangle reported once at its smallest vertex
    nbrs = [dict(adj) for adj in g.adjacency]
    out = []
    for u in range(g.n):
        higher = sorted(w for w in nbrs[u] if w > u)
        for i, v in enumerate(higher):
            for w in higher[i + 1:]:
                e_vw = nbrs[v].get(w)
                if e_vw is not None:
                    out.append(Triangle((u, v, w), (nbrs[u][v], nbrs[u][w], e_vw)))
    return out


def enumerate_triangles(g: Graph) -> tuple[Triangle, ...]:
    """All 3-cliques of ``g``, each once, in lexicographic vertex order."""
    return g.triangles()


def brute_force_triangles(g: Graph) -> list[tuple[int, int, int]]:
    """Reference triangle list from a scan of all vertex triples."""
    return [
        (a, b, c)
        for a, b, c in combinations(range(g.n), 3)
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
    ]


def parse_graph(text: str) -> Graph:
    """Parse ``p edge <n> <m>`` / ``e <u> <v>`` text (1-based endpoints)."""
    n = None
    declared_m = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        try:
            if tag == "p":
                if len(tokens) != 4 or tokens[1] != "edge":
                    raise GraphError(f"line {lineno}: expected 'p edge <n> <m>'")
                n, declared_m = int(tokens[2]), int(tokens[3])
            elif tag == "e":
                if n is None:
                    raise GraphError(f"line {lineno}: edge before problem line")
                if len(tokens) != 3:
                    raise GraphError(f"line {lineno}: expected 'e <u> <v>'")
                pairs.append((int(tokens[1]) - 1, int(tokens[2]) - 1))
            else:
                raise GraphError(f"line {lineno}: unknown line type {tag!r}")
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"line {lineno}: {exc}") from None
    if n is None:
        raise GraphError("missing problem line 'p edge <n> <m>'")
    if declared_m != len(pairs):
        raise GraphError(f"problem line declares {declared_m} edges, found {len(pairs)}")
    try:
        return build_graph(n, pairs)
    except GraphError as exc:
        # report pairs 1-based, as they appear in the file
        raise GraphError(_one_based_message(str(exc))) from None


def _one_based_message(msg: str) -> str:
    import re

    return re.sub(
        r"\((-?\d+), (-?\d+)\)",
        lambda mo: f"({int(mo.group(1)) + 1}, {int(mo.group(2)) + 1})",
        msg,
    )


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {line}" for line in comment.splitlines())
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as f:
        return parse_graph(f.read())


def write_graph(path, g: Graph, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_graph(g, comment))
