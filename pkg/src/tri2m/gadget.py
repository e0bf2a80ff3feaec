"""Split-vertex gadget graph with half-edges and a hinge-presence bitmap.

Node numbering: copy ``i`` (0 or 1) of vertex ``v`` is node ``2*v + i``.
Splitters follow, two per unmatched edge in edge-id order; for the k-th
unmatched edge ``(u, v)`` with ``u < v`` node ``2n + 2k`` sits at ``u`` and
``2n + 2k + 1`` at ``v``.

Gadget edges are emitted in G edge-id order: one ``pair`` edge for a matched
edge, and ``half, half, core, half, half`` for an unmatched one.  The
working graph (G₂) is the gadget plus ``present``, one byte per gadget edge.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import Graph
from .matching import AlternatingWalk, EdgeSet, WalkError, _edge_set

HALF, CORE, PAIR = 0, 1, 2
KIND_NAMES = {HALF: "half", CORE: "core", PAIR: "pair"}


class HingeError(ValueError):
    """Invalid hinge, or a removal/restoration that does not toggle state."""


@dataclass(frozen=True, order=True)
class Hinge:
    """Unmatched edge ``non_m_edge`` followed by matched edge ``m_edge`` at ``pivot``.

    ``m_edge`` is ``None`` for the half-edge that leads to an exposed copy of
    the pivot (no matched edge follows there).
    """

    non_m_edge: int
    m_edge: Optional[int]
    pivot: int

    @property
    def is_pseudo(self) -> bool:
        return self.m_edge is None


@dataclass(eq=False)
class GadgetGraph:
    graph: Graph
    matching: frozenset[int]
    node_count: int
    eu: array  # endpoint arrays, one entry per gadget edge
    ev: array
    kind: bytes
    g_edge: array  # underlying G edge id
    mate: array  # M' partner per node, -1 if exposed
    mate_edge: array  # gadget edge to the M' partner, -1 if exposed
    copy_edge: array  # matched G edge owned by a copy node, -1 if exposed
    adj_start: array  # CSR adjacency over gadget edges
    adj_edge: array
    splitter_of: dict  # (G edge, vertex) -> splitter node
    core_of: dict  # G edge -> core gadget edge
    pair_of: dict  # matched G edge -> pair gadget edge
    copy_assignment: dict  # matched G edge -> (copy of u, copy of v)
    present: bytearray = field(default_factory=bytearray)

    # -- node helpers -------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.eu)

    @property
    def n_copies(self) -> int:
        return 2 * self.graph.n

    def is_copy(self, node: int) -> bool:
        return node < 2 * self.graph.n

    def vertex_of(self, node: int) -> int:
        """G vertex owning a copy node, or the vertex a splitter sits at."""
        if node < 2 * self.graph.n:
            return node >> 1
        k, side = divmod(node - 2 * self.graph.n, 2)
        return self._unmatched[k][1 + side]

    def splitter_edge(self, node: int) -> int:
        return self._unmatched[(node - 2 * self.graph.n) >> 1][0]

    def other(self, ge: int, node: int) -> int:
        u = self.eu[ge]
        return self.ev[ge] if u == node else u

    def incident(self, node: int) -> range:
        return range(self.adj_start[node], self.adj_start[node + 1])

    def exposed_copies(self, v: int) -> list[int]:
        return [c for c in (2 * v, 2 * v + 1) if self.mate[c] < 0]

    def copy_toward(self, v: int, m_edge: int) -> int:
        """Copy of ``v`` matched through G edge ``m_edge``."""
        for c in (2 * v, 2 * v + 1):
            if self.copy_edge[c] == m_edge:
                return c
        raise HingeError(f"edge {m_edge} is not a matched edge at vertex {v}")

    def half_edges_at(self, e: int, v: int) -> tuple[int, int]:
        """The two half-edges of unmatched edge ``e`` at endpoint ``v``."""
        base = self.core_of[e]
        u, _ = self.graph.edges[e]
        return (base - 2, base - 1) if v == u else (base + 1, base + 2)

    def half_edge_copy(self, ge: int) -> int:
        u, v = self.eu[ge], self.ev[ge]
        return u if self.is_copy(u) else v

    def half_edge_splitter(self, ge: int) -> int:
        u, v = self.eu[ge], self.ev[ge]
        return v if self.is_copy(u) else u

    def node_name(self, node: int) -> str:
        if self.is_copy(node):
            return f"v{(node >> 1) + 1}.{(node & 1) + 1}"
        e = self.splitter_edge(node)
        u, v = self.graph.edges[e]
        return f"x{self.vertex_of(node) + 1}[{u + 1},{v + 1}]"

    def audit(self) -> list[str]:
        """Structural invariant violations, empty when the gadget is sound."""
        problems = []
        deg_mp = [0] * self.node_count
        for ge in range(self.edge_count):
            if self.kind[ge] in (CORE, PAIR):
                deg_mp[self.eu[ge]] += 1
                deg_mp[self.ev[ge]] += 1
        if any(d > 1 for d in deg_mp):
            problems.append("node with two M' edges")
        for node in range(2 * self.graph.n, self.node_count):
            if self.adj_start[node + 1] - self.adj_start[node] != 3:
                problems.append(f"splitter {node} does not have degree 3")
        deg = [0] * self.graph.n
        for e in self.matching:
            for v in self.graph.edges[e]:
                deg[v] += 1
        for v in range(self.graph.n):
            if deg[v] < 2 and not self.exposed_copies(v):
                problems.append(f"deficient vertex {v} has no exposed copy")
        return problems

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GadgetGraph):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.matching == other.matching
            and self.eu == other.eu
            and self.ev == other.ev
            and self.kind == other.kind
            and self.mate == other.mate
            and self.present == other.present
        )

    __hash__ = None  # type: ignore[assignment]

    def copy(self) -> "GadgetGraph":
        """Shallow clone sharing the topology but owning a fresh bitmap."""
        clone = GadgetGraph(**{f: getattr(self, f) for f in self.__dataclass_fields__})
        clone.present = bytearray(self.present)
        clone._unmatched = self._unmatched
        return clone


def build_gadget(g: Graph, m: EdgeSet) -> GadgetGraph:
    edges_m = _edge_set(m)
    n = g.n
    copy_edge = array("l", [-1] * (2 * n))
    for v in range(n):
        slot = 0
        for _, e in g.adjacency[v]:  # adjacency is in increasing edge-id order
            if e in edges_m:
                if slot > 1:
                    raise ValueError(f"vertex {v} has matched degree above 2")
                copy_edge[2 * v + slot] = e
                slot += 1
    unmatched = [(e, g.edges[e][0], g.edges[e][1]) for e in range(g.m) if e not in edges_m]
    node_count = 2 * n + 2 * len(unmatched)
    eu, ev, g_edge = array("l"), array("l"), array("l")
    kind = bytearray()
    splitter_of, core_of, pair_of, assignment = {}, {}, {}, {}
    k = 0
    for e, (u, v) in enumerate(g.edges):
        if e in edges_m:
            cu = 2 * u if copy_edge[2 * u] == e else 2 * u + 1
            cv = 2 * v if copy_edge[2 * v] == e else 2 * v + 1
            pair_of[e] = len(eu)
            assignment[e] = (cu, cv)
            eu.append(cu), ev.append(cv), kind.append(PAIR), g_edge.append(e)
            continue
        xu, xv = 2 * n + 2 * k, 2 * n + 2 * k + 1
        k += 1
        splitter_of[(e, u)], splitter_of[(e, v)] = xu, xv
        for a, b, kd in (
            (2 * u, xu, HALF),
            (2 * u + 1, xu, HALF),
            (xu, xv, CORE),
            (xv, 2 * v, HALF),
            (xv, 2 * v + 1, HALF),
        ):
            if kd == CORE:
                core_of[e] = len(eu)
            eu.append(a), ev.append(b), kind.append(kd), g_edge.append(e)
    mate = array("l", [-1] * node_count)
    mate_edge = array("l", [-1] * node_count)
    buckets: list[list[int]] = [[] for _ in range(node_count)]
    for ge in range(len(eu)):
        a, b = eu[ge], ev[ge]
        buckets[a].append(ge)
        buckets[b].append(ge)
        if kind[ge] != HALF:
            mate[a], mate[b] = b, a
            mate_edge[a] = mate_edge[b] = ge
    adj_start, adj_edge = array("l", [0]), array("l")
    for bucket in buckets:
        adj_edge.extend(bucket)
        adj_start.append(len(adj_edge))
    gg = GadgetGraph(
        graph=g,
        matching=edges_m,
        node_count=node_count,
        eu=eu,
        ev=ev,
        kind=bytes(kind),
        g_edge=g_edge,
        mate=mate,
        mate_edge=mate_edge,
        copy_edge=copy_edge,
        adj_start=adj_start,
        adj_edge=adj_edge,
        splitter_of=splitter_of,
        core_of=core_of,
        pair_of=pair_of,
        copy_assignment=assignment,
        present=bytearray([1]) * len(eu),
    )
    gg._unmatched = unmatched
    return gg


# -- hinges ------------------------------------------------------------------


def hinge_id(gg: GadgetGraph, e: int, e_prime: Optional[int], pivot: Optional[int] = None) -> Hinge:
    """Validate ``(e, e')`` as a hinge and return it.

    ``e_prime=None`` names the half-edge of ``e`` into an exposed copy of
    ``pivot``.
    """
    g = gg.graph
    if not 0 <= e < g.m or e in gg.matching:
        raise HingeError(f"edge {e} is not an unmatched edge")
    if e_prime is None:
        if pivot is None or pivot not in g.edges[e] or not gg.exposed_copies(pivot):
            raise HingeError("a pseudo-hinge needs a pivot with an exposed copy")
        return Hinge(e, None, pivot)
    if not 0 <= e_prime < g.m or e_prime not in gg.matching:
        raise HingeError(f"edge {e_prime} is not a matched edge")
    shared = set(g.edges[e]) & set(g.edges[e_prime])
    if len(shared) != 1:
        raise HingeError(f"edges {e} and {e_prime} do not share exactly one endpoint")
    (c,) = shared
    if pivot is not None and pivot != c:
        raise HingeError(f"pivot {pivot} is not the shared endpoint {c}")
    return Hinge(e, e_prime, c)


def counterpart_half_edge(gg: GadgetGraph, h: Hinge) -> int:
    """Gadget edge id of the half-edge realising ``h``."""
    x = gg.splitter_of.get((h.non_m_edge, h.pivot))
    if x is None:
        raise HingeError(f"{h} does not name an unmatched edge at its pivot")
    if h.m_edge is None:
        exposed = gg.exposed_copies(h.pivot)
        if not exposed:
            raise HingeError(f"vertex {h.pivot} has no exposed copy")
        target = exposed[-1]
    else:
        target = gg.copy_toward(h.pivot, h.m_edge)
    for ge in gg.half_edges_at(h.non_m_edge, h.pivot):
        if gg.half_edge_copy(ge) == target:
            return ge
    raise HingeError(f"no half-edge for {h}")  # pragma: no cover


def hinge_of_half_edge(gg: GadgetGraph, ge: int) -> Hinge:
    if gg.kind[ge] != HALF:
        raise HingeError(f"gadget edge {ge} is not a half-edge")
    copy = gg.half_edge_copy(ge)
    m_edge = gg.copy_edge[copy]
    return Hinge(gg.g_edge[ge], None if m_edge < 0 else m_edge, copy >> 1)


def all_hinges(gg: GadgetGraph) -> list[Hinge]:
    """Every proper hinge (pseudo-hinges excluded)."""
    out = []
    for ge in range(gg.edge_count):
        if gg.kind[ge] == HALF:
            h = hinge_of_half_edge(gg, ge)
            if not h.is_pseudo:
                out.append(h)
    return out


def remove_hinge(gg: GadgetGraph, h: Hinge) -> int:
    ge = counterpart_half_edge(gg, h)
    if not gg.present[ge]:
        raise HingeError(f"{h} is already removed")
    gg.present[ge] = 0
    return ge


def restore_hinge(gg: GadgetGraph, h: Hinge) -> int:
    ge = counterpart_half_edge(gg, h)
    if gg.present[ge]:
        raise HingeError(f"{h} is already present")
    gg.present[ge] = 1
    return ge


def splitter_degree(gg: GadgetGraph, node: int) -> int:
    return sum(1 for i in gg.incident(node) if gg.present[gg.adj_edge[i]])


# -- walks -------------------------------------------------------------------


def project_walk(gg: GadgetGraph, nodes: Sequence[int]) -> AlternatingWalk:
    """Map a G₂ path, given as its node sequence, to a walk in G."""
    if not nodes:
        return AlternatingWalk((), 0)
    ids = []
    for a, b in zip(nodes, nodes[1:]):
        ge = _gadget_edge_between(gg, a, b)
        if ge is None:
            raise WalkError(f"nodes {a} and {b} are not adjacent in the gadget")
        if not gg.present[ge]:
            raise WalkError(f"walk uses removed half-edge {ge}")
        if gg.kind[ge] != HALF:
            ids.append(gg.g_edge[ge])
    if not gg.is_copy(nodes[0]) or not gg.is_copy(nodes[-1]):
        raise WalkError("a projected walk must start and end at vertex copies")
    return AlternatingWalk(tuple(ids), nodes[0] >> 1)


def _gadget_edge_between(gg: GadgetGraph, a: int, b: int) -> Optional[int]:
    for i in gg.incident(a):
        ge = gg.adj_edge[i]
        if gg.other(ge, a) == b:
            return ge
    return None


def lift_walk(gg: GadgetGraph, w: AlternatingWalk) -> list[int]:
    """Node sequence of the G₂ path that projects onto ``w``.

    The walk must alternate with respect to the gadget's matching.  Endpoints
    use exposed copies; a closed walk on an isolated-in-M vertex uses both.
    """
    g = gg.graph
    if not w.edge_ids:
        free = gg.exposed_copies(w.start_vertex)
        return [free[0] if free else 2 * w.start_vertex]
    verts = w.vertices(g)
    ids = w.edge_ids
    k = len(ids)

    def copy_at(pos: int) -> int:
        # copy used at verts[pos], fixed by the matched edge traversed there
        v = verts[pos]
        if pos > 0 and ids[pos - 1] in gg.matching:
            return gg.copy_toward(v, ids[pos - 1])
        if pos < k and ids[pos] in gg.matching:
            return gg.copy_toward(v, ids[pos])
        free = gg.exposed_copies(v)
        if not free:
            raise WalkError(f"walk ends at saturated vertex {v}")
        if pos == k and verts[0] == v and len(free) > 1:
            return free[1]
        return free[0]

    nodes = [copy_at(0)]
    for i, e in enumerate(ids):
        if e in gg.matching:
            nodes.append(copy_at(i + 1))
        else:
            a, b = verts[i], verts[i + 1]
            nodes.append(gg.splitter_of[(e, a)])
            nodes.append(gg.splitter_of[(e, b)])
            nodes.append(copy_at(i + 1))
    return nodes


def dump(gg: GadgetGraph) -> str:
    """Text dump: nodes, gadget edges with kind tags, then absent hinges."""
    lines = []
    for node in range(gg.node_count):
        tag = "copy" if gg.is_copy(node) else "splitter"
        lines.append(f"n {node} {tag} {gg.node_name(node)}")
    for ge in range(gg.edge_count):
        mark = "M'" if gg.kind[ge] != HALF else "-"
        lines.append(
            f"g {ge} {KIND_NAMES[gg.kind[ge]]} {gg.eu[ge]} {gg.ev[ge]} {mark}"
        )
    for ge in range(gg.edge_count):
        if gg.kind[ge] == HALF and not gg.present[ge]:
            h = hinge_of_half_edge(gg, ge)
            tail = "-" if h.m_edge is None else str(h.m_edge)
            lines.append(f"h - {h.non_m_edge} {tail}")
    return "\n".join(lines) + "\n"
