"""Amenable augmenting-path search over the gadget graph.

One call of :func:`find_augmenting_path` explores *states*: sets ``R`` of
half-edges that are switched off in G₂.  Inside a state an instrumented
single-root Edmonds search grows the alternating structure S.  Whenever
it is about to extend S through a half-edge that could complete a
non-amenable pattern on some triangle, it asks whether the current
structure reaches the scanning node without that triangle's twin
half-edge.  If it cannot, the half-edge is removed (a *hinge removal*)
and the removal is remembered in a :class:`VulnerabilityRecord`.  Once S
later reaches the node without the twin, the removed half-edge and its
twin trade places (a *twin swap*) and S is rebuilt.

A walk found in a state is projected to G and verified.  If it is not
amenable, the state branches on the offending triangle.  Every removal
also spawns a child state in which the removed half-edge is allowed and
its partner is off.  An amenable augmenting walk that survives in the
parent therefore survives in at least one child.  Children are explored
depth first with memoisation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from . import kernels
from .gadget import (
    HALF,
    GadgetGraph,
    Hinge,
    build_gadget,
    counterpart_half_edge,
    hinge_of_half_edge,
    project_walk,
)
from .graph import Graph, Triangle
from .matching import (
    AlternatingWalk,
    EdgeSet,
    _edge_set,
    classify_triangle,
    degrees,
    is_augmenting,
    is_feasible,
    non_amenable_triangles,
)


class SearchError(RuntimeError):
    """The engine produced a walk that failed verification (an engine bug)."""


class SearchLimitError(RuntimeError):
    """The state budget of a single search was exhausted."""


# -- triangle bookkeeping ------------------------------------------------------


@dataclass(frozen=True)
class TriangleInfo:
    """Gadget-level view of one triangle under the current matching.

    For types 1 and 2 ``bad`` holds the two half-edges whose joint use makes
    a walk non-amenable on the triangle.  For type 0 ``edges`` holds the
    three unmatched edges; using all of them is what breaks amenability.
    """

    index: int
    triangle: Triangle
    type_index: int
    top: Optional[int]
    bad: tuple[int, ...]
    edges: tuple[int, ...]


def analyse_triangles(gg: GadgetGraph) -> tuple[list[TriangleInfo], dict[int, list[tuple[int, tuple[int, ...]]]]]:
    """Per-triangle info plus a map from half-edge to ``(triangle, partners)``.

    For a type-1/2 triangle the partner of a bad half-edge is its twin.  For
    type 0 every half-edge of an edge of the triangle lists the other two
    edges' ids (G edge ids, negated minus one to keep the kinds apart).
    """
    g = gg.graph
    infos: list[TriangleInfo] = []
    bad_map: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for idx, t in enumerate(g.triangles()):
        cls = classify_triangle(g, gg.matching, t)
        kind = cls.type_index
        if kind == 3:  # pragma: no cover - M is triangle-free
            continue
        a = cls.top_vertex
        bad: tuple[int, ...] = ()
        if kind == 2:
            b, c = (x for x in t.vertices if x != a)
            bc = g.edge_id(b, c)
            bad = (
                _other_half(gg, bc, b, gg.copy_toward(b, g.edge_id(a, b))),
                _other_half(gg, bc, c, gg.copy_toward(c, g.edge_id(a, c))),
            )
        elif kind == 1:
            b, c = (x for x in t.vertices if x != a)
            bc = g.edge_id(b, c)
            bad = (
                _other_half(gg, g.edge_id(a, b), b, gg.copy_toward(b, bc)),
                _other_half(gg, g.edge_id(a, c), c, gg.copy_toward(c, bc)),
            )
        info = TriangleInfo(idx, t, kind, a, bad, t.edge_ids if kind == 0 else ())
        infos.append(info)
        if kind in (1, 2):
            bad_map.setdefault(bad[0], []).append((idx, (bad[1],)))
            bad_map.setdefault(bad[1], []).append((idx, (bad[0],)))
        else:
            for e in t.edge_ids:
                others = tuple(-1 - f for f in t.edge_ids if f != e)
                for ge in _half_edges(gg, e):
                    bad_map.setdefault(ge, []).append((idx, others))
    return infos, bad_map


def _other_half(gg: GadgetGraph, e: int, v: int, good_copy: int) -> int:
    for ge in gg.half_edges_at(e, v):
        if gg.half_edge_copy(ge) != good_copy:
            return ge
    raise AssertionError("unreachable")  # pragma: no cover


def _half_edges(gg: GadgetGraph, e: int) -> tuple[int, ...]:
    core = gg.core_of[e]
    return (core - 2, core - 1, core + 1, core + 2)


def edge_exclusion(gg: GadgetGraph, e: int) -> tuple[int, int]:
    """Half-edges whose removal takes unmatched edge ``e`` out of G₂."""
    return gg.half_edges_at(e, gg.graph.edges[e][0])


# -- records and small value types ----------------------------------------------


@dataclass(frozen=True)
class VulnerabilityRecord:
    triangle: Triangle
    level: int
    vulnerable_hinge: Hinge
    half_edge: int
    witness: tuple  # (scanning node, far node, partner half-edges or excluded edges)


@dataclass(frozen=True)
class BlossomRecord:
    base: int
    nodes: tuple[int, ...]
    closing_edge: int
    step: int


@dataclass(frozen=True)
class Segment:
    inner: int  # copy inside the active blossom
    outer: int  # copy at the far end
    edge: int  # underlying unmatched G edge


@dataclass(frozen=True)
class HingeBundle:
    case: int
    hinges: tuple[Hinge, ...]


@dataclass(frozen=True)
class Tractability:
    tractable: bool
    triangle: Optional[Triangle] = None


@dataclass(frozen=True)
class AugmentingClass:
    kind: str  # strictly_S_augmenting | S_augmenting | delta_diminishing | none
    level: Optional[int] = None


@dataclass
class TwinMap:
    """Twin and companion relations between half-edges, keyed by gadget edge."""

    twins: dict[int, int] = field(default_factory=dict)
    companions: dict[int, int] = field(default_factory=dict)


def build_twin_map(gg: GadgetGraph) -> TwinMap:
    infos, _ = analyse_triangles(gg)
    tm = TwinMap()
    g = gg.graph
    for info in infos:
        if info.type_index in (1, 2):
            x, y = info.bad
            tm.twins[x], tm.twins[y] = y, x
        elif info.type_index == 0:
            # for each vertex a of t, the half-edges of (b,a) at a pair up as
            # twins, and the half-edge of (c,a) into the same copy is a companion
            for a in info.triangle.vertices:
                b, c = (x for x in info.triangle.vertices if x != a)
                hb = gg.half_edges_at(g.edge_id(a, b), a)
                hc = gg.half_edges_at(g.edge_id(a, c), a)
                tm.twins.setdefault(hb[0], hb[1])
                tm.twins.setdefault(hb[1], hb[0])
                for x in hb:
                    for y in hc:
                        if gg.half_edge_copy(x) == gg.half_edge_copy(y):
                            tm.companions.setdefault(x, y)
                            tm.companions.setdefault(y, x)
    return tm


# -- trace ------------------------------------------------------------------------


class Trace:
    """Ordered event list; each event is ``{"step", "kind", ...payload}``."""

    def __init__(self) -> None:
        self.events: list[dict] = []

    def emit(self, kind: str, **payload) -> None:
        self.events.append({"step": len(self.events), "kind": kind, **payload})

    def kinds(self) -> list[str]:
        return [e["kind"] for e in self.events]


def _pair(g: Graph, e: int) -> list[int]:
    u, v = g.edges[e]
    return [u + 1, v + 1]


def hinge_payload(gg: GadgetGraph, ge: int) -> dict:
    h = hinge_of_half_edge(gg, ge)
    g = gg.graph
    return {
        "edge": _pair(g, h.non_m_edge),
        "next": None if h.m_edge is None else _pair(g, h.m_edge),
        "pivot": h.pivot + 1,
        "half_edge": ge,
    }


# -- the alternating structure ------------------------------------------------------


class _Restart(Exception):
    pass


class AugStructure:
    """Alternating structure S for one state of the search.

    ``allowed`` is the G₂ presence mask (shared with the owning search and
    mutated by hinge removals and swaps).  ``seen`` marks the gadget edges
    considered so far; together with the implicit M' edges it is G₂[S].
    ``in_s`` marks edges of S proper: tree edges plus blossom-closing edges.
    """

    def __init__(
        self,
        gg: GadgetGraph,
        root: int,
        allowed: bytearray,
        infos: list[TriangleInfo],
        bad_map: dict,
        trace: Optional[Trace] = None,
        check_tractability: bool = True,
    ) -> None:
        self.gg = gg
        self.root = root
        self.allowed = allowed
        self.infos = infos
        self.bad_map = bad_map
        self.trace = trace
        self.check_tractability = check_tractability
        self.removed: list[int] = []  # D: half-edges switched off during this run
        self.records: dict[int, VulnerabilityRecord] = {}
        self.s_excluded: set[int] = set()  # switched off in S only
        self.allow_reorg = True
        self.visited_removals: set[frozenset[int]] = set()
        self.path: Optional[list[int]] = None
        self.counters = {"removed": 0, "restored": 0, "swaps": 0, "blossoms": 0, "reorgs": 0}
        self._reset()

    # state ---------------------------------------------------------------------

    def _reset(self) -> None:
        n = self.gg.node_count
        self.base = list(range(n))
        self.parent = [-1] * n
        self.even = bytearray(n)
        self.odd = bytearray(n)
        self.even[self.root] = 1
        self.seen = bytearray(self.gg.edge_count)
        self.in_s = bytearray(self.gg.edge_count)
        self.queue: deque[int] = deque([self.root])
        self.processed = bytearray(n)
        self.blossoms: list[BlossomRecord] = []
        self.timestamps: dict[int, int] = {self.root >> 1: 0}
        self.step = 0
        self.visited_removals.add(frozenset(self.removed))

    def labeled(self, node: int) -> bool:
        return bool(self.even[node] or self.odd[node])

    def even_nodes(self) -> set[int]:
        return {v for v in range(self.gg.node_count) if self.even[v]}

    def edge_mask(self) -> bytearray:
        """``allowed`` minus the S-only exclusions."""
        if not self.s_excluded:
            return self.allowed
        mask = bytearray(self.allowed)
        for ge in self.s_excluded:
            mask[ge] = 0
        return mask

    def unprocessed_blossoms(self) -> int:
        """Non-singleton top-level blossoms with an unprocessed even node."""
        bases = set()
        members: dict[int, int] = {}
        for v in range(self.gg.node_count):
            if self.even[v] or self.odd[v]:
                members[self.base[v]] = members.get(self.base[v], 0) + 1
        for v in range(self.gg.node_count):
            if self.even[v] and not self.processed[v] and members.get(self.base[v], 0) > 1:
                bases.add(self.base[v])
        return len(bases)

    # queries ---------------------------------------------------------------------

    def reach(self, target: int, drop_edges=(), drop_nodes=(), extra_edges=()) -> bool:
        """Even reachability of ``target`` inside G₂[S] with edits applied."""
        gg = self.gg
        mask = bytearray(self.seen)
        for ge in extra_edges:
            mask[ge] = 1
        for ge in drop_edges:
            mask[ge] = 0
        node_ok = None
        if drop_nodes:
            node_ok = bytearray(b"\x01") * gg.node_count
            for v in drop_nodes:
                if v >= 0:
                    node_ok[v] = 0
        return kernels.even_reachable(
            gg.adj_start, gg.adj_edge, gg.eu, gg.ev, gg.mate, mask, node_ok, self.root, target
        )

    def _tractable_on(self, tri: int, partners: tuple[int, ...], frm: int, to: int, both_even: bool) -> bool:
        gg = self.gg
        drop_nodes = (to, gg.mate[to])
        if partners[0] >= 0:
            twin = partners[0]
            if not self.allowed[twin] or not self.seen[twin]:
                return True
            drops = [(twin,)]
        else:
            edges = [-1 - p for p in partners]
            drops = []
            for e in edges:
                halves = _half_edges(gg, e)
                if not any(self.seen[h] and self.allowed[h] for h in halves):
                    return True
                drops.append(halves)
        for drop in drops:
            if self.reach(frm, drop, drop_nodes):
                return True
            if both_even and self.reach(to, drop, (frm, gg.mate[frm])):
                return True
        return False

    def intractable_triangle(self, frm: int, to: int, ge: int, both_even: bool = False) -> Optional[int]:
        for tri, partners in self.bad_map.get(ge, ()):
            if not self._tractable_on(tri, partners, frm, to, both_even):
                return tri
        return None

    # scanning ----------------------------------------------------------------------

    def run(self, audit: Optional[Callable[["AugStructure", str], None]] = None) -> Optional[list[int]]:
        for kind in self.steps():
            if audit is not None:
                audit(self, kind)
        return self.path

    def steps(self) -> Iterator[str]:
        """Drive the search, yielding the kind of every step that changes S."""
        while True:
            try:
                yield from self._scan()
            except _Restart:
                self._reset()
                continue
            if self.path is None and self.s_excluded:
                # S-only exclusions must not hide a walk: rerun without them
                if self.trace is not None:
                    for ge in sorted(self.s_excluded):
                        self.trace.emit("hinge_restore", scope="S", **hinge_payload(self.gg, ge))
                self.s_excluded.clear()
                self.allow_reorg = False
                self._reset()
                continue
            return

    def _scan(self) -> Iterator[str]:
        gg = self.gg
        adj_start, adj_edge, eu, ev, mate = gg.adj_start, gg.adj_edge, gg.eu, gg.ev, gg.mate
        kind = gg.kind
        while self.queue:
            v = self.queue.popleft()
            if self.processed[v]:
                continue
            self.processed[v] = 1
            for i in range(adj_start[v], adj_start[v + 1]):
                ge = adj_edge[i]
                if not self.allowed[ge] or ge in self.s_excluded:
                    continue
                to = eu[ge] if ev[ge] == v else ev[ge]
                if self.base[v] == self.base[to] or mate[v] == to:
                    continue
                self.seen[ge] = 1
                if self.even[to]:
                    action = "blossom"
                elif self.parent[to] < 0:
                    action = "path" if mate[to] < 0 else "grow"
                else:
                    continue
                if self.check_tractability and kind[ge] == HALF and ge in self.bad_map:
                    tri = self.intractable_triangle(v, to, ge, action == "blossom")
                    if tri is not None:
                        self._remove(ge, tri, v, to)
                        continue
                if action == "blossom":
                    fresh = self._blossom(v, to, ge)
                    self._maybe_reorganize()
                    self._close_pending(fresh)
                    yield "blossom"
                elif action == "grow":
                    self._grow(v, to, ge)
                    yield "grow"
                else:
                    self.parent[to] = v
                    self.odd[to] = 1
                    self.in_s[ge] = 1
                    self._stamp(to)
                    self.step += 1
                    self.path = self._extract(to)
                    yield "path"
                    return
                self._recheck_records()

    def _stamp(self, node: int) -> None:
        if self.gg.is_copy(node):
            self.timestamps.setdefault(node >> 1, self.step)

    def _grow(self, v: int, to: int, ge: int) -> None:
        gg = self.gg
        nxt = gg.mate[to]
        self.parent[to] = v
        self.odd[to] = 1
        self.even[nxt] = 1
        self.in_s[ge] = 1
        self.in_s[gg.mate_edge[to]] = 1
        self.seen[gg.mate_edge[to]] = 1
        self.step += 1
        self._stamp(to)
        self._stamp(nxt)
        self.queue.append(nxt)
        if self.trace is not None:
            g_edges = []
            for e in (ge, gg.mate_edge[to]):
                if gg.kind[e] != HALF:
                    g_edges.append(_pair(gg.graph, gg.g_edge[e]))
            self.trace.emit("grow", nodes=[v, to, nxt], edges=g_edges)

    def _blossom(self, v: int, to: int, ge: int) -> None:
        gg = self.gg
        base, parent, mate = self.base, self.parent, gg.mate
        n = gg.node_count
        mark = bytearray(n)
        a = v
        while True:
            a = base[a]
            mark[a] = 1
            if mate[a] < 0:
                break
            a = parent[mate[a]]
        b = to
        while True:
            b = base[b]
            if mark[b]:
                break
            b = parent[mate[b]]
        lca = b
        inblossom = bytearray(n)
        for x, child in ((v, to), (to, v)):
            while base[x] != lca:
                inblossom[base[x]] = 1
                inblossom[base[mate[x]]] = 1
                parent[x] = child
                child = mate[x]
                x = parent[mate[x]]
        self.step += 1
        members, fresh = [], []
        for k in range(n):
            if inblossom[base[k]] or base[k] == lca and (self.even[k] or self.odd[k]):
                base[k] = lca
                members.append(k)
                if not self.even[k]:
                    self.even[k] = 1
                    fresh.append(k)
                    self._stamp(k)
        self.in_s[ge] = 1
        # new even nodes jump the queue so the fresh blossom is finished first
        self.queue.extendleft(reversed(fresh))
        rec = BlossomRecord(lca, tuple(members), ge, self.step)
        self.blossoms.append(rec)
        self.counters["blossoms"] += 1
        if self.trace is not None:
            self.trace.emit(
                "blossom",
                base=lca,
                nodes=list(members),
                edge=_pair(gg.graph, gg.g_edge[ge]),
            )
        return fresh

    def _close_pending(self, fresh: list[int]) -> None:
        """Close blossoms over edges scanned while their far end was still odd.

        Without this, G2[S] would briefly reach more than S between steps.
        """
        gg = self.gg
        pending = deque(fresh)
        while pending:
            f = pending.popleft()
            for i in range(gg.adj_start[f], gg.adj_start[f + 1]):
                ge = gg.adj_edge[i]
                if not self.seen[ge] or not self.allowed[ge] or ge in self.s_excluded or self.in_s[ge]:
                    continue
                w = gg.eu[ge] if gg.ev[ge] == f else gg.ev[ge]
                if not self.even[w] or self.base[w] == self.base[f] or gg.mate[f] == w:
                    continue
                if self.check_tractability and gg.kind[ge] == HALF and ge in self.bad_map:
                    tri = self.intractable_triangle(f, w, ge, True)
                    if tri is not None:
                        self._remove(ge, tri, f, w)
                        continue
                pending.extend(self._blossom(f, w, ge))
                self._maybe_reorganize()

    def _extract(self, end: int) -> list[int]:
        mate, parent = self.gg.mate, self.parent
        path = [end]
        x = end
        while True:
            px = parent[x]
            path.append(px)
            if mate[px] < 0:
                break
            x = mate[px]
            path.append(x)
        path.reverse()
        return path

    # hinge removal, swaps, reorganisation -----------------------------------------------

    def _remove(self, ge: int, tri: int, frm: int, to: int) -> None:
        info = self.infos[tri]
        partners = next(p for t, p in self.bad_map[ge] if t == tri)
        self.allowed[ge] = 0
        self.removed.append(ge)
        rec = VulnerabilityRecord(
            info.triangle, 0, hinge_of_half_edge(self.gg, ge), ge, (frm, to, partners)
        )
        self.records[ge] = rec
        self.counters["removed"] += 1
        if self.trace is not None:
            self.trace.emit(
                "hinge_remove",
                triangle=[x + 1 for x in info.triangle.vertices],
                **hinge_payload(self.gg, ge),
            )

    def _recheck_records(self) -> None:
        for ge in list(self.removed):
            rec = self.records.get(ge)
            if rec is None:
                continue
            frm, to, partners = rec.witness
            if len(partners) != 1 or partners[0] < 0:
                continue  # type-0 exclusions are never undone within a run
            twin = partners[0]
            if frm < 0 or not self.allowed[twin] or not self.seen[twin] or not self.labeled(frm):
                continue
            if not self.reach(frm, (twin,), (to, self.gg.mate[to])):
                continue
            nxt = [twin if x == ge else x for x in self.removed]
            if frozenset(nxt) in self.visited_removals:
                continue
            self._swap(ge, twin, rec)
            raise _Restart

    def _swap(self, ge: int, twin: int, rec: VulnerabilityRecord) -> None:
        gg = self.gg
        self.allowed[ge] = 1
        self.allowed[twin] = 0
        self.removed = [twin if x == ge else x for x in self.removed]
        del self.records[ge]
        frm, to, _ = rec.witness
        self.records[twin] = VulnerabilityRecord(
            rec.triangle, rec.level, hinge_of_half_edge(gg, twin), twin, (-1, -1, (ge,))
        )
        self.counters["swaps"] += 1
        self.counters["restored"] += 1
        self.counters["removed"] += 1
        if self.trace is not None:
            tri = [x + 1 for x in rec.triangle.vertices]
            self.trace.emit("twin_swap", triangle=tri, restored=ge, removed=twin)
            self.trace.emit("hinge_restore", triangle=tri, **hinge_payload(gg, ge))
            self.trace.emit("hinge_remove", triangle=tri, **hinge_payload(gg, twin))

    def _maybe_reorganize(self) -> None:
        if not self.allow_reorg or not self.records:
            return
        blossom = self.blossoms[-1]
        for rec in list(self.records.values()):
            info = next(i for i in self.infos if i.triangle == rec.triangle)
            if info.type_index in (1, 2) and special_on(self, blossom, info):
                reorganize_special_blossom(self, blossom, info.triangle)
                return


# -- structure-level operations --------------------------------------------------------


def _segment_edges(gg: GadgetGraph, e: int) -> list[int]:
    core = gg.core_of[e]
    return [core - 2, core - 1, core, core + 1, core + 2]


def associated_hinge(S: AugStructure, seg: Segment) -> Optional[HingeBundle]:
    """Hinge bundle of a segment leaving the active blossom (None for O targets)."""
    gg = S.gg
    u, v = seg.inner >> 1, seg.outer >> 1

    def hinge_at(copy: int, vertex: int) -> Hinge:
        m_edge = gg.copy_edge[copy]
        return Hinge(seg.edge, None if m_edge < 0 else m_edge, vertex)

    if S.even[seg.outer]:
        return HingeBundle(3, (hinge_at(seg.inner, u), hinge_at(seg.outer, v)))
    if S.odd[seg.outer]:
        return None
    if gg.mate[seg.outer] < 0:
        return HingeBundle(1, (hinge_at(seg.inner, u),))
    return HingeBundle(2, (hinge_at(seg.outer, v),))


def classify_hinge(S: AugStructure, h: Hinge) -> Tractability:
    """Tractability of ``h`` against the current G₂[S]."""
    gg = S.gg
    ge = counterpart_half_edge(gg, h)
    x = gg.half_edge_splitter(ge)
    c = gg.half_edge_copy(ge)
    # orient the hinge from whichever end S already labels as even
    if S.even[x]:
        frm, to = x, c
    elif S.even[c]:
        frm, to = c, x
    else:
        return Tractability(True)
    tri = S.intractable_triangle(frm, to, ge, bool(S.even[to]))
    if tri is None:
        return Tractability(True)
    return Tractability(False, S.infos[tri].triangle)


def _reach_profile(S: AugStructure, extra: tuple[int, ...] = ()) -> tuple[frozenset[int], frozenset[int]]:
    """(even nodes, exposed nodes reachable by an odd path) of G₂[S] + ``extra``."""
    gg = S.gg
    mask = bytearray(S.seen)
    for ge in extra:
        if S.allowed[ge]:
            mask[ge] = 1
    even = kernels.even_set(gg.adj_start, gg.adj_edge, gg.eu, gg.ev, gg.mate, mask, None, S.root)
    ev = frozenset(i for i in range(gg.node_count) if even[i])
    aug = set()
    for x in ev:
        for i in gg.incident(x):
            ge = gg.adj_edge[i]
            if mask[ge]:
                y = gg.other(ge, x)
                if gg.mate[y] < 0 and y != S.root and gg.mate[x] != y:
                    aug.add(y)
    return ev, frozenset(aug)


def classify_augmenting(S: AugStructure, h: Hinge) -> AugmentingClass:
    gg = S.gg
    ge = counterpart_half_edge(gg, h)
    extra = tuple(_segment_edges(gg, h.non_m_edge))
    before_even, before_aug = _reach_profile(S)
    after_even, after_aug = _reach_profile(S, extra)
    if after_aug - before_aug or after_even - before_even:
        return AugmentingClass("strictly_S_augmenting")
    x, c = gg.half_edge_splitter(ge), gg.half_edge_copy(ge)
    if S.labeled(x) and S.labeled(c) and S.base[x] != S.base[c] and S.even[x] and S.even[c]:
        return AugmentingClass("S_augmenting")
    level = _diminishing_level(S, extra)
    if level is not None:
        return AugmentingClass("delta_diminishing", level)
    return AugmentingClass("none")


def _diminishing_level(S: AugStructure, extra: tuple[int, ...], records=None) -> Optional[int]:
    """Lowest level of a record that turns tractable once ``extra`` joins G₂[S]."""
    recs = records if records is not None else list(S.records.values())
    best = None
    for rec in recs:
        frm, to, partners = rec.witness
        if frm < 0 or len(partners) != 1 or partners[0] < 0:
            continue
        twin = partners[0]
        drop_nodes = (to, S.gg.mate[to])
        if S.reach(frm, (twin,), drop_nodes):
            continue
        if S.reach(frm, (twin,), drop_nodes, extra):
            if best is None or rec.level < best:
                best = rec.level
    return best


def vulnerability_scan(S: AugStructure, max_level: Optional[int] = None) -> list[VulnerabilityRecord]:
    """Level-0 records from live removals, then (Δ,k)-chains up to ``max_level``.

    The cap defaults to the number of triangles in the graph.
    """
    gg = S.gg
    if max_level is None:
        max_level = len(S.infos)
    levels: list[list[VulnerabilityRecord]] = [
        [r for r in S.records.values() if r.witness[0] >= 0 and S.labeled(r.witness[0])]
    ]
    known = {r.half_edge for r in levels[0]}
    for k in range(1, max_level + 1):
        found = []
        for ge in range(gg.edge_count):
            if gg.kind[ge] != HALF or ge in known or ge not in S.bad_map or not S.allowed[ge]:
                continue
            x, c = gg.half_edge_splitter(ge), gg.half_edge_copy(ge)
            if S.even[x] and not S.even[c] or S.even[x] and S.base[x] != S.base[c]:
                frm, to = x, c
            elif S.even[c] and not S.labeled(x):
                frm, to = c, x
            else:
                continue
            tri = S.intractable_triangle(frm, to, ge, bool(S.even[to]))
            if tri is None:
                continue
            extra = tuple(_segment_edges(gg, gg.g_edge[ge]))
            if _diminishing_level(S, extra, levels[k - 1]) is None:
                continue
            info = S.infos[tri]
            partners = next(p for t, p in S.bad_map[ge] if t == tri)
            found.append(
                VulnerabilityRecord(info.triangle, k, hinge_of_half_edge(gg, ge), ge, (frm, to, partners))
            )
            known.add(ge)
        if not found:
            break
        levels.append(found)
    return [r for lvl in levels for r in lvl]


def special_on(S: AugStructure, blossom: BlossomRecord, info: TriangleInfo) -> bool:
    """Whether ``blossom`` holds every edge of the type-1/2 triangle ``info``.

    An edge is held when its gadget counterpart (core or pair edge) has both
    ends inside the blossom.
    """
    gg = S.gg
    members = set(blossom.nodes)
    for e in info.triangle.edge_ids:
        ge = gg.pair_of.get(e, gg.core_of.get(e))
        if gg.eu[ge] not in members or gg.ev[ge] not in members:
            return False
    return True


def reorganization_hinge(S: AugStructure, blossom: BlossomRecord, t: Triangle) -> int:
    """Half-edge to take out of S for a special blossom on ``t``.

    Names follow ``t = (a; b, c)`` where the removed hinge sits at ``c`` and
    ``(b, d)``, ``(c, e)`` are matched edges outside ``t``; ``d'`` is an
    unmatched neighbour of ``b`` inside the blossom.
    """
    gg = S.gg
    g = gg.graph
    rec = next((r for r in S.records.values() if r.triangle == t), None)
    info = next(i for i in S.infos if i.triangle == t)
    if rec is None or info.type_index not in (1, 2):
        raise ValueError("blossom is not special on this triangle")
    a = info.top
    c = rec.vulnerable_hinge.pivot
    (b,) = [x for x in t.vertices if x not in (a, c)]
    e_ce = rec.vulnerable_hinge.m_edge
    c2 = gg.copy_toward(c, e_ce) if e_ce is not None else gg.exposed_copies(c)[-1]
    members = set(blossom.nodes)
    d_edges = [e for _, e in g.adjacency[b] if e in gg.matching and e not in t.edge_ids]

    def dprime_half(target_copy: int) -> int:
        for nb, e in g.adjacency[b]:
            if e in gg.matching or nb in t.vertices:
                continue
            for ge in gg.half_edges_at(e, b):
                if gg.half_edge_copy(ge) == target_copy and gg.half_edge_splitter(ge) in members:
                    return ge
        raise ValueError("no unmatched edge of b inside the blossom")

    c2_even = bool(S.even[c2])
    if info.type_index == 2:
        if c2_even:
            return dprime_half(gg.copy_toward(b, g.edge_id(a, b)))
        target = gg.copy_toward(b, d_edges[0]) if d_edges else gg.exposed_copies(b)[-1]
        for ge in gg.half_edges_at(g.edge_id(b, c), b):
            if gg.half_edge_copy(ge) == target:
                return ge
    else:
        if c2_even:
            return dprime_half(gg.copy_toward(b, g.edge_id(b, c)))
        target = gg.copy_toward(b, d_edges[0]) if d_edges else gg.exposed_copies(b)[-1]
        for ge in gg.half_edges_at(g.edge_id(a, b), b):
            if gg.half_edge_copy(ge) == target:
                return ge
    raise ValueError("no reorganisation hinge")  # pragma: no cover


def reorganize_special_blossom(S: AugStructure, blossom: BlossomRecord, t: Triangle) -> bool:
    """Take the case-table hinge out of S (not G₂) if reachability survives.

    The check compares the even-reachable node set and augmenting endpoints
    of G₂[S] with and without the hinge.  On a mismatch nothing changes and
    ``False`` is returned.
    """
    try:
        ge = reorganization_hinge(S, blossom, t)
    except (ValueError, StopIteration):
        return False
    if not S.seen[ge]:
        return False
    before = _reach_profile(S)
    saved = S.seen[ge]
    S.seen[ge] = 0
    after = _reach_profile(S)
    if before != after:
        S.seen[ge] = saved
        return False
    S.seen[ge] = saved
    S.s_excluded.add(ge)
    S.counters["reorgs"] += 1
    if S.trace is not None:
        S.trace.emit(
            "special_reorg",
            triangle=[x + 1 for x in t.vertices],
            **hinge_payload(S.gg, ge),
        )
    return True


def twin_swap(gg: GadgetGraph, twin_map: TwinMap, h_removed: Hinge, h_twin: Hinge, S: Optional[AugStructure] = None) -> None:
    """Restore ``h_removed`` and remove its twin (with companions for type 0)."""
    a = counterpart_half_edge(gg, h_removed)
    b = counterpart_half_edge(gg, h_twin)
    if twin_map.twins.get(a) != b:
        raise ValueError(f"{h_removed} and {h_twin} are not twins")
    if gg.present[a] or not gg.present[b]:
        raise ValueError("twin swap needs the first hinge absent and the twin present")
    if S is not None and not S.seen[b]:
        raise ValueError("twin is not reachable in the structure")
    pairs = [(a, b)]
    ca, cb = twin_map.companions.get(a), twin_map.companions.get(b)
    if ca is not None and cb is not None and not gg.present[ca] and gg.present[cb]:
        pairs.append((ca, cb))
    for x, y in pairs:
        gg.present[x] = 1
        gg.present[y] = 0


# -- the state search ------------------------------------------------------------------


@dataclass
class SearchStats:
    states: int = 0
    pruned: int = 0
    hinges_removed: int = 0
    hinges_restored: int = 0
    swaps: int = 0
    blossoms: int = 0
    reorganizations: int = 0
    branchings: int = 0

    def absorb(self, counters: dict) -> None:
        self.hinges_removed += counters["removed"]
        self.hinges_restored += counters["restored"]
        self.swaps += counters["swaps"]
        self.blossoms += counters["blossoms"]
        self.reorganizations += counters["reorgs"]


@dataclass
class SearchOutcome:
    walk: Optional[AlternatingWalk]
    stats: SearchStats
    gadget_path: Optional[list[int]] = None


DEFAULT_MAX_STATES = 100_000


def root_copy(gg: GadgetGraph, s: int) -> int:
    free = gg.exposed_copies(s)
    if not free:
        raise ValueError(f"vertex {s} is saturated")
    return free[0]


def _path_half_edges(gg: GadgetGraph, nodes: list[int]) -> set[int]:
    used = set()
    for a, b in zip(nodes, nodes[1:]):
        for i in gg.incident(a):
            ge = gg.adj_edge[i]
            if gg.other(ge, a) == b:
                if gg.kind[ge] == HALF:
                    used.add(ge)
                break
    return used


def _branch_children(gg, infos, bad_t: Triangle, used_half: set[int], state: frozenset[int]) -> list[frozenset[int]]:
    info = next(i for i in infos if i.triangle == bad_t)
    if info.type_index in (1, 2):
        x, y = info.bad
        if x not in used_half or y not in used_half:  # pragma: no cover - defensive
            raise SearchError("non-amenable walk avoids a bad half-edge")
        return [state | {y}, state | {x}]
    return [state | set(edge_exclusion(gg, e)) for e in info.edges]


def _removal_children(S: AugStructure, state: frozenset[int]) -> list[frozenset[int]]:
    out = []
    prefix: set[int] = set(state)
    for ge in S.removed:
        rec = S.records.get(ge)
        partners = rec.witness[2] if rec is not None else ()
        if partners and partners[0] >= 0:
            out.append(frozenset(prefix | set(partners)))
        elif partners:
            for p in partners:
                out.append(frozenset(prefix | set(edge_exclusion(S.gg, -1 - p))))
        prefix.add(ge)
    return out


def search(
    g: Graph,
    m: EdgeSet,
    s: int,
    *,
    trace: Optional[Trace] = None,
    max_states: int = DEFAULT_MAX_STATES,
    audit: Optional[Callable[[AugStructure, str], None]] = None,
    check_tractability: bool = True,
) -> SearchOutcome:
    edges = _edge_set(m)
    if degrees(g, edges)[s] >= 2:
        raise ValueError(f"vertex {s} is not deficient")
    gg = build_gadget(g, edges)
    infos, bad_map = analyse_triangles(gg)
    root = root_copy(gg, s)
    stats = SearchStats()
    full = bytearray(gg.present)
    stack: list[frozenset[int]] = [frozenset()]
    visited: set[frozenset[int]] = set()
    while stack:
        state = stack.pop()
        if state in visited:
            continue
        visited.add(state)
        stats.states += 1
        if stats.states > max_states:
            raise SearchLimitError(f"search from vertex {s} exceeded {max_states} states")
        allowed = bytearray(full)
        for ge in state:
            allowed[ge] = 0
        if kernels.find_path(gg.adj_start, gg.adj_edge, gg.eu, gg.ev, gg.mate, allowed, root) is None:
            stats.pruned += 1
            continue
        S = AugStructure(gg, root, allowed, infos, bad_map, trace, check_tractability)
        path = S.run(audit)
        stats.absorb(S.counters)
        final = frozenset(state | set(S.removed))
        children: list[frozenset[int]] = []
        if path is not None:
            shown = bytearray(gg.present)
            gg.present[:] = allowed
            try:
                walk = project_walk(gg, path)
            finally:
                gg.present[:] = shown
            if not is_augmenting(g, edges, walk):
                raise SearchError(f"extracted walk {walk} is not augmenting")
            bad = non_amenable_triangles(g, edges, walk)
            if not bad:
                if not is_feasible(g, edges, walk):
                    raise SearchError(f"amenable walk {walk} is not feasible")
                if trace is not None:
                    trace.emit("path_found", walk=[v + 1 for v in walk.vertices(g)])
                return SearchOutcome(walk, stats, path)
            stats.branchings += 1
            children.extend(_branch_children(gg, infos, bad[0], _path_half_edges(gg, path), final))
        children.extend(_removal_children(S, state))
        for child in reversed(children):
            if child not in visited:
                stack.append(child)
    return SearchOutcome(None, stats)


def find_augmenting_path(g: Graph, m: EdgeSet, s: int, **options) -> Optional[AlternatingWalk]:
    """Verified amenable augmenting walk from ``s``, or ``None`` if none exists."""
    return search(g, m, s, **options).walk
