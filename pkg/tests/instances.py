"""Named hand-built instances shared by the tests.

Each instance holds the graph, vertex names, the matching and, where
relevant, walks given as vertex-name sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from tri2m.graph import Graph, build_graph
from tri2m.matching import AlternatingWalk, is_triangle_free, is_two_matching, walk_from_vertices


@dataclass
class Instance:
    names: list[str]
    edges: list[str]
    matching: list[str]
    walks: dict[str, str] = field(default_factory=dict)
    root: str = "s"

    def __post_init__(self) -> None:
        self.ix = {v: i for i, v in enumerate(self.names)}
        self.graph: Graph = build_graph(len(self.names), [self.pair(e) for e in self.edges])
        self.m = frozenset(self.eid(e) for e in self.matching)

    def pair(self, e: str) -> tuple[int, int]:
        return self.ix[e[0]], self.ix[e[1]]

    def eid(self, e: str) -> int:
        return self.graph.edge_id(*self.pair(e))

    def edge_set(self, edges) -> frozenset[int]:
        return frozenset(self.eid(e) for e in edges)

    def walk(self, key: str) -> AlternatingWalk:
        return walk_from_vertices(self.graph, [self.ix[v] for v in self.walks[key]])

    def vertex(self, name: str) -> int:
        return self.ix[name]

    def one_based(self, *names: str) -> list[int]:
        return [self.ix[v] + 1 for v in names]


def two_triangle_walk() -> Instance:
    """Triangles (a,b,c) and (a,c,d) hanging off a walk from s to z."""
    return Instance(
        names=list("sabcdez"),
        edges=["sa", "ab", "ac", "bc", "ad", "cd", "de", "ez"],
        matching=["ab", "ac", "cd", "de"],
        walks={"amenable": "sabcadez", "interleaved": "sacbadez"},
    )


def blocked_triangle() -> Instance:
    """Applying the only s-t walk closes the triangle (a,b,c)."""
    return Instance(
        names=list("sdbceta"),
        edges=["sd", "db", "bc", "ce", "et", "ab", "ac"],
        matching=["db", "ce", "ab", "ac"],
        walks={"short": "sdbcet"},
    )


def hinge_swap_small() -> Instance:
    """Nine-vertex instance: the short s-t walk closes (a,b,c), a longer one
    detours through f, g, a."""
    return Instance(
        names=list("sdbfgacet"),
        edges=["sd", "db", "bc", "ce", "et", "bf", "fg", "ga", "ab", "ac"],
        matching=["db", "fg", "ab", "ac", "ce"],
        walks={"long": "sdbfgabcet", "short": "sdbcet"},
    )


def hinge_swap() -> Instance:
    """The nine-vertex instance with every vertex except s and t saturated by
    pendant edges, so that s and t are the only deficient vertices."""
    return Instance(
        names=list("sdbfgacetwxyz"),
        edges=[
            "sd", "db", "bc", "ce", "et", "bf", "fg", "ga", "ab", "ac",
            "dw", "fx", "gy", "ez", "wx", "yz",
        ],
        matching=["db", "fg", "ab", "ac", "ce", "dw", "fx", "gy", "ez", "wx", "yz"],
        walks={"long": "sdbfgabcet", "short": "sdbcet"},
    )


def chained_vulnerability() -> Instance:
    """Five vertices where the search records a vulnerable triangle whose
    hinge only becomes usable through a second, chained one.

    Found by scanning small random instances for a structure state with
    vulnerability records at levels 0 and 1.
    """
    return Instance(
        names=list("pqruv"),
        edges=["pr", "pu", "qr", "qu", "qv", "ru", "rv", "uv"],
        matching=["pu", "qr", "qu", "rv"],
        root="v",
    )


def random_tf_matching(g: Graph, rng, keep: float = 1.0) -> frozenset[int]:
    """Maximal triangle-free 2-matching over a shuffled edge order, then
    each edge kept with probability ``keep``."""
    order = list(range(g.m))
    rng.shuffle(order)
    chosen: set[int] = set()
    for e in order:
        if is_two_matching(g, chosen | {e}) and is_triangle_free(g, chosen | {e}):
            chosen.add(e)
    return frozenset(e for e in chosen if rng.random() < keep)


ALL = {
    "two_triangle_walk": two_triangle_walk,
    "blocked_triangle": blocked_triangle,
    "hinge_swap_small": hinge_swap_small,
    "hinge_swap": hinge_swap,
    "chained_vulnerability": chained_vulnerability,
}
