"""Top-level augmentation loop and matching verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import Graph
from .matching import (
    AlternatingWalk,
    TwoMatching,
    apply_walk,
    degrees,
    deficient_vertices,
    is_alternating,
    is_amenable,
    is_augmenting,
    is_feasible,
    is_triangle_free,
    triangles_in,
)
from .oracle import greedy_initial_matching
from .search import DEFAULT_MAX_STATES, SearchError, SearchStats, Trace, search


class VerificationError(RuntimeError):
    """An applied walk or intermediate matching failed a checker."""


@dataclass
class PhaseStats:
    start_vertex: int
    walk_length: int
    states: int
    hinges_removed: int
    hinges_restored: int
    blossoms: int
    swaps: int


@dataclass
class SolveReport:
    final_matching: TwoMatching
    augmentation_count: int
    initial_size: int
    phases: list[PhaseStats] = field(default_factory=list)
    failed_searches: int = 0
    walks: list[AlternatingWalk] = field(default_factory=list)
    verdicts: list[bool] = field(default_factory=list)
    divergences: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.final_matching)


@dataclass
class SolveOptions:
    from_empty: bool = False
    selftest: bool = False
    trace: Optional[Trace] = None
    max_states: int = DEFAULT_MAX_STATES
    oracle_budget: int = 2_000_000


def _check_walk(g: Graph, m: frozenset[int], w: AlternatingWalk) -> bool:
    return is_augmenting(g, m, w) and is_amenable(g, m, w) and is_feasible(g, m, w)


def solve(g: Graph, options: Optional[SolveOptions] = None) -> SolveReport:
    """Grow a triangle-free 2-matching until no deficient vertex augments.

    Deficient vertices are tried round robin.  The loop stops after a full
    pass over the current deficient vertices finds nothing.
    """
    opts = options or SolveOptions()
    current = frozenset() if opts.from_empty else greedy_initial_matching(g).edges
    report = SolveReport(TwoMatching(g, current), 0, len(current))
    cursor = 0
    while True:
        found = False
        order = sorted(deficient_vertices(g, current))
        if not order:
            break
        # resume the round robin just after the last vertex that augmented
        order = [v for v in order if v >= cursor] + [v for v in order if v < cursor]
        for s in order:
            if degrees(g, current)[s] >= 2:
                continue
            try:
                outcome = search(g, current, s, trace=opts.trace, max_states=opts.max_states)
            except SearchError as exc:
                if not opts.selftest:
                    raise
                walk = _selftest_fallback(g, current, opts, report, str(exc))
                if walk is None:
                    continue
                outcome = None
            else:
                walk = outcome.walk
            if walk is None:
                report.failed_searches += 1
                continue
            ok = _check_walk(g, current, walk)
            report.verdicts.append(ok)
            if not ok:
                raise VerificationError(f"walk {walk} from vertex {s} failed verification")
            nxt = apply_walk(current, walk, g)
            if len(nxt) != len(current) + 1 or not is_triangle_free(g, nxt):
                raise VerificationError("augmentation did not yield a larger triangle-free 2-matching")
            current = nxt
            report.walks.append(walk)
            report.augmentation_count += 1
            if outcome is not None:
                report.phases.append(_phase(s, walk, outcome.stats))
            cursor = s + 1
            found = True
            break
        if not found:
            break
    report.final_matching = TwoMatching(g, current)
    return report


def _phase(s: int, walk: AlternatingWalk, st: SearchStats) -> PhaseStats:
    return PhaseStats(s, len(walk), st.states, st.hinges_removed, st.hinges_restored, st.blossoms, st.swaps)


def _selftest_fallback(g, current, opts, report, message) -> Optional[AlternatingWalk]:
    from .decomposition import augmenting_element
    from .oracle import OracleBudgetExceeded, brute_force_optimum

    report.divergences.append(message)
    try:
        best = brute_force_optimum(g, opts.oracle_budget)
    except OracleBudgetExceeded:
        raise SearchError(message) from None
    if best.optimum_size <= len(current):
        return None
    return augmenting_element(g, current, best.witness)


# -- verification ---------------------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    messages: list[str]
    walk_flags: Optional[dict[str, bool]] = None


def verify(g: Graph, m: frozenset[int], walk: Optional[AlternatingWalk] = None) -> Verdict:
    """Run every checker on ``m`` (and on ``walk`` when given)."""
    messages = []
    ok = True
    deg = degrees(g, m)
    for v, d in enumerate(deg):
        if d > 2:
            ok = False
            messages.append(f"vertex {v + 1} has degree {d}")
    for t in triangles_in(g, m):
        ok = False
        messages.append("triangle " + " ".join(str(x + 1) for x in t.vertices) + " in matching")
    if ok:
        messages.append(f"valid triangle-free 2-matching of size {len(m)}")
    flags = None
    if walk is not None:
        flags = {
            "alternating": is_alternating(g, m, walk),
            "augmenting": is_augmenting(g, m, walk),
            "amenable": is_amenable(g, m, walk) if is_alternating(g, m, walk) else False,
            "feasible": is_feasible(g, m, walk),
        }
    return Verdict(ok, messages, flags)
