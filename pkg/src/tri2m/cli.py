"""Command line interface: ``tri2m solve|verify|decompose|oracle|gen|bench``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .decomposition import DecompositionError, decompose, verify_decomposition
from .graph import GraphError, format_graph, read_graph
from .kernels import IMPLEMENTATION
from .matching import MatchingError, WalkError, format_matching, format_walk, parse_matching, parse_walks
from .oracle import FLAVORS, OracleBudgetExceeded, brute_force_optimum, generate_instance
from .search import SearchError, Trace
from .solver import SolveOptions, VerificationError, solve, verify

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str):
    try:
        return read_graph(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    trace = Trace() if args.trace else None
    opts = SolveOptions(from_empty=args.from_empty, selftest=args.selftest, trace=trace)
    try:
        report = solve(g, opts)
    except (VerificationError, SearchError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        _write_trace(args.trace, trace)
        return EXIT_VERIFY
    _write_trace(args.trace, trace)
    sys.stdout.write(format_matching(g, report.final_matching.edges))
    if args.stats:
        st = sys.stderr
        print(f"c initial {report.initial_size} augmentations {report.augmentation_count}", file=st)
        print(f"c failed_searches {report.failed_searches} kernels {IMPLEMENTATION}", file=st)
        for msg in report.divergences:
            print(f"c divergence {msg}", file=st)
    return EXIT_OK


def _write_trace(path: Optional[str], trace: Optional[Trace]) -> None:
    if path and trace is not None:
        Path(path).write_text(json.dumps(trace.events, indent=1) + "\n")


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    m = parse_matching(g, _read_text(args.matching))
    walks = parse_walks(g, _read_text(args.walk)) if args.walk else []
    verdict = verify(g, m)
    for msg in verdict.messages:
        print(("PASS " if verdict.ok else "FAIL ") + msg)
    ok = verdict.ok
    for walk in walks:
        flags = verify(g, m, walk).walk_flags
        print(format_walk(g, walk) + " " + " ".join(f"{k}={str(v).lower()}" for k, v in flags.items()))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_decompose(args) -> int:
    g = _load_graph(args.graph)
    m = parse_matching(g, _read_text(args.m))
    n = parse_matching(g, _read_text(args.n))
    try:
        d = decompose(g, m, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except DecompositionError as exc:
        print(f"INVALID {exc}")
        return EXIT_VERIFY
    for el in d.elements:
        print(f"{format_walk(g, el.walk)}  c {el.kind}")
    ok = verify_decomposition(g, m, n, d)
    print(f"{'VALID' if ok else 'INVALID'} route={d.route}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    try:
        res = brute_force_optimum(g, args.budget)
    except OracleBudgetExceeded as exc:
        print(f"c {exc}", file=sys.stderr)
        return EXIT_VERIFY
    lines = format_matching(g, res.witness).splitlines()
    # size line first, as the oracle reports the optimum
    print(lines[-1])
    for line in lines[:-1]:
        print(line)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        g = generate_instance(args.n, args.p, args.seed, args.flavor)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = format_graph(g, f"flavor={args.flavor} n={args.n} p={args.p} seed={args.seed}")
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _bench_one(job: tuple[str, bool]) -> dict:
    path, check = job
    g = read_graph(path)
    t0 = time.perf_counter()
    report = solve(g)
    elapsed = time.perf_counter() - t0
    row = {"file": path, "n": g.n, "m": g.m, "size": report.size, "seconds": elapsed}
    if check:
        row["optimum"] = brute_force_optimum(g).optimum_size
    return row


def _bench_scaling(seed: int, sizes: Sequence[int], repeats: int, workers: int) -> list[dict]:
    jobs = []
    for n in sizes:
        for r in range(repeats):
            jobs.append((n, min(1.0, 6.0 / max(1, n - 1)), seed * 1_000_003 + n * 101 + r))
    return _map(_scaling_one, jobs, workers)


def _scaling_one(job: tuple[int, float, int]) -> dict:
    n, p, seed = job
    g = generate_instance(n, p, seed, "uniform")
    t0 = time.perf_counter()
    report = solve(g)
    return {"n": n, "m": g.m, "size": report.size, "seconds": time.perf_counter() - t0}


def _map(fn, jobs, workers: int) -> list:
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def scaling_exponent(rows: Sequence[dict]) -> Optional[float]:
    """Slope of log(median seconds) against log(median m), one point per n."""
    by_n: dict[int, list[dict]] = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r)
    xs, ys = [], []
    for group in by_n.values():
        m = statistics.median(r["m"] for r in group)
        t = statistics.median(r["seconds"] for r in group)
        if m > 0 and t > 0:
            xs.append(math.log(m))
            ys.append(math.log(t))
    if len(xs) < 2 or len(set(xs)) < 2:
        return None
    return statistics.linear_regression(xs, ys).slope


def cmd_bench(args) -> int:
    if args.corpus is None and not args.scaling:
        raise UsageError("bench needs --corpus and/or --scaling")
    status = EXIT_OK
    if args.corpus:
        root = Path(args.corpus)
        if not root.is_dir():
            raise UsageError(f"{root} is not a directory")
        files = sorted(str(p) for p in root.iterdir() if p.is_file())
        rows = _map(_bench_one, [(f, args.check) for f in files], args.workers)
        bad = [r for r in rows if args.check and r["size"] != r["optimum"]]
        total = sum(r["seconds"] for r in rows)
        print(f"corpus {root} instances {len(rows)} solve_seconds {total:.3f} kernels {IMPLEMENTATION}")
        if args.check:
            print(f"oracle mismatches {len(bad)}")
            for r in bad:
                print(f"  {r['file']} solve {r['size']} optimum {r['optimum']}")
            if bad:
                status = EXIT_VERIFY
    if args.scaling:
        sizes = [int(x) for x in args.sizes.split(",")]
        rows = _bench_scaling(args.seed, sizes, args.repeats, args.workers)
        print("scaling report (uniform, average degree about 6)")
        print(f"{'n':>5} {'median_m':>9} {'median_s':>10}")
        for n in sizes:
            group = [r for r in rows if r["n"] == n]
            print(
                f"{n:>5} {statistics.median(r['m'] for r in group):>9.1f}"
                f" {statistics.median(r['seconds'] for r in group):>10.4f}"
            )
        slope = scaling_exponent(rows)
        verdict = "n/a" if slope is None else ("subquadratic" if slope < 2 else "not subquadratic")
        print(f"log-log slope {'n/a' if slope is None else f'{slope:.2f}'} ({verdict}; report only)")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tri2m", description="Maximum triangle-free 2-matching tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="compute a maximum triangle-free 2-matching")
    s.add_argument("graph")
    s.add_argument("--from-empty", action="store_true", help="start from the empty matching")
    s.add_argument("--trace", metavar="OUT.json", help="write search events as JSON")
    s.add_argument("--selftest", action="store_true", help="fall back to the oracle on engine failure")
    s.add_argument("--stats", action="store_true", help="print run statistics to stderr")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a matching and optionally walks")
    v.add_argument("graph")
    v.add_argument("matching")
    v.add_argument("--walk", help="file with 'w v0 v1 ...' lines")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="split M xor N into amenable walks")
    d.add_argument("graph")
    d.add_argument("m")
    d.add_argument("n")
    d.set_defaults(func=cmd_decompose)

    o = sub.add_parser("oracle", help="exact optimum by branch and bound")
    o.add_argument("graph")
    o.add_argument("--budget", type=int, default=50_000_000)
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="write a random graph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--flavor", choices=FLAVORS, default="uniform")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time the solver on a corpus or a scaling series")
    b.add_argument("--corpus", help="directory of graph files")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--check", action="store_true", help="compare sizes with the oracle")
    b.add_argument("--scaling", action="store_true", help="report time growth on uniform graphs")
    b.add_argument("--sizes", default="25,50,100,150,200")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, MatchingError, WalkError) as exc:
        print(f"tri2m: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
