"""Maximum triangle-free 2-matching by amenable augmenting paths."""

from .decomposition import Decomposition, decompose, oracle_guided_augment, verify_decomposition
from .graph import Graph, GraphError, build_graph, parse_graph, read_graph
from .kernels import IMPLEMENTATION
from .matching import AlternatingWalk, TwoMatching, is_amenable, is_augmenting, is_feasible
from .oracle import brute_force_optimum, generate_instance, greedy_initial_matching
from .search import Trace, find_augmenting_path, search
from .solver import SolveOptions, SolveReport, solve, verify

__version__ = "0.1.0"

__all__ = [
    "AlternatingWalk",
    "Decomposition",
    "Graph",
    "GraphError",
    "IMPLEMENTATION",
    "SolveOptions",
    "SolveReport",
    "Trace",
    "TwoMatching",
    "brute_force_optimum",
    "build_graph",
    "decompose",
    "find_augmenting_path",
    "generate_instance",
    "greedy_initial_matching",
    "is_amenable",
    "is_augmenting",
    "is_feasible",
    "oracle_guided_augment",
    "parse_graph",
    "read_graph",
    "search",
    "solve",
    "verify",
    "verify_decomposition",
]
