"""Stop-and-Stare influence maximization (SSA, D-SSA) on reverse-reachable sets."""
from .bounds import Caps, EpsilonSplit, caps_for, default_epsilon_split, upsilon
from .coverage import RRCollection, max_coverage_greedy
from .dssa import dssa
from .graph import Graph, auto_weight, from_edges, load_edge_list, load_graph, read_binary, write_binary
from .oracle import exact_influence, exact_opt, mc_influence
from .rng import RngStream
from .rr_sampling import IC, LT, RRSampler, RRSet
from .ssa import SeedResult, StopReason, estimate_inf, ssa
from .tvm import TargetWeights, tvm_run

__version__ = "0.1.0"
