"""Targeted viral marketing: SSA / D-SSA with roots drawn proportionally to node relevance.

Influence estimates are scaled by the total weight (gamma) instead of n, so
they target the weighted spread sum_v weight[v] * Pr[v activated].  The
sample caps keep n since they count candidate seed sets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dssa import dssa
from .errors import GraphParseError, NodeRangeError
from .graph import Graph
from .rr_sampling import IC
from .ssa import SeedResult, ssa


@dataclass(frozen=True, eq=False)
class TargetWeights:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("target weights must be a vector of finite nonnegative reals")
        if not w.sum() > 0:
            raise ValueError("target weights sum to zero")
        object.__setattr__(self, "weights", w)

    @property
    def gamma(self) -> float:
        return float(self.weights.sum())

    def __len__(self) -> int:
        return int(self.weights.size)


def load_weights(reader, n: int) -> TargetWeights:
    """Parse ``node_id weight`` lines; nodes not listed get weight 0."""
    w = np.zeros(n, dtype=np.float64)
    for lineno, raw in enumerate(reader, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError("expected 'node_id weight'", lineno)
        try:
            v, x = int(parts[0]), float(parts[1])
        except ValueError:
            raise GraphParseError("bad node id or weight", lineno) from None
        if not 0 <= v < n:
            raise NodeRangeError(f"line {lineno}: node id outside [0, {n})")
        if x < 0:
            raise GraphParseError("weights must be nonnegative", lineno)
        w[v] = x
    return TargetWeights(w)


def tvm_run(graph: Graph, weights, k: int, eps: float, delta: float, algo: str = "dssa",
            rng=None, *, model: str = IC, threads: int = 1, **kwargs) -> SeedResult:
    if not isinstance(weights, TargetWeights):
        weights = TargetWeights(weights)
    if len(weights) != graph.n:
        raise ValueError(f"need {graph.n} weights, got {len(weights)}")
    algo = algo.lower().replace("-", "")
    if algo == "ssa":
        return ssa(graph, k, eps, delta, kwargs.pop("split", None), rng, model=model,
                   target_weights=weights.weights, threads=threads, **kwargs)
    if algo == "dssa":
        return dssa(graph, k, eps, delta, rng, model=model, target_weights=weights.weights,
                    threads=threads, **kwargs)
    raise ValueError(f"unknown algorithm {algo!r}")
