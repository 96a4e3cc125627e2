"""Synthetic graphs and the statistical drivers behind the acceptance suite."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, auto_weight, from_edges
from .oracle import exact_influences, exact_opt
from .rr_sampling import IC


@dataclass(frozen=True)
class SyntheticSpec:
    """``family`` is one of ``erdos_renyi`` (needs ``p``), ``star``, ``path``, ``cycle``.

    ``weight_rule`` is ``explicit`` (every edge gets ``weight``) or ``auto``
    (1 / in-degree).
    """

    family: str
    n: int
    p: float | None = None
    weight: float = 1.0
    weight_rule: str = "explicit"
    seed: int = 0


def _erdos_renyi(n, p, seed):
    rng = np.random.default_rng(seed)
    src, dst = [], []
    for u in range(n):
        hits = np.flatnonzero(rng.random(n - 1) < p)
        hits[hits >= u] += 1
        src.extend([u] * hits.size)
        dst.extend(hits.tolist())
    return src, dst


def generate(spec: SyntheticSpec) -> Graph:
    n = spec.n
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= spec.weight <= 1:
        raise ValueError("weight must lie in [0, 1]")
    family = spec.family.lower()
    if family in ("erdos_renyi", "er"):
        if spec.p is None or not 0 < spec.p < 1:
            raise ValueError("erdos_renyi needs 0 < p < 1")
        src, dst = _erdos_renyi(n, spec.p, spec.seed)
    elif family == "star":
        src, dst = [0] * (n - 1), list(range(1, n))
    elif family == "path":
        src, dst = list(range(n - 1)), list(range(1, n))
    elif family == "cycle":
        if n < 2:
            raise ValueError("cycle needs n >= 2")
        src, dst = list(range(n)), [(u + 1) % n for u in range(n)]
    else:
        raise ValueError(f"unknown graph family {spec.family!r}")
    if spec.weight_rule == "auto":
        return auto_weight(from_edges(n, src, dst))
    if spec.weight_rule != "explicit":
        raise ValueError(f"unknown weight rule {spec.weight_rule!r}")
    return from_edges(n, src, dst, np.full(len(src), spec.weight))


def tiny_graphs() -> dict[str, Graph]:
    """The four hand-checkable graphs used throughout the tests.

    G1: 0->1 (w=1).  G2: triangle 0->1->2->0 (w=0.5).  G3: star 0->1..4 (w=1).
    G4: 0->1 (w=0.3), 2->1 (w=0.4).
    """
    return {
        "G1": from_edges(2, [0], [1], [1.0]),
        "G2": generate(SyntheticSpec("cycle", 3, weight=0.5)),
        "G3": generate(SyntheticSpec("star", 5)),
        "G4": from_edges(3, [0, 2], [1, 1], [0.3, 0.4]),
    }


def binomial_floor(p: float, trials: int, sigmas: float = 3.0) -> float:
    """One-sided lower acceptance bound p - sigmas * sqrt(p (1 - p) / trials)."""
    return p - sigmas * math.sqrt(p * (1 - p) / trials)


@dataclass
class TrialReport:
    pass_fraction: float
    opt: float
    opt_seeds: list
    influences: list = field(default_factory=list)
    rr_counts: list = field(default_factory=list)


def guarantee_trial(graph: Graph, k: int, eps: float, delta: float, algo: str, trials: int = 200,
                    model: str = IC, seed: int = 0) -> TrialReport:
    """Run ``algo`` ``trials`` times with independent seeds and score each result exactly."""
    from .dssa import dssa
    from .ssa import ssa

    run = {"ssa": lambda s: ssa(graph, k, eps, delta, None, s, model=model),
           "dssa": lambda s: dssa(graph, k, eps, delta, s, model=model)}[algo]
    opt_seeds, opt = exact_opt(graph, k, model)
    results = [run(seed * 1_000_003 + i) for i in range(trials)]
    seed_sets = [r.seeds for r in results]
    uniq = sorted({tuple(sorted(s)) for s in seed_sets})
    values = dict(zip(uniq, exact_influences(graph, uniq, model).tolist()))
    infl = [values[tuple(sorted(s))] for s in seed_sets]
    target = (1 - 1 / math.e - eps) * opt
    passed = sum(v >= target - 1e-12 for v in infl)
    return TrialReport(passed / trials, opt, opt_seeds, infl, [r.rr_count_total for r in results])
