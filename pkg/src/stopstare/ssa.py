"""Stop-and-Stare (SSA) with the Estimate-Inf stopping rule."""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    Caps,
    EpsilonSplit,
    caps_for,
    default_epsilon_split,
    estimate_threshold,
    ssa_lambda1,
    verify_cap,
)
from .coverage import RRCollection, _covered_flags, max_coverage_greedy
from .graph import Graph
from .rng import RngStream, as_stream
from .rr_sampling import IC, RRSampler

ID_BYTES = 4


class StopReason(str, enum.Enum):
    CAP_REACHED = "CapReached"
    CONDITIONS_MET = "ConditionsMet"


@dataclass
class SsaIterationTrace:
    t: int
    pool_size: int
    coverage: int
    passed_c1: bool
    estimate: float | None = None
    verify_samples: int = 0
    passed_c2: bool = False


@dataclass
class SeedResult:
    seeds: list[int]
    est_influence: float
    rr_count_main: int
    rr_count_verify: int
    iterations: int
    stop_reason: StopReason
    wall_ms: float
    rng_seed: int
    algo: str = "ssa"
    caps: Caps | None = None
    peak_items: int = 0
    trace: list = field(default_factory=list)
    pool: RRCollection | None = field(default=None, repr=False)

    @property
    def rr_count_total(self) -> int:
        return self.rr_count_main + self.rr_count_verify

    @property
    def peak_memory_bytes(self) -> int:
        return self.peak_items * ID_BYTES


@dataclass(frozen=True)
class EstimateOutcome:
    """Result of Estimate-Inf: ``value`` is None when ``t_max`` draws were exhausted."""

    value: float | None
    samples: int
    items: int = 0

    @property
    def exceeded(self) -> bool:
        return self.value is None


def _estimate(sampler: RRSampler, seeds, eps_v, delta_v, t_max, rng: RngStream) -> EstimateOutcome:
    lam2 = estimate_threshold(eps_v, delta_v)
    need = math.ceil(lam2)
    mask = np.zeros(sampler.graph.n, dtype=np.bool_)
    mask[np.asarray(list(seeds), dtype=np.int64)] = True
    drawn = hits = items = peak = 0
    batch = min(t_max, need)
    while drawn < t_max:
        part = sampler.draw(rng, batch)
        flags = _covered_flags(part.indptr, part.nodes, 0, len(part), mask)
        running = hits + np.cumsum(flags)
        stop = np.flatnonzero(running >= need)
        if stop.size:
            T = drawn + int(stop[0]) + 1
            peak = max(peak, items + int(part.indptr[stop[0] + 1]))
            return EstimateOutcome(sampler.scale * lam2 / T, T, peak)
        drawn += len(part)
        hits = int(running[-1])
        items += int(part.indptr[-1])
        peak = items
        batch = min(t_max - drawn, max(batch, 1) * 2)
    return EstimateOutcome(None, drawn, peak)


def estimate_inf(graph: Graph, seeds, eps_v: float, delta_v: float, t_max: int, rng=None,
                 model: str = IC, sampler: RRSampler | None = None) -> EstimateOutcome:
    """Draw RR sets until ``1 + (1 + eps')·Upsilon(eps', delta')`` of them hit ``seeds``.

    Returns the estimate ``scale * threshold / T`` at the first such ``T``, or
    an exceeded outcome after ``t_max`` draws.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("seed set must be nonempty")
    if not (eps_v > 0 and 0 < delta_v < 1 and t_max >= 1):
        raise ValueError("need eps' > 0, 0 < delta' < 1 and t_max >= 1")
    sampler = sampler or RRSampler(graph, model)
    return _estimate(sampler, seeds, eps_v, delta_v, int(t_max), as_stream(rng))


def _common_checks(graph, k, eps, delta):
    if not 1 <= k <= graph.n:
        raise ValueError(f"need 1 <= k <= n = {graph.n}, got k={k}")
    if not (0 < eps < 1 and 0 < delta < 1):
        raise ValueError(f"need 0 < eps, delta < 1, got eps={eps}, delta={delta}")


def ssa(graph: Graph, k: int, eps: float, delta: float, split: EpsilonSplit | None = None,
        rng=None, *, model: str = IC, target_weights=None, threads: int = 1,
        caps: Caps | None = None, keep_pool: bool = False) -> SeedResult:
    """Run SSA and return the selected seeds with run statistics.

    The main pool doubles every iteration; once the greedy solution covers at
    least ``lam1`` RR sets, an independent Estimate-Inf run checks it and the
    algorithm stops when ``est <= (1 + eps1) * verified``.
    """
    _common_checks(graph, k, eps, delta)
    split = default_epsilon_split(eps) if split is None else split.validate(eps)
    started = time.perf_counter()
    rng = as_stream(rng)
    main_rng = rng.spawn(0)
    sampler = RRSampler(graph, model, target_weights, threads)
    caps = caps or caps_for(graph.n, k, eps, delta)
    lam1 = ssa_lambda1(split, delta, caps.i_max)
    delta_v = delta / (3.0 * caps.i_max)

    pool = RRCollection(graph.n, sampler.scale)
    pool.extend(sampler.draw(main_rng, math.ceil(caps.lam)))
    trace: list[SsaIterationTrace] = []
    verify_total = peak = 0
    reason = StopReason.CAP_REACHED
    t = 0
    while True:
        t += 1
        pool.extend(sampler.draw(main_rng, len(pool)))
        seeds, coverage = max_coverage_greedy(pool, k)
        est = pool.scale * coverage / len(pool)
        step = SsaIterationTrace(t, len(pool), coverage, coverage >= lam1)
        trace.append(step)
        peak = max(peak, pool.total_items)
        if step.passed_c1:
            t_max = verify_cap(len(pool), split)
            out = _estimate(sampler, seeds, split.eps2, delta_v, t_max, rng.spawn(t))
            verify_total += out.samples
            peak = max(peak, pool.total_items + out.items)
            step.estimate, step.verify_samples = out.value, out.samples
            if not out.exceeded and est <= (1 + split.eps1) * out.value:
                step.passed_c2 = True
                reason = StopReason.CONDITIONS_MET
                break
        if len(pool) >= caps.n_max or t >= caps.i_max:
            break

    return SeedResult(
        seeds=seeds, est_influence=est, rr_count_main=len(pool), rr_count_verify=verify_total,
        iterations=t, stop_reason=reason, wall_ms=(time.perf_counter() - started) * 1e3,
        rng_seed=rng.seed, algo="ssa", caps=caps, peak_items=peak, trace=trace,
        pool=pool if keep_pool else None,
    )
