"""Dynamic Stop-and-Stare (D-SSA).

One ordered stream of RR sets.  Iteration t looks at the first
``2 * ceil(lam) * 2**(t-1)`` sets: the first half picks the candidate seeds,
the second half checks them, and the error terms are recomputed from the data
at every check.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .bounds import ONE_MINUS_INV_E, Caps, caps_for
from .coverage import RRCollection, max_coverage_greedy
from .graph import Graph
from .rng import as_stream
from .rr_sampling import IC, RRSampler
from .ssa import SeedResult, StopReason, _common_checks


@dataclass
class DssaIterationTrace:
    t: int
    pool_half_size: int
    coverage: int
    cov_check: int
    passed_d1: bool
    eps1: float | None = None
    eps2: float | None = None
    eps3: float | None = None
    eps_t: float | None = None
    passed_d2: bool = False


def epsilon_t(eps1: float, eps2: float, eps3: float, eps: float) -> float:
    return (eps1 + eps2 + eps1 * eps2) * (ONE_MINUS_INV_E - eps) + ONE_MINUS_INV_E * eps3


def dynamic_errors(est: float, est_check: float, scale: float, t: int, eps: float):
    """(eps1, eps2, eps3) from the candidate's two influence estimates at iteration t.

    ``eps1`` is left unclamped and may be negative.  The eps2/eps3 denominators
    use ``2**(t-1) * est_check`` as written in the algorithm, with no extra
    ``lam`` factor.  Since ``est_check = scale * cov_check / (ceil(lam) * 2**(t-1))``
    this gives ``eps2**2 = eps**2 (1 + eps) ceil(lam) / cov_check``, so the
    ``lam`` factor is already present and D1 keeps eps2 below eps.
    """
    half_scale = 2.0 ** (t - 1) * est_check
    e1 = est / est_check - 1.0
    e2 = eps * math.sqrt(scale * (1 + eps) / half_scale)
    e3 = eps * math.sqrt(scale * (1 + eps) * (ONE_MINUS_INV_E - eps) / ((1 + eps / 3.0) * half_scale))
    return e1, e2, e3


def dssa(graph: Graph, k: int, eps: float, delta: float, rng=None, *, model: str = IC,
         target_weights=None, threads: int = 1, caps: Caps | None = None,
         keep_pool: bool = False) -> SeedResult:
    """Run D-SSA; takes no epsilon split since the errors are chosen per iteration."""
    _common_checks(graph, k, eps, delta)
    if eps >= ONE_MINUS_INV_E:
        raise ValueError(f"D-SSA needs eps < 1 - 1/e, got {eps}")
    started = time.perf_counter()
    rng = as_stream(rng)
    stream_rng = rng.spawn(0)
    sampler = RRSampler(graph, model, target_weights, threads)
    caps = caps or caps_for(graph.n, k, eps, delta)
    base = math.ceil(caps.lam)

    stream = RRCollection(graph.n, sampler.scale)
    trace: list[DssaIterationTrace] = []
    reason = StopReason.CAP_REACHED
    t = 0
    while True:
        t += 1
        half = base * 2 ** (t - 1)
        stream.extend(sampler.draw(stream_rng, 2 * half - len(stream)))
        seeds, coverage = max_coverage_greedy(stream, k, 0, half)
        est = stream.scale * coverage / half
        cov_check = stream.cov(seeds, half, 2 * half)
        step = DssaIterationTrace(t, half, coverage, cov_check, cov_check >= caps.lam1)
        trace.append(step)
        if step.passed_d1:
            est_check = stream.scale * cov_check / half
            e1, e2, e3 = dynamic_errors(est, est_check, stream.scale, t, eps)
            step.eps1, step.eps2, step.eps3 = e1, e2, e3
            step.eps_t = epsilon_t(e1, e2, e3, eps)
            if step.eps_t <= eps:
                step.passed_d2 = True
                reason = StopReason.CONDITIONS_MET
                break
        if half >= caps.n_max or t >= caps.i_max:
            break

    return SeedResult(
        seeds=seeds, est_influence=est, rr_count_main=len(stream), rr_count_verify=0,
        iterations=t, stop_reason=reason, wall_ms=(time.perf_counter() - started) * 1e3,
        rng_seed=rng.seed, algo="dssa", caps=caps, peak_items=stream.total_items, trace=trace,
        pool=stream if keep_pool else None,
    )
