"""Ground truth for tests: forward cascades, exact influence, exhaustive OPT_k.

Exact influence enumerates live-edge realizations.  IC: every subset of
edges, each edge live independently with probability w.  LT: every node
keeps at most one in-edge, (u, v) with probability w(u, v) and none with the
leftover mass.  Reachable sets are bitmasks, so exact oracles need n <= 62.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import GuardError
from .graph import Graph
from .rng import as_stream, nb_next, nb_seq_state
from .rr_sampling import IC, LT, check_model

MAX_OUTCOMES = 1 << 22
MAX_SEED_SETS = 100_000
MAX_EXACT_NODES = 62


@dataclass(frozen=True)
class ExactInfluenceReport:
    influence: float
    outcomes_enumerated: int
    model: str


# forward simulation -------------------------------------------------------

@numba.njit(nogil=True, cache=True)
def _simulate(indptr, indices, weights, n, seeds, key, start, runs, model):
    out = np.empty(runs, dtype=np.int64)
    mark = np.zeros(n, dtype=np.int64)
    touched = np.zeros(n, dtype=np.int64)
    thresh = np.zeros(n)
    acc = np.zeros(n)
    queue = np.empty(n, dtype=np.int64)
    for r in range(runs):
        ep = r + 1
        state = nb_seq_state(key, start + r)
        tail = 0
        for s in seeds:
            if mark[s] != ep:
                mark[s] = ep
                queue[tail] = s
                tail += 1
        head = 0
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if mark[v] == ep:
                    continue
                if model == 0:
                    state, x = nb_next(state)
                    if x < weights[e]:
                        mark[v] = ep
                        queue[tail] = v
                        tail += 1
                else:
                    if touched[v] != ep:
                        touched[v] = ep
                        state, x = nb_next(state)
                        thresh[v] = x
                        acc[v] = 0.0
                    acc[v] += weights[e]
                    if acc[v] >= thresh[v]:
                        mark[v] = ep
                        queue[tail] = v
                        tail += 1
        out[r] = tail
    return out


def _seed_array(graph: Graph, seeds) -> np.ndarray:
    arr = np.asarray(sorted(set(int(s) for s in seeds)), dtype=np.int64)
    if arr.size == 0:
        raise ValueError("seed set must be nonempty")
    if arr[0] < 0 or arr[-1] >= graph.n:
        raise IndexError(f"seed id outside [0, {graph.n})")
    return arr


def _simulate_batch(graph, seeds, model, runs, rng):
    model = check_model(model)
    if model == LT:
        graph.require_lt()
    rng = as_stream(rng)
    start = rng.reserve(runs)
    return _simulate(graph.fwd_indptr, graph.fwd_indices, graph.fwd_weights, graph.n,
                     _seed_array(graph, seeds), np.uint64(rng.key), start, runs,
                     0 if model == IC else 1)


def simulate_once(graph: Graph, seeds, model: str, rng=None) -> int:
    """One forward cascade; returns the number of active nodes at quiescence.

    LT draws each threshold uniformly on first contact; the final active set
    of a threshold cascade does not depend on the processing order.
    """
    return int(_simulate_batch(graph, seeds, model, 1, rng)[0])


def mc_influence(graph: Graph, seeds, model: str, runs: int, rng=None):
    """Monte-Carlo influence: (mean, standard error) over ``runs`` cascades."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    counts = _simulate_batch(graph, seeds, model, int(runs), rng).astype(np.float64)
    stderr = counts.std(ddof=1) / math.sqrt(runs) if runs > 1 else 0.0
    return float(counts.mean()), float(stderr)


# exact enumeration --------------------------------------------------------

@numba.njit(cache=True)
def _closure(n, live_out, reach):
    for u in range(n):
        seen = np.int64(1) << u
        frontier = seen
        while frontier:
            nxt = np.int64(0)
            for v in range(n):
                if (frontier >> v) & 1:
                    nxt |= live_out[v]
            frontier = nxt & ~seen
            seen |= nxt
        reach[u] = seen


@numba.njit(cache=True)
def _accumulate(n, p, reach, set_masks, node_weights, acc, comp):
    for s in range(set_masks.shape[0]):
        r = np.int64(0)
        m = set_masks[s]
        for u in range(n):
            if (m >> u) & 1:
                r |= reach[u]
        val = 0.0
        for v in range(n):
            if (r >> v) & 1:
                val += node_weights[v]
        # Kahan summation
        y = p * val - comp[s]
        t = acc[s] + y
        comp[s] = (t - acc[s]) - y
        acc[s] = t


@numba.njit(cache=True)
def _exact_ic(n, src, dst, w, set_masks, node_weights):
    m = src.shape[0]
    acc = np.zeros(set_masks.shape[0])
    comp = np.zeros(set_masks.shape[0])
    live_out = np.zeros(n, dtype=np.int64)
    reach = np.zeros(n, dtype=np.int64)
    for outcome in range(np.int64(1) << m):
        p = 1.0
        live_out[:] = 0
        for e in range(m):
            if (outcome >> e) & 1:
                p *= w[e]
                live_out[src[e]] |= np.int64(1) << dst[e]
            else:
                p *= 1.0 - w[e]
        if p == 0.0:
            continue
        _closure(n, live_out, reach)
        _accumulate(n, p, reach, set_masks, node_weights, acc, comp)
    return acc


@numba.njit(cache=True)
def _exact_lt(n, rev_indptr, rev_indices, rev_weights, set_masks, node_weights):
    acc = np.zeros(set_masks.shape[0])
    comp = np.zeros(set_masks.shape[0])
    live_out = np.zeros(n, dtype=np.int64)
    reach = np.zeros(n, dtype=np.int64)
    choice = np.zeros(n, dtype=np.int64)  # in-edge offset; degree means "none"
    total = 1
    for v in range(n):
        total *= rev_indptr[v + 1] - rev_indptr[v] + 1
    for _ in range(total):
        p = 1.0
        live_out[:] = 0
        for v in range(n):
            lo = rev_indptr[v]
            deg = rev_indptr[v + 1] - lo
            c = choice[v]
            if c < deg:
                p *= rev_weights[lo + c]
                live_out[rev_indices[lo + c]] |= np.int64(1) << v
            else:
                rest = 1.0
                for e in range(lo, lo + deg):
                    rest -= rev_weights[e]
                p *= max(rest, 0.0)
        if p > 0.0:
            _closure(n, live_out, reach)
            _accumulate(n, p, reach, set_masks, node_weights, acc, comp)
        # mixed-radix increment
        for v in range(n):
            choice[v] += 1
            if choice[v] <= rev_indptr[v + 1] - rev_indptr[v]:
                break
            choice[v] = 0
    return acc


def outcome_count(graph: Graph, model: str) -> int:
    if check_model(model) == IC:
        return 1 << graph.m
    return math.prod(int(d) + 1 for d in graph.in_degree())


def _guard(graph: Graph, model: str) -> int:
    if graph.n > MAX_EXACT_NODES:
        raise GuardError(f"exact oracles support n <= {MAX_EXACT_NODES}, got {graph.n}")
    count = outcome_count(graph, model)
    if count > MAX_OUTCOMES:
        raise GuardError(f"{count} live-edge outcomes exceed the guard of {MAX_OUTCOMES}")
    return count


def exact_influences(graph: Graph, seed_sets, model: str, node_weights=None) -> np.ndarray:
    """Exact (optionally node-weighted) influence of every seed set in ``seed_sets``."""
    model = check_model(model)
    _guard(graph, model)
    if model == LT:
        graph.require_lt()
    masks = []
    for seeds in seed_sets:
        arr = _seed_array(graph, seeds)
        masks.append(int(np.bitwise_or.reduce(np.left_shift(np.int64(1), arr))))
    masks = np.asarray(masks, dtype=np.int64)
    weights = np.ones(graph.n) if node_weights is None else np.asarray(node_weights, dtype=np.float64)
    if model == IC:
        src, dst, w = graph.edge_arrays()
        return _exact_ic(graph.n, src.astype(np.int64), dst.astype(np.int64), w, masks, weights)
    return _exact_lt(graph.n, graph.rev_indptr, graph.rev_indices.astype(np.int64),
                     graph.rev_weights, masks, weights)


def exact_influence(graph: Graph, seeds, model: str, node_weights=None) -> ExactInfluenceReport:
    value = float(exact_influences(graph, [seeds], model, node_weights)[0])
    return ExactInfluenceReport(value, outcome_count(graph, model), check_model(model))


def exact_opt(graph: Graph, k: int, model: str, node_weights=None):
    """Exhaustive OPT_k: (seeds, value), ties resolved to the lexicographically first set."""
    if not 1 <= k <= graph.n:
        raise ValueError(f"need 1 <= k <= n = {graph.n}")
    if math.comb(graph.n, k) > MAX_SEED_SETS:
        raise GuardError(f"C({graph.n}, {k}) seed sets exceed the guard of {MAX_SEED_SETS}")
    combos = list(itertools.combinations(range(graph.n), k))
    values = exact_influences(graph, combos, model, node_weights)
    best = float(values.max())
    i = int(np.flatnonzero(values >= best - 1e-12 * max(1.0, abs(best)))[0])
    return list(combos[i]), float(values[i])
