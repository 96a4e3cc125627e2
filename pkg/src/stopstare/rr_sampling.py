"""Reverse-reachable (RR) set sampling under IC and LT.

IC: reverse BFS from the root; each incoming edge (u, v) of a visited node is
live independently with probability w(u, v).

LT: reverse random walk; the current node keeps one in-neighbour u with
probability w(u, v) (none with the leftover mass) and the walk ends when no
neighbour is kept or it revisits a node.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ModelError
from .graph import Graph
from .rng import RngStream, SequenceRng, as_stream, nb_next, nb_seq_state

IC = "ic"
LT = "lt"
MODELS = (IC, LT)
_MODEL_CODE = {IC: 0, LT: 1}


@dataclass(frozen=True)
class RRSet:
    root: int
    nodes: tuple[int, ...]  # discovery order, root first

    def __contains__(self, v) -> bool:
        return v in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class RRBatch:
    """A run of consecutive RR sets in flat form (``nodes[indptr[i]:indptr[i+1]]``)."""

    indptr: np.ndarray
    nodes: np.ndarray
    roots: np.ndarray

    def __len__(self) -> int:
        return int(self.roots.shape[0])

    def rr(self, i: int) -> RRSet:
        nodes = self.nodes[self.indptr[i]:self.indptr[i + 1]]
        return RRSet(int(self.roots[i]), tuple(nodes.tolist()))

    @staticmethod
    def concat(parts) -> "RRBatch":
        parts = list(parts)
        if len(parts) == 1:
            return parts[0]
        offsets = np.cumsum([0] + [p.indptr[-1] for p in parts[:-1]])
        indptr = np.concatenate([parts[0].indptr[:1]] + [p.indptr[1:] + off for p, off in zip(parts, offsets)])
        return RRBatch(indptr, np.concatenate([p.nodes for p in parts]),
                       np.concatenate([p.roots for p in parts]))


def check_model(model: str) -> str:
    model = str(model).lower()
    if model not in MODELS:
        raise ModelError(f"unknown diffusion model {model!r}; expected one of {MODELS}")
    return model


@numba.njit(nogil=True, cache=True)
def _pick_root(u, n, cum, total, last_positive):
    if cum.shape[0] == 0:
        r = np.int64(u * n)
        return r if r < n else n - 1
    r = np.searchsorted(cum, u * total, side="right")
    return r if r < n else last_positive


@numba.njit(nogil=True, cache=True)
def _draw_batch(indptr, indices, weights, n, cum, total, last_positive,
                key, start, count, model, fixed_root):
    out_ptr = np.empty(count + 1, dtype=np.int64)
    roots = np.empty(count, dtype=np.int32)
    cap = max(16, 4 * count)
    buf = np.empty(cap, dtype=np.int32)
    mark = np.zeros(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int32)
    pos = 0
    out_ptr[0] = 0
    for i in range(count):
        ep = i + 1
        state = nb_seq_state(key, start + i)
        if fixed_root >= 0:
            root = fixed_root
        else:
            state, u = nb_next(state)
            root = _pick_root(u, n, cum, total, last_positive)
        roots[i] = root
        if pos + n > cap:
            while pos + n > cap:
                cap *= 2
            grown = np.empty(cap, dtype=np.int32)
            grown[:pos] = buf[:pos]
            buf = grown
        mark[root] = ep
        buf[pos] = root
        pos += 1
        if model == 0:
            head = 0
            tail = 1
            queue[0] = root
            while head < tail:
                v = queue[head]
                head += 1
                for e in range(indptr[v], indptr[v + 1]):
                    src = indices[e]
                    if mark[src] == ep:
                        continue
                    state, u = nb_next(state)
                    if u < weights[e]:
                        mark[src] = ep
                        queue[tail] = src
                        tail += 1
                        buf[pos] = src
                        pos += 1
        else:
            v = root
            while True:
                state, u = nb_next(state)
                acc = 0.0
                chosen = -1
                for e in range(indptr[v], indptr[v + 1]):
                    acc += weights[e]
                    if u < acc:
                        chosen = indices[e]
                        break
                if chosen < 0 or mark[chosen] == ep:
                    break
                mark[chosen] = ep
                buf[pos] = chosen
                pos += 1
                v = chosen
        out_ptr[i + 1] = pos
    return out_ptr, buf[:pos].copy(), roots


class RRSampler:
    """Draws RR sets for one graph, model and root distribution.

    ``target_weights`` switches root selection from uniform to proportional to
    the given per-node weights (weighted RIS).
    """

    def __init__(self, graph: Graph, model: str = IC, target_weights=None, threads: int = 1):
        self.graph = graph
        self.model = check_model(model)
        if self.model == LT:
            graph.require_lt()
        self.threads = max(1, int(threads))
        if target_weights is None:
            self.cum = np.zeros(0, dtype=np.float64)
            self.total = float(graph.n)
            self.last_positive = graph.n - 1
        else:
            w = np.asarray(target_weights, dtype=np.float64)
            if w.shape != (graph.n,):
                raise ValueError(f"need one weight per node ({graph.n}), got shape {w.shape}")
            if np.any(w < 0) or not np.all(np.isfinite(w)):
                raise ValueError("target weights must be finite and nonnegative")
            self.cum = np.cumsum(w)
            self.total = float(self.cum[-1])
            if not self.total > 0:
                raise ValueError("target weights sum to zero")
            self.last_positive = int(np.flatnonzero(w > 0)[-1])
        self.weighted = target_weights is not None

    @property
    def scale(self) -> float:
        """Root-measure factor: n for uniform roots, the weight total otherwise."""
        return self.total

    def _kernel(self, key, start, count, fixed_root=-1):
        g = self.graph
        return _draw_batch(g.rev_indptr, g.rev_indices, g.rev_weights, g.n, self.cum,
                           self.total, self.last_positive, np.uint64(key), start, count,
                           _MODEL_CODE[self.model], fixed_root)

    def draw(self, rng: RngStream, count: int) -> RRBatch:
        """Draw the next ``count`` RR sets of ``rng``'s stream."""
        count = int(count)
        start = rng.reserve(count)
        key = rng.key
        if self.threads == 1 or count < 2048:
            return RRBatch(*self._kernel(key, start, count))
        bounds = np.linspace(0, count, self.threads + 1).astype(np.int64)
        with ThreadPoolExecutor(self.threads) as pool:
            parts = pool.map(lambda ab: RRBatch(*self._kernel(key, start + ab[0], ab[1] - ab[0])),
                             [(bounds[i], bounds[i + 1]) for i in range(self.threads)])
            return RRBatch.concat(parts)

    def draw_rooted(self, rng: RngStream, root: int) -> RRSet:
        if not 0 <= root < self.graph.n:
            raise IndexError(f"root {root} outside [0, {self.graph.n})")
        start = rng.reserve(1)
        return RRBatch(*self._kernel(rng.key, start, 1, int(root))).rr(0)


# operation-level entry points ---------------------------------------------

def sample_root_uniform(n: int, rng) -> int:
    rng = as_stream(rng)
    u = SequenceRng(rng.key, rng.reserve(1)).uniform()
    return min(int(u * n), n - 1)


class RootTable:
    """Prefix-sum table for drawing roots proportionally to node weights."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a nonempty vector of finite nonnegative reals")
        self.cum = np.cumsum(w)
        self.total = float(self.cum[-1])
        if not self.total > 0:
            raise ValueError("weights sum to zero")
        self.last_positive = int(np.flatnonzero(w > 0)[-1])

    def pick(self, u: float) -> int:
        r = int(np.searchsorted(self.cum, u * self.total, side="right"))
        return r if r < self.cum.size else self.last_positive


def sample_root_weighted(weights, rng) -> int:
    table = weights if isinstance(weights, RootTable) else RootTable(weights)
    rng = as_stream(rng)
    return table.pick(SequenceRng(rng.key, rng.reserve(1)).uniform())


def sample_rr_ic(graph: Graph, root: int, rng) -> RRSet:
    return RRSampler(graph, IC).draw_rooted(as_stream(rng), root)


def sample_rr_lt(graph: Graph, root: int, rng) -> RRSet:
    return RRSampler(graph, LT).draw_rooted(as_stream(rng), root)


def reference_rr(graph: Graph, model: str, key: int, index: int, root=None, table=None):
    """Pure-Python RR sampler consuming the same random sequence as the kernel.

    Returns ``(rr_set, live_edges)``; ``live_edges`` lists the sampled live
    edges ``(u, v)`` that were examined, so reachability can be audited.
    """
    rng = SequenceRng(key, index)
    if root is None:
        u = rng.uniform()
        if table is None:
            root = min(int(u * graph.n), graph.n - 1)
        else:
            root = table.pick(u)
    seen = {root}
    order = [root]
    live = []
    if check_model(model) == IC:
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            srcs, ws = graph.in_edges(v)
            for src, w in zip(srcs.tolist(), ws.tolist()):
                if src in seen:
                    continue
                if rng.uniform() < w:
                    live.append((src, v))
                    seen.add(src)
                    order.append(src)
    else:
        v = root
        while True:
            u = rng.uniform()
            acc = 0.0
            chosen = None
            srcs, ws = graph.in_edges(v)
            for src, w in zip(srcs.tolist(), ws.tolist()):
                acc += w
                if u < acc:
                    chosen = src
                    break
            if chosen is None:
                break
            live.append((chosen, v))
            if chosen in seen:
                break
            seen.add(chosen)
            order.append(chosen)
            v = chosen
    return RRSet(root, tuple(order)), live


__all__ = [
    "IC", "LT", "MODELS", "RRSet", "RRBatch", "RRSampler", "RootTable", "ModelError",
    "sample_root_uniform", "sample_root_weighted", "sample_rr_ic", "sample_rr_lt",
    "reference_rr", "check_model",
]
