"""RR-set pools, coverage counting and greedy max-coverage."""
from __future__ import annotations

import numba
import numpy as np

from .errors import NodeRangeError
from .rr_sampling import RRBatch, RRSet


@numba.njit(cache=True)
def _covered_flags(indptr, nodes, lo, hi, in_set):
    out = np.zeros(hi - lo, dtype=np.bool_)
    for j in range(lo, hi):
        for p in range(indptr[j], indptr[j + 1]):
            if in_set[nodes[p]]:
                out[j - lo] = True
                break
    return out


@numba.njit(cache=True)
def _greedy(indptr, nodes, lo, hi, n, k):
    counts = np.zeros(n, dtype=np.int64)
    for p in range(indptr[lo], indptr[hi]):
        counts[nodes[p]] += 1
    # node -> RR ids over [lo, hi), ids ascending
    inv_ptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        inv_ptr[v + 1] = inv_ptr[v] + counts[v]
    fill = inv_ptr[:-1].copy()
    inv = np.empty(inv_ptr[n], dtype=np.int64)
    for j in range(lo, hi):
        for p in range(indptr[j], indptr[j + 1]):
            v = nodes[p]
            inv[fill[v]] = j
            fill[v] += 1

    covered = np.zeros(hi - lo, dtype=np.bool_)
    seeds = np.empty(k, dtype=np.int64)
    total = 0
    for i in range(k):
        best = np.argmax(counts)  # first maximum: smallest id wins ties
        seeds[i] = best
        total += counts[best]
        counts[best] = -1
        for q in range(inv_ptr[best], inv_ptr[best + 1]):
            j = inv[q]
            if covered[j - lo]:
                continue
            covered[j - lo] = True
            for p in range(indptr[j], indptr[j + 1]):
                v = nodes[p]
                if counts[v] > 0:
                    counts[v] -= 1
    return seeds, total


class RRCollection:
    """Append-only pool of RR sets.

    Sets are stored back to back in ``nodes`` with CSR offsets ``indptr``; the
    order of generation defines the stream prefixes used by D-SSA.  ``scale``
    turns coverage fractions into influence estimates (n, or the total target
    weight for weighted roots).
    """

    def __init__(self, n: int, scale: float | None = None):
        self.n = int(n)
        self.scale = float(n if scale is None else scale)
        self._indptr = np.zeros(1024, dtype=np.int64)
        self._nodes = np.empty(4096, dtype=np.int32)
        self._roots = np.empty(1023, dtype=np.int32)
        self._size = 0
        self._index = None

    def __len__(self) -> int:
        return self._size

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr[: self._size + 1]

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes[: self._indptr[self._size]]

    @property
    def roots(self) -> np.ndarray:
        return self._roots[: self._size]

    @property
    def total_items(self) -> int:
        return int(self._indptr[self._size])

    def rr(self, j: int) -> RRSet:
        if not 0 <= j < self._size:
            raise IndexError(j)
        return RRSet(int(self._roots[j]), tuple(self._nodes[self._indptr[j]:self._indptr[j + 1]].tolist()))

    def __iter__(self):
        return (self.rr(j) for j in range(self._size))

    def _reserve(self, sets: int, items: int) -> None:
        need_sets = self._size + sets
        if need_sets + 1 > self._indptr.size:
            cap = max(need_sets + 1, 2 * self._indptr.size)
            self._indptr = np.concatenate([self._indptr, np.zeros(cap - self._indptr.size, np.int64)])
            self._roots = np.concatenate([self._roots, np.empty(cap - 1 - self._roots.size, np.int32)])
        need_items = self.total_items + items
        if need_items > self._nodes.size:
            cap = max(need_items, 2 * self._nodes.size)
            grown = np.empty(cap, dtype=np.int32)
            grown[: self.total_items] = self.nodes
            self._nodes = grown

    def extend(self, batch: RRBatch) -> None:
        count, items = len(batch), int(batch.indptr[-1] - batch.indptr[0])
        if count == 0:
            return
        nodes = batch.nodes[batch.indptr[0]:batch.indptr[-1]]
        if nodes.size and (nodes.min() < 0 or nodes.max() >= self.n):
            raise NodeRangeError(f"RR set node id outside [0, {self.n})")
        self._reserve(count, items)
        base = self.total_items
        self._nodes[base: base + items] = nodes
        self._indptr[self._size + 1: self._size + count + 1] = batch.indptr[1:] - batch.indptr[0] + base
        self._roots[self._size: self._size + count] = batch.roots
        self._size += count
        self._index = None

    def append(self, rr) -> None:
        """Append one RR set (an :class:`RRSet` or a node iterable whose first element is the root)."""
        nodes = list(rr.nodes) if isinstance(rr, RRSet) else list(dict.fromkeys(rr))
        root = rr.root if isinstance(rr, RRSet) else (nodes[0] if nodes else -1)
        if not nodes:
            raise ValueError("RR sets are never empty")
        arr = np.asarray(nodes, dtype=np.int64)
        if arr.min() < 0 or arr.max() >= self.n:
            raise NodeRangeError(f"RR set node id outside [0, {self.n})")
        self.extend(RRBatch(np.array([0, arr.size], dtype=np.int64), arr.astype(np.int32),
                            np.array([root], dtype=np.int32)))

    def index(self, u: int) -> np.ndarray:
        """Ids of the RR sets containing node ``u``, ascending."""
        if self._index is None:
            nodes = self.nodes
            owner = np.repeat(np.arange(self._size, dtype=np.int64), np.diff(self.indptr))
            order = np.argsort(nodes, kind="stable")
            ptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(nodes, minlength=self.n), out=ptr[1:])
            self._index = (ptr, owner[order])
        ptr, ids = self._index
        return ids[ptr[u]:ptr[u + 1]]

    def _range(self, lo, hi):
        hi = self._size if hi is None else int(hi)
        lo = int(lo)
        if not 0 <= lo <= hi <= self._size:
            raise IndexError(f"range [{lo}, {hi}) outside pool of {self._size}")
        return lo, hi

    def _mask(self, seeds) -> np.ndarray:
        seeds = np.asarray(list(seeds), dtype=np.int64)
        if seeds.size == 0:
            raise ValueError("seed set must be nonempty")
        if seeds.min() < 0 or seeds.max() >= self.n:
            raise NodeRangeError(f"seed id outside [0, {self.n})")
        mask = np.zeros(self.n, dtype=np.bool_)
        mask[seeds] = True
        return mask

    def covered(self, seeds, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Boolean flag per RR set in ``[lo, hi)``: does it intersect ``seeds``?"""
        lo, hi = self._range(lo, hi)
        return _covered_flags(self.indptr, self._nodes, lo, hi, self._mask(seeds))

    def cov(self, seeds, lo: int = 0, hi: int | None = None) -> int:
        return int(self.covered(seeds, lo, hi).sum())

    def estimate(self, seeds, lo: int = 0, hi: int | None = None) -> float:
        lo, hi = self._range(lo, hi)
        if hi == lo:
            raise ValueError("cannot estimate influence on an empty range")
        return self.scale * self.cov(seeds, lo, hi) / (hi - lo)


def append(coll: RRCollection, rr) -> None:
    coll.append(rr)


def cov(coll: RRCollection, seeds, lo: int = 0, hi: int | None = None) -> int:
    return coll.cov(seeds, lo, hi)


def estimate_influence(coll: RRCollection, seeds, lo: int = 0, hi: int | None = None) -> float:
    return coll.estimate(seeds, lo, hi)


def max_coverage_greedy(coll: RRCollection, k: int, lo: int = 0, hi: int | None = None):
    """Greedy max-coverage over the RR sets in ``[lo, hi)``.

    Returns ``(seeds, coverage)``; seeds are in selection order, ties go to
    the smallest node id and zero-gain picks pad the result to exactly ``k``.
    """
    if not 1 <= k <= coll.n:
        raise ValueError(f"need 1 <= k <= n = {coll.n}, got k={k}")
    lo, hi = coll._range(lo, hi)
    seeds, total = _greedy(coll.indptr, coll._nodes, lo, hi, coll.n, int(k))
    return seeds.tolist(), int(total)
