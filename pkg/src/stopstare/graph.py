"""Immutable weighted directed graphs in compressed sparse form.

Nodes are dense ids ``0..n-1``.  Both adjacency directions are kept: RR-set
sampling walks the reverse lists, forward cascades walk the forward lists.
"""
from __future__ import annotations

import io
import logging
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterator

import numpy as np

from .errors import BinaryFormatError, GraphParseError, ModelError, NodeRangeError, WeightRangeError

log = logging.getLogger(__name__)

LT_TOLERANCE = 1e-9
BINARY_MAGIC = b"SSAG"
BINARY_VERSION = 1


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    fwd_indptr: np.ndarray  # int64, n + 1
    fwd_indices: np.ndarray  # int32, m
    fwd_weights: np.ndarray  # float64, m
    rev_indptr: np.ndarray
    rev_indices: np.ndarray
    rev_weights: np.ndarray
    in_weight_sum: np.ndarray  # float64, n
    dropped_self_loops: int = 0

    @property
    def m(self) -> int:
        return int(self.fwd_indices.shape[0])

    def in_degree(self) -> np.ndarray:
        return np.diff(self.rev_indptr)

    def out_degree(self) -> np.ndarray:
        return np.diff(self.fwd_indptr)

    def in_edges(self, v: int):
        lo, hi = self.rev_indptr[v], self.rev_indptr[v + 1]
        return self.rev_indices[lo:hi], self.rev_weights[lo:hi]

    def out_edges(self, u: int):
        lo, hi = self.fwd_indptr[u], self.fwd_indptr[u + 1]
        return self.fwd_indices[lo:hi], self.fwd_weights[lo:hi]

    def edge_arrays(self):
        """(sources, targets, weights) in forward CSR order."""
        src = np.repeat(np.arange(self.n, dtype=np.int32), self.out_degree())
        return src, self.fwd_indices.copy(), self.fwd_weights.copy()

    def edges(self) -> Iterator[tuple[int, int, float]]:
        src, dst, w = self.edge_arrays()
        for u, v, x in zip(src.tolist(), dst.tolist(), w.tolist()):
            yield u, v, x

    def is_lt_valid(self, tol: float = LT_TOLERANCE) -> bool:
        return bool(np.all(self.in_weight_sum <= 1.0 + tol))

    def require_lt(self) -> None:
        if not self.is_lt_valid():
            bad = int(np.argmax(self.in_weight_sum))
            raise ModelError(
                f"LT model needs incoming weights summing to <= 1; node {bad} has "
                f"{self.in_weight_sum[bad]:.12g}"
            )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _csr(n, keys, cols, weights):
    order = np.lexsort((cols, keys))
    keys, cols, weights = keys[order], cols[order], weights[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=indptr[1:])
    return indptr, cols.astype(np.int32), weights.astype(np.float64)


def from_edges(n: int, sources, targets, weights=None) -> Graph:
    """Build a graph from edge arrays.

    Self-loops are dropped; parallel edges are merged by summing their
    weights and clamping the result to 1.
    """
    if n < 1:
        raise ValueError("graph needs at least one node")
    src = np.asarray(sources, dtype=np.int64).reshape(-1)
    dst = np.asarray(targets, dtype=np.int64).reshape(-1)
    if weights is None:
        w = np.ones(src.shape[0], dtype=np.float64)
    else:
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if not (src.shape == dst.shape == w.shape):
        raise ValueError("edge arrays must have equal length")
    if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
        raise NodeRangeError(f"node id outside [0, {n})")
    if np.any(~np.isfinite(w)) or np.any(w < 0.0) or np.any(w > 1.0):
        raise WeightRangeError("edge weights must lie in [0, 1]")

    loops = src == dst
    dropped = int(loops.sum())
    if dropped:
        log.warning("dropped %d self-loop(s)", dropped)
        src, dst, w = src[~loops], dst[~loops], w[~loops]

    if src.size:
        code = src * n + dst
        uniq, inverse = np.unique(code, return_inverse=True)
        if uniq.size != code.size:
            w = np.minimum(np.bincount(inverse, weights=w, minlength=uniq.size), 1.0)
            src, dst = uniq // n, uniq % n

    fwd = _csr(n, src, dst, w)
    rev = _csr(n, dst, src, w)
    in_sum = np.bincount(dst, weights=w, minlength=n).astype(np.float64)
    return Graph(n, *fwd, *rev, in_sum, dropped)


def auto_weight(graph: Graph) -> Graph:
    """Return a copy with w(u, v) = 1 / d_in(v), d_in counting distinct in-neighbours."""
    src, dst, _ = graph.edge_arrays()
    d_in = graph.in_degree()
    w = 1.0 / d_in[dst] if dst.size else np.zeros(0)
    g = from_edges(graph.n, src, dst, w)
    # d_in copies of 1/d_in need not sum to exactly 1.0 in floating point
    in_sum = np.where(d_in > 0, 1.0, 0.0)
    return Graph(g.n, g.fwd_indptr, g.fwd_indices, g.fwd_weights, g.rev_indptr,
                 g.rev_indices, g.rev_weights, in_sum, graph.dropped_self_loops)


def undirected(graph: Graph) -> Graph:
    """Replace every edge by the two opposite arcs."""
    src, dst, w = graph.edge_arrays()
    return from_edges(graph.n, np.concatenate([src, dst]), np.concatenate([dst, src]),
                      np.concatenate([w, w]))


# text edge lists ----------------------------------------------------------

def _text_lines(reader):
    if isinstance(reader, (bytes, bytearray)):
        reader = io.BytesIO(reader)
    for lineno, raw in enumerate(reader, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise GraphParseError("not valid UTF-8", lineno) from exc
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def load_edge_list(reader, weighted: bool = True) -> Graph:
    """Parse an ``n m`` header followed by ``u v [w]`` lines.

    With ``weighted=False`` any weight column is ignored and edges get
    1/d_in(v) weights.  With ``weighted=True`` every edge line must carry a
    weight.
    """
    lines = _text_lines(reader)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphParseError("empty input: missing 'n m' header") from None
    if len(header) != 2:
        raise GraphParseError("header must be 'n m'", lineno)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphParseError("header must be two integers", lineno) from None
    if n < 1 or m < 0:
        raise GraphParseError("header needs n >= 1 and m >= 0", lineno)

    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    w = np.ones(m, dtype=np.float64)
    count = 0
    for lineno, parts in lines:
        if len(parts) not in (2, 3):
            raise GraphParseError("expected 'u v' or 'u v w'", lineno)
        if count >= m:
            raise GraphParseError(f"more than the declared {m} edges", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("node ids must be integers", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise NodeRangeError(f"line {lineno}: node id outside [0, {n})")
        if weighted:
            if len(parts) != 3:
                raise GraphParseError("missing edge weight", lineno)
            try:
                x = float(parts[2])
            except ValueError:
                raise GraphParseError("weight is not a number", lineno) from None
            if not 0.0 <= x <= 1.0:
                raise WeightRangeError(f"line {lineno}: weight {x} outside [0, 1]")
            w[count] = x
        src[count], dst[count] = u, v
        count += 1
    if count != m:
        raise GraphParseError(f"header declares {m} edges, found {count}")

    g = from_edges(n, src, dst, w)
    return g if weighted else auto_weight(g)


def load_raw_edge_list(reader, weighted: bool | None = False):
    """Read a header-less ``u v [w]`` list with arbitrary ids and remap them densely.

    Returns ``(graph, ids)`` where ``ids[i]`` is the original label of node ``i``
    (labels are numbered in order of first appearance).  ``weighted=None``
    uses the third column when every line has one and 1/in-degree otherwise.
    """
    label: dict[str, int] = {}
    src, dst, w = [], [], []
    for lineno, parts in _text_lines(reader):
        if len(parts) < 2:
            raise GraphParseError("expected 'u v [w]'", lineno)
        for tok in parts[:2]:
            if tok not in label:
                label[tok] = len(label)
        src.append(label[parts[0]])
        dst.append(label[parts[1]])
        if weighted is not False:
            try:
                w.append(float(parts[2]))
            except (IndexError, ValueError):
                if weighted:
                    raise GraphParseError("missing or bad edge weight", lineno) from None
                weighted = False
    if not label:
        raise GraphParseError("no edges")
    weighted = weighted is not False
    g = from_edges(len(label), src, dst, w if weighted else None)
    return (g if weighted else auto_weight(g)), list(label)


def write_edge_list(graph: Graph, writer) -> None:
    out = [f"{graph.n} {graph.m}\n"]
    out.extend(f"{u} {v} {x!r}\n" for u, v, x in graph.edges())
    text = "".join(out)
    writer.write(text.encode("utf-8") if not isinstance(writer, io.TextIOBase) else text)


# binary format ------------------------------------------------------------

def write_binary(graph: Graph, writer: BinaryIO) -> None:
    writer.write(BINARY_MAGIC)
    writer.write(struct.pack("<I", BINARY_VERSION))
    writer.write(struct.pack("<QQ", graph.n, graph.m))
    for indptr, idx, w in ((graph.rev_indptr, graph.rev_indices, graph.rev_weights),
                           (graph.fwd_indptr, graph.fwd_indices, graph.fwd_weights)):
        writer.write(indptr.astype("<u8").tobytes())
        writer.write(idx.astype("<u4").tobytes())
        writer.write(w.astype("<f8").tobytes())


def _read_exact(reader, size: int) -> bytes:
    buf = reader.read(size)
    if len(buf) != size:
        raise BinaryFormatError("truncated graph file")
    return buf


def read_binary(reader: BinaryIO) -> Graph:
    if _read_exact(reader, 4) != BINARY_MAGIC:
        raise BinaryFormatError("bad magic bytes")
    (version,) = struct.unpack("<I", _read_exact(reader, 4))
    if version != BINARY_VERSION:
        raise BinaryFormatError(f"unsupported format version {version}")
    n, m = struct.unpack("<QQ", _read_exact(reader, 16))
    if n < 1:
        raise BinaryFormatError("graph needs at least one node")
    arrays = []
    for _ in range(2):
        indptr = np.frombuffer(_read_exact(reader, 8 * (n + 1)), dtype="<u8").astype(np.int64)
        idx = np.frombuffer(_read_exact(reader, 4 * m), dtype="<u4").astype(np.int32)
        w = np.frombuffer(_read_exact(reader, 8 * m), dtype="<f8").astype(np.float64)
        if indptr[0] != 0 or indptr[-1] != m or np.any(np.diff(indptr) < 0):
            raise BinaryFormatError("corrupt offsets array")
        if m and (idx.max() >= n):
            raise BinaryFormatError("node id outside [0, n)")
        arrays.append((indptr, idx, w))
    if reader.read(1):
        raise BinaryFormatError("trailing bytes after graph data")
    (rev_ptr, rev_idx, rev_w), (fwd_ptr, fwd_idx, fwd_w) = arrays
    in_sum = np.zeros(n, dtype=np.float64)
    np.add.at(in_sum, np.repeat(np.arange(n), np.diff(rev_ptr)), rev_w)
    return Graph(int(n), fwd_ptr, fwd_idx, fwd_w, rev_ptr, rev_idx, rev_w, in_sum)


def to_bytes(graph: Graph) -> bytes:
    buf = io.BytesIO()
    write_binary(graph, buf)
    return buf.getvalue()


def from_bytes(data: bytes) -> Graph:
    return read_binary(io.BytesIO(data))


def load_graph(path, weighted: bool = True) -> Graph:
    """Load ``.bin`` files with :func:`read_binary`, anything else as a text edge list."""
    path = str(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
        fh.seek(0)
        if head == BINARY_MAGIC:
            return read_binary(fh)
        return load_edge_list(fh, weighted=weighted)
