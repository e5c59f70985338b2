"""G(n, p) generation on a packed bit adjacency matrix."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import bits, rng
from .errors import InvalidParameter
from .rng import Seed

_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
# rows of the threshold sampler generated per block, bounds peak memory
_BLOCK_ROWS = 256


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph stored as ``n`` packed adjacency rows.

    ``rows[v]`` is the neighbourhood of ``v`` as a bit-vector (see
    :mod:`majority_gnp.bits`).  Both triangles are stored.  Instances are
    read-only and may be shared between threads.
    """

    n: int
    rows: np.ndarray
    p: float | None = None
    seed: Seed | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("graph must have at least one vertex")
        rows = np.ascontiguousarray(self.rows, dtype=np.uint64)
        if rows.shape != (self.n, bits.n_words(self.n)):
            raise InvalidParameter(f"rows must have shape {(self.n, bits.n_words(self.n))}, got {rows.shape}")
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_adjacency(cls, adj, p=None, seed=None):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidParameter("adjacency matrix must be square")
        if (adj != adj.T).any() or adj.diagonal().any():
            raise InvalidParameter("adjacency matrix must be symmetric with an empty diagonal")
        return cls(adj.shape[0], bits.pack(adj), p, seed)

    @classmethod
    def from_edges(cls, n, edges):
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise InvalidParameter(f"self-loop at {u}")
            adj[u, v] = adj[v, u] = True
        return cls.from_adjacency(adj)

    @classmethod
    def complete(cls, n):
        adj = np.ones((n, n), dtype=bool)
        np.fill_diagonal(adj, False)
        return cls.from_adjacency(adj, p=1.0)

    @classmethod
    def empty(cls, n):
        return cls(n, np.zeros((n, bits.n_words(n)), dtype=np.uint64), p=0.0)

    @cached_property
    def degrees(self):
        d = bits.popcount(self.rows)
        d.flags.writeable = False
        return d

    @property
    def edge_count(self):
        return int(self.degrees.sum()) // 2

    def adjacency(self):
        """Dense boolean adjacency matrix (``n*n`` bytes)."""
        return bits.unpack(self.rows, self.n)

    def has_edge(self, u, v):
        self._check_vertex(u)
        self._check_vertex(v)
        u, v = int(u), int(v)
        return bool((int(self.rows[u, v // 64]) >> (v % 64)) & 1)

    def neighbors(self, v):
        self._check_vertex(v)
        return bits.indices(self.rows[v], self.n)

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def dump(self, fh):
        """Write the debug text format: header, then one hex line per row.

        Row encodings are big-endian bit strings, so vertex 0 is the most
        significant bit of the first hex digit.
        """
        master, stream = (self.seed.master, self.seed.stream) if self.seed else (0, 0)
        p = "nan" if self.p is None else repr(float(self.p))
        fh.write(f"{self.n} {p} {master} {stream}\n")
        adj = self.adjacency()
        for row in np.packbits(adj, axis=1, bitorder="big"):
            fh.write(row.tobytes().hex() + "\n")

    @classmethod
    def load(cls, fh):
        n, p, master, stream = fh.readline().split()
        n = int(n)
        lines = [fh.readline().strip() for _ in range(n)]
        by = np.array([np.frombuffer(bytes.fromhex(s), dtype=np.uint8) for s in lines])
        adj = np.unpackbits(by, axis=1, count=n, bitorder="big").astype(bool)
        p = None if p == "nan" else float(p)
        return cls.from_adjacency(adj, p=p, seed=Seed(int(master), int(stream)))


def _upper_mask(n):
    """Per-row word masks selecting columns ``j > i`` (strict upper triangle)."""
    w = bits.n_words(n)
    start = np.arange(1, n + 1, dtype=np.int64)
    ws, bs = start // 64, (start % 64).astype(np.uint64)
    partial = ~((np.uint64(1) << bs) - np.uint64(1))
    col = np.arange(w)[None, :]
    mask = np.where(col > ws[:, None], _ALL, np.where(col == ws[:, None], partial[:, None], np.uint64(0)))
    mask[:, -1] &= bits.tail_mask(n)
    return mask.astype(np.uint64)


# (shift, mask) stages of the recursive 64x64 bit-matrix transpose
_TRANSPOSE_STAGES = [
    (32, 0x00000000FFFFFFFF),
    (16, 0x0000FFFF0000FFFF),
    (8, 0x00FF00FF00FF00FF),
    (4, 0x0F0F0F0F0F0F0F0F),
    (2, 0x3333333333333333),
    (1, 0x5555555555555555),
]


def transpose_bits(m, n):
    """Transpose an ``n x n`` packed bit matrix.

    Every 64x64 block is transposed in place with the classic swap-halves
    recursion (all blocks at once), then the block grid itself is transposed.
    """
    w = m.shape[1]
    x = np.zeros((w * 64, w), dtype=np.uint64)
    x[:n] = m
    x = x.reshape(w, 64, w)
    for shift, mask in _TRANSPOSE_STAGES:
        v = x.reshape(w, 64 // (2 * shift), 2, shift, w)
        lo, hi = v[:, :, 0], v[:, :, 1]
        t = ((lo >> np.uint64(shift)) ^ hi) & np.uint64(mask)
        lo ^= t << np.uint64(shift)
        hi ^= t
    return np.ascontiguousarray(x.transpose(2, 1, 0)).reshape(w * 64, w)[:n]


def _mirror(upper, n):
    """Symmetrise a strictly upper-triangular packed matrix."""
    return upper | transpose_bits(upper, n)


def _threshold(p):
    # edge iff a uniform 64-bit word is below floor(p * 2**64); p * 2**64 is exact
    return int(p * 2.0**64)


def gen_gnp(n, p, seed):
    """Sample G(n, p) deterministically from ``seed``.

    For ``p == 0.5`` the upper triangle is filled directly with random words
    (row ``i`` uses stream words ``i*W .. i*W+W-1``).  Otherwise pair
    ``(i, j)``, ``i < j``, is an edge iff stream word ``i*n + j`` is below
    ``floor(p * 2**64)``.  Either way the graph depends only on ``(n, p, seed)``.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"p must lie in [0, 1], got {p}")
    if not isinstance(seed, Seed):
        seed = Seed(int(seed))
    n = int(n)
    w = bits.n_words(n)

    if p == 0.0:
        return Graph(n, np.zeros((n, w), dtype=np.uint64), p, seed)

    if p == 0.5:
        upper = rng.words(seed, 0, n * w).reshape(n, w) & _upper_mask(n)
    else:
        thr = _threshold(p)
        upper = np.empty((n, w), dtype=np.uint64)
        cols = np.arange(n)
        for i0 in range(0, n, _BLOCK_ROWS):
            i1 = min(n, i0 + _BLOCK_ROWS)
            if thr >= 1 << 64:
                flags = np.ones((i1 - i0, n), dtype=bool)
            else:
                u = rng.words(seed, i0 * n, (i1 - i0) * n).reshape(i1 - i0, n)
                flags = u < np.uint64(thr)
            flags &= cols[None, :] > np.arange(i0, i1)[:, None]
            upper[i0:i1] = bits.pack(flags)
    return Graph(n, _mirror(upper, n), p, seed)


def degree(g, v):
    g._check_vertex(v)
    return int(g.degrees[v])


def red_neighbor_count(g, coloring, v):
    """Number of Red neighbours of ``v``: popcount(row_v AND red)."""
    if coloring.n != g.n:
        raise InvalidParameter(f"coloring has {coloring.n} vertices, graph has {g.n}")
    g._check_vertex(v)
    return int(bits.popcount(g.rows[v] & coloring.red))


def red_neighbor_counts(g, red):
    """Red-neighbour counts for every vertex at once."""
    return bits.popcount(g.rows & red)
