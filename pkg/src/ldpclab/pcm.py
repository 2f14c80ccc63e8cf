"""Sparse binary parity-check matrices, Tanner graphs and their file formats.

Check nodes are rows of H and variable nodes are columns. Edges of the Tanner
graph are numbered row-major: all edges of check 0 in ascending column order,
then check 1, and so on. Every decoder kernel relies on that numbering.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numba
import numpy as np

from .errors import DimensionError, FormatError, ParameterError

ACYCLIC = "acyclic"


class SparseBinaryMatrix:
    """Binary matrix stored as row and column adjacency lists.

    Instances are immutable; all derived views are cached on first use.
    """

    __slots__ = ("m", "n", "row_adj", "col_adj", "__dict__")

    def __init__(self, m, n, row_adj):
        m, n = int(m), int(n)
        if m < 0 or n < 0:
            raise DimensionError(f"negative shape {m}x{n}")
        if len(row_adj) != m:
            raise DimensionError(f"expected {m} rows, got {len(row_adj)}")
        rows = []
        cols = [[] for _ in range(n)]
        for i, adj in enumerate(row_adj):
            arr = np.asarray(sorted(int(j) for j in adj), dtype=np.int64)
            if arr.size and (arr[0] < 0 or arr[-1] >= n):
                raise DimensionError(f"row {i} has a column index outside [0, {n})")
            if arr.size > 1 and np.any(np.diff(arr) == 0):
                raise DimensionError(f"row {i} repeats a column index")
            arr.setflags(write=False)
            rows.append(arr)
            for j in arr:
                cols[j].append(i)
        col_arrs = []
        for adj in cols:
            arr = np.asarray(adj, dtype=np.int64)
            arr.setflags(write=False)
            col_arrs.append(arr)
        self.m = m
        self.n = n
        self.row_adj = tuple(rows)
        self.col_adj = tuple(col_arrs)

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a)
        if a.ndim != 2:
            raise DimensionError("dense matrix must be 2-D")
        if np.any((a != 0) & (a != 1)):
            raise DimensionError("dense matrix must be binary")
        return cls(a.shape[0], a.shape[1], [np.flatnonzero(r) for r in a])

    @classmethod
    def from_edges(cls, m, n, checks, variables):
        row_adj = [[] for _ in range(m)]
        for i, j in zip(checks, variables):
            row_adj[int(i)].append(int(j))
        return cls(m, n, row_adj)

    def to_dense(self, dtype=np.uint8):
        a = np.zeros((self.m, self.n), dtype=dtype)
        for i, adj in enumerate(self.row_adj):
            a[i, adj] = 1
        return a

    @property
    def shape(self):
        return (self.m, self.n)

    @cached_property
    def num_edges(self):
        return int(sum(len(r) for r in self.row_adj))

    @cached_property
    def row_degrees(self):
        return np.array([len(r) for r in self.row_adj], dtype=np.int64)

    @cached_property
    def col_degrees(self):
        return np.array([len(c) for c in self.col_adj], dtype=np.int64)

    @cached_property
    def graph(self):
        return TannerGraph(self)

    def fingerprint(self):
        """Short SHA-256 digest of the edge set, stable across platforms."""
        h = hashlib.sha256(f"{self.m} {self.n}\n".encode())
        for adj in self.row_adj:
            h.update(adj.astype("<i8").tobytes())
            h.update(b"|")
        return h.hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and all(np.array_equal(a, b) for a, b in zip(self.row_adj, other.row_adj))
        )

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"SparseBinaryMatrix(m={self.m}, n={self.n}, edges={self.num_edges})"

    def check_consistency(self):
        """Raise DimensionError unless row and column lists describe one edge set."""
        from_rows = {(i, int(j)) for i, adj in enumerate(self.row_adj) for j in adj}
        from_cols = {(int(i), j) for j, adj in enumerate(self.col_adj) for i in adj}
        if from_rows != from_cols:
            raise DimensionError("row and column adjacency disagree")


class TannerGraph:
    """Flat edge indexing over a SparseBinaryMatrix.

    Attributes:
        edge_check, edge_var: endpoints of edge ``e``.
        check_ptr: edges of check ``i`` are ``check_ptr[i]:check_ptr[i+1]``.
        var_ptr, var_edges: edge ids of variable ``j`` are
            ``var_edges[var_ptr[j]:var_ptr[j+1]]``, ascending by check.
    """

    def __init__(self, H: SparseBinaryMatrix):
        self.m, self.n = H.m, H.n
        deg = H.row_degrees
        self.check_ptr = np.zeros(H.m + 1, dtype=np.int64)
        np.cumsum(deg, out=self.check_ptr[1:])
        self.edge_check = np.repeat(np.arange(H.m, dtype=np.int64), deg)
        self.edge_var = (
            np.concatenate(H.row_adj).astype(np.int64) if H.m else np.zeros(0, np.int64)
        )
        order = np.lexsort((self.edge_check, self.edge_var))
        self.var_edges = order.astype(np.int64)
        self.var_ptr = np.zeros(H.n + 1, dtype=np.int64)
        np.cumsum(H.col_degrees, out=self.var_ptr[1:])
        for a in (self.check_ptr, self.edge_check, self.edge_var, self.var_edges, self.var_ptr):
            a.setflags(write=False)

    @property
    def num_edges(self):
        return int(self.edge_var.size)

    def edge_id(self, i, j):
        lo, hi = self.check_ptr[i], self.check_ptr[i + 1]
        k = lo + np.searchsorted(self.edge_var[lo:hi], j)
        if k >= hi or self.edge_var[k] != j:
            raise KeyError((i, j))
        return int(k)

    def check_edges(self, i):
        return np.arange(self.check_ptr[i], self.check_ptr[i + 1])

    def var_edge_ids(self, j):
        return self.var_edges[self.var_ptr[j]:self.var_ptr[j + 1]]


@dataclass(frozen=True)
class BaseMatrix:
    """Protograph of circulant shift exponents; -1 marks an all-zero block."""

    mb: int
    nb: int
    s: int
    entries: tuple

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64).reshape(self.mb, self.nb)
        if self.s < 1:
            raise FormatError(f"lift size must be positive, got {self.s}")
        bad = (e < -1) | (e >= self.s)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise FormatError(f"entry ({i},{j}) = {e[i, j]} outside {{-1}} U [0, {self.s - 1}]")
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in r) for r in e))

    @property
    def array(self):
        return np.array(self.entries, dtype=np.int64).reshape(self.mb, self.nb)

    @property
    def shape(self):
        return (self.mb * self.s, self.nb * self.s)


def syndrome(H: SparseBinaryMatrix, c):
    """Parity of each check over the bits in ``c``.

    ``c`` may be one word of length n or a batch of shape (frames, n).
    """
    c = np.asarray(c)
    if c.shape[-1] != H.n:
        raise DimensionError(f"word length {c.shape[-1]} != n = {H.n}")
    g = H.graph
    bits = (c.astype(np.uint8) & 1)[..., g.edge_var]
    if H.num_edges == 0:
        return np.zeros(c.shape[:-1] + (H.m,), dtype=np.uint8)
    starts = np.minimum(g.check_ptr[:-1], H.num_edges - 1)
    out = np.bitwise_xor.reduceat(bits, starts, axis=-1)
    # reduceat yields a stray element for empty rows
    empty = H.row_degrees == 0
    if empty.any():
        out[..., empty] = 0
    return out.astype(np.uint8)


def expand_base(b: BaseMatrix) -> SparseBinaryMatrix:
    """Lift a base matrix: entry e becomes the identity right-shifted by e."""
    s = b.s
    e = b.array
    row_adj = []
    for bi in range(b.mb):
        cols = np.flatnonzero(e[bi] >= 0)
        for t in range(s):
            row_adj.append(cols * s + (t + e[bi, cols]) % s)
    return SparseBinaryMatrix(b.mb * s, b.nb * s, row_adj)


def _unified_csr(H):
    """Adjacency of the Tanner graph with checks 0..m-1 and variables m..m+n-1."""
    g = H.graph
    nodes = H.m + H.n
    nbr_ptr = np.zeros(nodes + 1, dtype=np.int64)
    nbr_ptr[1:H.m + 1] = np.cumsum(H.row_degrees)
    nbr_ptr[H.m + 1:] = nbr_ptr[H.m] + np.cumsum(H.col_degrees)
    nbr = np.empty(2 * H.num_edges, dtype=np.int64)
    nbr[:H.num_edges] = g.edge_var + H.m
    nbr[H.num_edges:] = g.edge_check[g.var_edges]
    return nbr_ptr, nbr


@numba.njit(cache=True)
def _girth_kernel(nbr_ptr, nbr):
    nodes = nbr_ptr.size - 1
    best = np.iinfo(np.int64).max
    dist = np.full(nodes, -1, np.int64)
    parent = np.full(nodes, -1, np.int64)
    queue = np.empty(nodes, np.int64)
    for root in range(nodes):
        dist[:] = -1
        dist[root] = 0
        parent[root] = -1
        head, tail = 0, 1
        queue[0] = root
        while head < tail:
            u = queue[head]
            head += 1
            if 2 * dist[u] >= best:
                break
            skipped_parent = False
            for k in range(nbr_ptr[u], nbr_ptr[u + 1]):
                v = nbr[k]
                if v == parent[u] and not skipped_parent:
                    skipped_parent = True
                    continue
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue[tail] = v
                    tail += 1
                else:
                    c = dist[u] + dist[v] + 1
                    if c < best:
                        best = c
    return best


def girth(H: SparseBinaryMatrix):
    """Length of the shortest Tanner-graph cycle, or ``ACYCLIC``."""
    if H.num_edges == 0:
        return ACYCLIC
    nbr_ptr, nbr = _unified_csr(H)
    g = _girth_kernel(nbr_ptr, nbr)
    if g == np.iinfo(np.int64).max:
        return ACYCLIC
    return int(g)


@numba.njit(cache=True)
def _cycle_kernel(nbr_ptr, nbr, max_len, counts):
    nodes = nbr_ptr.size - 1
    path = np.empty(max_len, np.int64)
    pos = np.empty(max_len, np.int64)
    on_path = np.zeros(nodes, np.bool_)
    for start in range(nodes):
        path[0] = start
        pos[0] = nbr_ptr[start]
        on_path[start] = True
        depth = 0
        while depth >= 0:
            u = path[depth]
            if pos[depth] >= nbr_ptr[u + 1]:
                on_path[u] = False
                depth -= 1
                continue
            v = nbr[pos[depth]]
            pos[depth] += 1
            if v == start:
                # closed walk of depth+1 edges; count each cycle in one direction only
                if depth + 1 >= 4 and path[1] < path[depth]:
                    for t in range(depth + 1):
                        counts[path[t]] += 1
                continue
            if v < start or on_path[v] or depth + 1 >= max_len:
                continue
            depth += 1
            path[depth] = v
            pos[depth] = nbr_ptr[v]
            on_path[v] = True
        on_path[start] = False


def count_short_cycles(H: SparseBinaryMatrix, max_len: int):
    """Per-node counts of distinct cycles of length <= ``max_len``.

    Returns ``(check_counts, var_counts)``. Supported lengths are 4, 6 and 8.
    """
    if max_len not in (4, 6, 8):
        raise ParameterError(f"max_len must be 4, 6 or 8, got {max_len}")
    counts = np.zeros(H.m + H.n, dtype=np.int64)
    if H.num_edges:
        nbr_ptr, nbr = _unified_csr(H)
        _cycle_kernel(nbr_ptr, nbr, max_len, counts)
    return counts[:H.m], counts[H.m:]


# -- alist -------------------------------------------------------------------

def _int_fields(line, lineno):
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise FormatError(f"non-integer token in {line!r}", lineno) from None


def load_alist(text: str) -> SparseBinaryMatrix:
    """Parse MacKay alist text (1-indexed, zero padded)."""
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    it = iter(lines)

    def take(expected=None):
        try:
            lineno, ln = next(it)
        except StopIteration:
            raise FormatError("unexpected end of input") from None
        vals = _int_fields(ln, lineno)
        if expected is not None and len(vals) != expected:
            raise FormatError(f"expected {expected} integers, got {len(vals)}", lineno)
        return lineno, vals

    lineno, (n, m) = take(2)
    if n < 0 or m < 0:
        raise FormatError("negative dimensions", lineno)
    _, (max_col, max_row) = take(2)
    lineno_cd, col_deg = take(n)
    lineno_rd, row_deg = take(m)
    if col_deg and max(col_deg) > max_col:
        raise FormatError("column degree exceeds declared maximum", lineno_cd)
    if row_deg and max(row_deg) > max_row:
        raise FormatError("row degree exceeds declared maximum", lineno_rd)

    def adjacency(count, degrees, bound, label):
        out = []
        for idx in range(count):
            lineno, vals = take()
            nz = [v for v in vals if v != 0]
            if len(nz) != degrees[idx]:
                raise FormatError(
                    f"{label} {idx + 1} lists {len(nz)} entries, degree says {degrees[idx]}", lineno
                )
            if any(v < 0 or v > bound for v in nz):
                raise FormatError(f"{label} {idx + 1} has an index outside [1, {bound}]", lineno)
            if len(set(nz)) != len(nz):
                raise FormatError(f"{label} {idx + 1} repeats an index", lineno)
            out.append((lineno, [v - 1 for v in nz]))
        return out

    cols = adjacency(n, col_deg, m, "column")
    rows = adjacency(m, row_deg, n, "row")
    H = SparseBinaryMatrix(m, n, [r for _, r in rows])
    for j, (lineno, adj) in enumerate(cols):
        if sorted(adj) != H.col_adj[j].tolist():
            raise FormatError(f"column {j + 1} disagrees with the row lists", lineno)
    return H


def save_alist(H: SparseBinaryMatrix) -> str:
    max_col = int(H.col_degrees.max(initial=0))
    max_row = int(H.row_degrees.max(initial=0))

    def padded(adj, width):
        # an all-zero list still needs a placeholder so the line is not blank
        width = max(width, 1)
        vals = [int(v) + 1 for v in adj] + [0] * (width - len(adj))
        return " ".join(map(str, vals))

    out = [
        f"{H.n} {H.m}",
        f"{max_col} {max_row}",
        " ".join(map(str, H.col_degrees)),
        " ".join(map(str, H.row_degrees)),
    ]
    out += [padded(adj, max_col) for adj in H.col_adj]
    out += [padded(adj, max_row) for adj in H.row_adj]
    return "\n".join(out) + "\n"


# -- base matrix -------------------------------------------------------------

def load_base_matrix(text: str) -> BaseMatrix:
    """Parse ``mb nb s`` followed by mb rows of nb shift values.

    Blank lines and lines starting with ``#`` are ignored.
    """
    lines = [
        (k + 1, ln) for k, ln in enumerate(text.splitlines())
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty base-matrix text")
    lineno, header = lines[0]
    hdr = _int_fields(header, lineno)
    if len(hdr) != 3:
        raise FormatError("header must be 'mb nb s'", lineno)
    mb, nb, s = hdr
    if mb < 1 or nb < 1 or s < 1:
        raise FormatError("mb, nb and s must be positive", lineno)
    body = lines[1:]
    if len(body) != mb:
        raise FormatError(f"expected {mb} rows, found {len(body)}", body[-1][0] if body else lineno)
    entries = []
    for lineno, ln in body:
        row = _int_fields(ln, lineno)
        if len(row) != nb:
            raise FormatError(f"expected {nb} entries, got {len(row)}", lineno)
        for v in row:
            if v < -1 or v >= s:
                raise FormatError(f"entry {v} outside {{-1}} U [0, {s - 1}]", lineno)
        entries.append(row)
    return BaseMatrix(mb, nb, s, tuple(map(tuple, entries)))


def save_base_matrix(b: BaseMatrix) -> str:
    width = max(2, len(str(b.s - 1)))
    out = [f"{b.mb} {b.nb} {b.s}"]
    out += [" ".join(f"{v:>{width}d}" for v in row) for row in b.entries]
    return "\n".join(out) + "\n"
