"""Code construction: progressive edge growth, IRA templates and root-check codes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, StructureError
from .pcm import BaseMatrix, SparseBinaryMatrix, expand_base


# -- progressive edge growth --------------------------------------------------

def _peg_fill(m, n, degrees, rng, row_adj=None, col_adj=None):
    """Grow edges column by column; returns (row_adj, col_adj) as lists of sets."""
    row_adj = [set() for _ in range(m)] if row_adj is None else row_adj
    col_adj = [set() for _ in range(n)] if col_adj is None else col_adj
    check_deg = np.array([len(r) for r in row_adj], dtype=np.int64)
    for j in range(n):
        for _ in range(int(degrees[j])):
            candidates = _deepest_checks(j, m, row_adj, col_adj)
            candidates = candidates[check_deg[candidates] == check_deg[candidates].min()]
            i = int(candidates[rng.integers(candidates.size)]) if candidates.size > 1 else int(candidates[0])
            row_adj[i].add(j)
            col_adj[j].add(i)
            check_deg[i] += 1
    return row_adj, col_adj


def _deepest_checks(j, m, row_adj, col_adj):
    """Checks whose connection to variable ``j`` closes the longest cycle.

    Unreachable checks are preferred (no cycle at all); otherwise the checks
    first reached at the deepest level of the breadth-first tree rooted at j.
    """
    reached = np.zeros(m, dtype=bool)
    frontier = list(col_adj[j])
    reached[frontier] = True
    seen_vars = {j}
    last_level = np.array(sorted(frontier), dtype=np.int64)
    while True:
        next_vars = set()
        for i in frontier:
            next_vars.update(row_adj[i])
        next_vars -= seen_vars
        seen_vars |= next_vars
        new_checks = set()
        for v in next_vars:
            new_checks.update(col_adj[v])
        new_checks = [i for i in new_checks if not reached[i]]
        if not new_checks:
            unreached = np.flatnonzero(~reached)
            # no growth: anything unreached avoids creating a cycle
            return unreached if unreached.size else last_level
        reached[new_checks] = True
        if reached.all():
            return np.array(sorted(new_checks), dtype=np.int64)
        last_level = np.array(sorted(new_checks), dtype=np.int64)
        frontier = new_checks


def peg_construct(m, n, degrees, seed=0) -> SparseBinaryMatrix:
    """Progressive edge growth over an m x n Tanner graph.

    Args:
        m: number of checks.
        n: number of variables.
        degrees: target degree of each variable node, placed in index order.
        seed: seeds the tie-break among equally deep, equally loaded checks.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    _validate_degrees(m, n, degrees)
    rng = np.random.default_rng(seed)
    row_adj, _ = _peg_fill(m, n, degrees, rng)
    return SparseBinaryMatrix(m, n, [sorted(r) for r in row_adj])


def _validate_degrees(m, n, degrees):
    if m < 1 or n < 1:
        raise ParameterError("m and n must be positive")
    if degrees.shape != (n,):
        raise ParameterError(f"need {n} degrees, got {degrees.size}")
    if np.any(degrees < 0):
        raise ParameterError("degrees must be non-negative")
    if np.any(degrees > m):
        raise ParameterError(f"a variable degree exceeds the {m} available checks")


def build_ira_template(m, n) -> SparseBinaryMatrix:
    """Dual-diagonal parity part in the last m columns; systematic part empty."""
    if not 0 < m < n:
        raise ParameterError(f"need 0 < m < n, got m={m}, n={n}")
    k = n - m
    rows = [[k + i] if i == 0 else [k + i - 1, k + i] for i in range(m)]
    return SparseBinaryMatrix(m, n, rows)


def peg_ira(m, n, info_degrees, seed=0) -> SparseBinaryMatrix:
    """IRA code: dual-diagonal parity part plus a PEG-grown systematic part."""
    template = build_ira_template(m, n)
    k = n - m
    info_degrees = np.asarray(info_degrees, dtype=np.int64)
    if info_degrees.shape != (k,):
        raise ParameterError(f"need {k} systematic degrees")
    degrees = np.concatenate([info_degrees, np.zeros(m, np.int64)])
    _validate_degrees(m, n, degrees)
    row_adj = [set(r.tolist()) for r in template.row_adj]
    col_adj = [set(c.tolist()) for c in template.col_adj]
    row_adj, _ = _peg_fill(m, n, degrees, np.random.default_rng(seed), row_adj, col_adj)
    return SparseBinaryMatrix(m, n, [sorted(r) for r in row_adj])


# -- root-check codes ---------------------------------------------------------

@dataclass(frozen=True)
class RootCheckTemplate:
    """Fading-block layout of a root-check code.

    Attributes:
        fadings: number of fading blocks F.
        rate: design rate, at most 1/F.
        block_of: fading block of every variable node (contiguous, equal sizes).
        info_positions: columns carrying information bits, in message order.
        root_block: for each check, the fading block whose information bits it
            roots, or -1 for an ordinary check.
    """

    fadings: int
    rate: float
    block_of: np.ndarray
    info_positions: np.ndarray
    root_block: np.ndarray = field(repr=False)

    @property
    def parity_positions(self):
        mask = np.ones(self.block_of.size, dtype=bool)
        mask[self.info_positions] = False
        return np.flatnonzero(mask)


def contiguous_blocks(n, fadings):
    if fadings < 1 or n % fadings:
        raise ParameterError(f"length {n} does not split into {fadings} equal blocks")
    return np.repeat(np.arange(fadings), n // fadings)


def root_check_violations(H: SparseBinaryMatrix, block_of, info_positions):
    """Information columns lacking a check whose other neighbours avoid their block.

    An empty result means every information bit can be recovered when its own
    fading block is erased and the rest of the word is known.
    """
    block_of = np.asarray(block_of)
    bad = []
    for v in np.asarray(info_positions):
        f = block_of[v]
        ok = False
        for i in H.col_adj[v]:
            others = H.row_adj[i][H.row_adj[i] != v]
            if not np.any(block_of[others] == f):
                ok = True
                break
        if not ok:
            bad.append(int(v))
    return bad


def _closed_walks(edges, row_edges, col_edges, e0, max_len):
    """Closed non-backtracking protograph walks starting with edge ``e0``.

    Edges are (row, col, shift) with the shift of ``e0`` treated as unknown x.
    Each walk contributes (length, coef, const): its lifted shift sum is
    coef * x + const, and the walk lifts to a closed walk iff that is 0 mod s.
    """
    r0, c0, _ = edges[e0]
    out = []
    # (at_var, node, last_edge, length, coef, const)
    stack = [(True, c0, e0, 1, 1, 0)]
    while stack:
        at_var, node, last, length, coef, const = stack.pop()
        if length >= max_len:
            continue
        nbrs = col_edges[node] if at_var else row_edges[node]
        for e in nbrs:
            if e == last:
                continue
            r, c, sh = edges[e]
            if at_var:
                # var -> check traverses the edge backwards
                nc, nk = (coef - 1, const) if e == e0 else (coef, const - sh)
                if r == r0 and e != e0 and length + 1 >= 4:
                    out.append((length + 1, nc, nk))
                stack.append((False, r, e, length + 1, nc, nk))
            else:
                nc, nk = (coef + 1, const) if e == e0 else (coef, const + sh)
                stack.append((True, c, e, length + 1, nc, nk))
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    return np.array(out, dtype=np.int64)


class _Protograph:
    def __init__(self, mb, nb, s):
        self.mb, self.nb, self.s = mb, nb, s
        self.entries = -np.ones((mb, nb), dtype=np.int64)

    def _graph(self, extra=None):
        edges = [(r, c, int(self.entries[r, c])) for r, c in zip(*np.nonzero(self.entries >= 0))]
        if extra is not None:
            edges.append((extra[0], extra[1], 0))
        row_edges = [[] for _ in range(self.mb)]
        col_edges = [[] for _ in range(self.nb)]
        for k, (r, c, _) in enumerate(edges):
            row_edges[r].append(k)
            col_edges[c].append(k)
        return edges, row_edges, col_edges

    def local_girth(self, r, c, max_len):
        """Shortest lifted cycle through a new (r, c) entry, for every shift."""
        edges, row_edges, col_edges = self._graph(extra=(r, c))
        walks = _closed_walks(edges, row_edges, col_edges, len(edges) - 1, max_len)
        x = np.arange(self.s)
        best = np.full(self.s, max_len + 2, dtype=np.int64)
        for length in sorted(set(walks[:, 0].tolist())):
            w = walks[walks[:, 0] == length]
            hit = ((w[:, 1][None, :] * x[:, None] + w[:, 2][None, :]) % self.s == 0).any(axis=1)
            best = np.where(hit & (best > length), length, best)
        return best

    def place(self, r, c, shift):
        self.entries[r, c] = shift

    def row_degree(self, r):
        return int(np.sum(self.entries[r] >= 0))


def build_qc_ira_root_check(nb=16, mb=8, s=42, fadings=2, seed=0, info_degree=3, max_len=10):
    """QC-IRA root-check base matrix for a block-fading channel with two blocks.

    Base columns are laid out as ``[i1 | p1 | i2 | p2]`` (quarters), so the
    first half of the codeword is fading block 1 and each block holds half of
    the information bits. The first mb/2 base rows root the i2 bits: each holds
    one i2 column, a dual-diagonal chain over p1 and extra i1 entries. The
    remaining rows mirror this for i1 with a chain over p2. Chain entries use
    shift 0; every other shift and the placement of the extra information
    entries are chosen greedily to maximise the lifted local girth.

    Returns:
        (BaseMatrix, RootCheckTemplate)
    """
    if fadings != 2:
        raise ParameterError("only F = 2 root-check codes are constructed")
    rate = 1 - mb / nb
    if rate > 1 / fadings + 1e-12:
        raise ParameterError(f"full diversity requires R <= 1/F (got R = {rate:g}, F = {fadings})")
    if abs(rate - 1 / fadings) > 1e-12:
        raise ParameterError(f"root-check construction needs R = 1/F exactly (got {rate:g})")
    if nb % 4:
        raise ParameterError("nb must be divisible by 4")
    if info_degree < 1 or info_degree - 1 > mb // 2:
        raise ParameterError(f"info_degree must be in [1, {mb // 2 + 1}]")
    q = nb // 4
    half = mb // 2
    rng = np.random.default_rng(seed)
    proto = _Protograph(mb, nb, s)

    i1, p1, i2, p2 = (np.arange(q) + k * q for k in range(4))
    rows_root_i2 = np.arange(half)
    rows_root_i1 = np.arange(half, mb)

    # accumulator chains
    for t in range(half):
        proto.place(rows_root_i2[t], p1[t], 0)
        proto.place(rows_root_i1[t], p2[t], 0)
        if t:
            proto.place(rows_root_i2[t], p1[t - 1], 0)
            proto.place(rows_root_i1[t], p2[t - 1], 0)

    def choose_shift(r, c):
        lg = proto.local_girth(r, c, max_len)
        best = np.flatnonzero(lg == lg.max())
        return int(best[rng.integers(best.size)]), int(lg.max())

    def choose_row(c, rows):
        scored = []
        for r in rows:
            if proto.entries[r, c] >= 0:
                continue
            lg = proto.local_girth(r, c, max_len)
            scored.append((int(lg.max()), -proto.row_degree(r), r, lg))
        top = max(x[:2] for x in scored)
        pool = [x for x in scored if x[:2] == top]
        _, _, r, lg = pool[rng.integers(len(pool))]
        best = np.flatnonzero(lg == lg.max())
        return r, int(best[rng.integers(best.size)])

    # information columns, block 1 then block 2: root entry, then extra entries
    for cols, root_rows, extra_rows in ((i1, rows_root_i1, rows_root_i2), (i2, rows_root_i2, rows_root_i1)):
        for t, c in enumerate(cols):
            shift, _ = choose_shift(root_rows[t], c)
            proto.place(root_rows[t], c, shift)
            for _ in range(info_degree - 1):
                r, shift = choose_row(c, extra_rows)
                proto.place(r, c, shift)

    base = BaseMatrix(mb, nb, s, tuple(map(tuple, proto.entries.tolist())))
    template = root_check_template(base, fadings)
    return base, template


def root_check_template(base: BaseMatrix, fadings=2) -> RootCheckTemplate:
    """Layout of a base matrix produced by ``build_qc_ira_root_check``."""
    s, nb, mb = base.s, base.nb, base.mb
    q = nb // 4
    n = nb * s
    info_base = np.concatenate([np.arange(q), np.arange(2 * q, 3 * q)])
    info = (info_base[:, None] * s + np.arange(s)[None, :]).ravel()
    root_block = np.concatenate([np.full(mb // 2 * s, 1), np.full(mb // 2 * s, 0)])
    return RootCheckTemplate(
        fadings=fadings,
        rate=1 - mb / nb,
        block_of=contiguous_blocks(n, fadings),
        info_positions=info,
        root_block=root_block,
    )


def ira_parity_columns(base: BaseMatrix):
    """Parity columns (p1 then p2) of a root-check base matrix, lifted."""
    s, q = base.s, base.nb // 4
    par = np.concatenate([np.arange(q, 2 * q), np.arange(3 * q, 4 * q)])
    return (par[:, None] * s + np.arange(s)[None, :]).ravel()


def expand_root_check(base: BaseMatrix):
    """Lifted H together with its template; checks the root property."""
    H = expand_base(base)
    template = root_check_template(base)
    bad = root_check_violations(H, template.block_of, template.info_positions)
    if bad:
        raise StructureError(f"{len(bad)} information bits lack a root check")
    return H, template
