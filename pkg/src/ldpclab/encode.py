"""Systematic encoding over GF(2).

Two routes produce codewords: a generator matrix found by Gaussian
elimination (works for any H), and forward substitution through the
accumulator chain of an IRA parity part (no generator needed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DegenerateCodeError, DimensionError, StructureError
from .pcm import SparseBinaryMatrix


@dataclass(frozen=True)
class GeneratorMatrix:
    """Dense k x n generator with an identity on ``info_positions``.

    ``pivot_positions`` are the columns solved for during elimination; the
    message appears verbatim at ``info_positions`` of every codeword.
    """

    G: np.ndarray
    info_positions: np.ndarray
    pivot_positions: np.ndarray

    @property
    def k(self):
        return self.G.shape[0]

    @property
    def n(self):
        return self.G.shape[1]

    @property
    def rank(self):
        return self.pivot_positions.size


def gf2_rref(a):
    """Reduced row echelon form over GF(2), pivoting on the leftmost column.

    Returns (R, pivots) where R holds only the nonzero rows.
    """
    R = np.array(a, dtype=bool, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        mask = R[:, c].copy()
        mask[r] = False
        R[mask] ^= R[r]
        pivots.append(c)
        r += 1
    return R[:r], np.array(pivots, dtype=np.int64)


def gf2_rank(a):
    return gf2_rref(a)[1].size


def derive_generator(H: SparseBinaryMatrix) -> GeneratorMatrix:
    """Systematic generator for the null space of H.

    Rank-deficient H is fine; k is n - rank(H).
    """
    R, pivots = gf2_rref(H.to_dense(bool))
    n = H.n
    free = np.setdiff1d(np.arange(n), pivots)
    if free.size == 0:
        raise DegenerateCodeError("H has full column rank; the code is {0}")
    G = np.zeros((free.size, n), dtype=np.uint8)
    G[:, free] = np.eye(free.size, dtype=np.uint8)
    # pivot bit t equals the parity of the free bits in row t of R
    G[:, pivots] = R[:, free].T
    G.setflags(write=False)
    return GeneratorMatrix(G=G, info_positions=free, pivot_positions=pivots)


def _gf2_matmul(a, b):
    # float32 is exact while the inner dimension stays below 2**24
    return (np.asarray(a, np.float32) @ np.asarray(b, np.float32)).astype(np.int64) & 1


def encode_systematic(G: GeneratorMatrix, message):
    """Codeword(s) ``message @ G`` for one message or a (frames, k) batch."""
    msg = np.asarray(message)
    if msg.shape[-1] != G.k:
        raise DimensionError(f"message length {msg.shape[-1]} != k = {G.k}")
    return _gf2_matmul(msg & 1, G.G).astype(np.uint8)


@dataclass(frozen=True)
class IraStructure:
    """Accumulator layout found in the parity part of an IRA matrix.

    Row ``i`` of H contains parity column ``parity_positions[i]`` and, when
    ``linked[i]``, also ``parity_positions[i - step]``.
    """

    info_positions: np.ndarray
    parity_positions: np.ndarray
    step: int
    linked: np.ndarray
    # systematic neighbours of each row, CSR style
    sys_ptr: np.ndarray = field(repr=False, default=None)
    sys_cols: np.ndarray = field(repr=False, default=None)


def ira_structure(H: SparseBinaryMatrix, parity_positions=None) -> IraStructure:
    """Validate and describe a dual-diagonal (staircase) parity part.

    By default the parity part is the last m columns. The classic template has
    ``step == 1``; a lifted protograph chain with identity blocks has
    ``step == s``.
    """
    m, n = H.shape
    if parity_positions is None:
        parity_positions = np.arange(n - m, n)
    parity_positions = np.asarray(parity_positions, dtype=np.int64)
    if parity_positions.size != m:
        raise StructureError(f"need {m} parity columns, got {parity_positions.size}")
    index = -np.ones(n, dtype=np.int64)
    index[parity_positions] = np.arange(m)
    info = np.flatnonzero(index < 0)
    step = 0
    linked = np.zeros(m, dtype=bool)
    for i, adj in enumerate(H.row_adj):
        par = np.sort(index[adj][index[adj] >= 0])
        if par.size == 0 or par[-1] != i:
            raise StructureError(f"row {i} lacks its diagonal parity entry")
        if par.size == 1:
            continue
        if par.size > 2:
            raise StructureError(f"row {i} has {par.size} parity entries; expected at most 2")
        d = i - int(par[0])
        if step == 0:
            step = d
        elif d != step:
            raise StructureError(f"row {i} links parity offset {d}, expected {step}")
        linked[i] = True
    sys_lists = [adj[index[adj] < 0] for adj in H.row_adj]
    sys_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum([a.size for a in sys_lists], out=sys_ptr[1:])
    sys_cols = np.concatenate(sys_lists).astype(np.int64) if m else np.zeros(0, np.int64)
    return IraStructure(info_positions=info, parity_positions=parity_positions,
                        step=max(step, 1), linked=linked, sys_ptr=sys_ptr, sys_cols=sys_cols)


@numba.njit(cache=True)
def _accumulate(c, sys_ptr, sys_cols, linked, step, parity_positions):
    m = sys_ptr.size - 1
    acc = np.zeros(m, np.uint8)
    for f in range(c.shape[0]):
        for i in range(m):
            p = 0
            for k in range(sys_ptr[i], sys_ptr[i + 1]):
                p ^= c[f, sys_cols[k]]
            if linked[i]:
                p ^= acc[i - step]
            acc[i] = p
        for i in range(m):
            c[f, parity_positions[i]] = acc[i]


def encode_ira(H: SparseBinaryMatrix, message, parity_positions=None, structure=None):
    """Encode by forward substitution through the accumulator chain.

    p[i] = (parity of the systematic neighbours of check i) XOR p[i - step]
    whenever row i carries the chain link. Accepts a single message or a
    (frames, k) batch.
    """
    st = structure if structure is not None else ira_structure(H, parity_positions)
    msg = np.asarray(message)
    k = st.info_positions.size
    if msg.shape[-1] != k:
        raise DimensionError(f"message length {msg.shape[-1]} != k = {k}")
    batch = msg.reshape(-1, k) & 1
    c = np.zeros((batch.shape[0], H.n), dtype=np.uint8)
    c[:, st.info_positions] = batch
    _accumulate(c, st.sys_ptr, st.sys_cols, st.linked, st.step, st.parity_positions)
    return c.reshape(msg.shape[:-1] + (H.n,))
