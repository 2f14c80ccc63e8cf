"""
Two ways to encode
==================

Any code can be encoded with a generator matrix found by Gaussian
elimination. An IRA code needs no generator: with a dual-diagonal parity
part each parity bit is the XOR of its check's systematic bits and the
previous parity bit.
"""

import time

import numpy as np

from ldpclab.codes import load_code
from ldpclab.encode import derive_generator, encode_ira, encode_systematic
from ldpclab.pcm import SparseBinaryMatrix, syndrome

# the smallest example: H = [I2 | [[1,0],[1,1]]]
H = SparseBinaryMatrix.from_dense([[1, 0, 1, 0], [0, 1, 1, 1]])
print("encode_ira([1, 0]) =", encode_ira(H, [1, 0]))

# generator route on a 3-bit repetition code
G = derive_generator(SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]]))
print("G =", G.G, " k =", G.k)

# both routes on the shipped root-check code
code = load_code("rootcheck-r12")
msgs = np.random.default_rng(1).integers(0, 2, (10_000, code.k))
t = time.perf_counter()
cw = code.encode(msgs)
t_ira = time.perf_counter() - t
G = derive_generator(code.H)
t = time.perf_counter()
cw_g = encode_systematic(G, cw[:, G.info_positions])
t_gen = time.perf_counter() - t
print(f"\n10^4 words: accumulator {t_ira * 1e3:.1f} ms, generator {t_gen * 1e3:.1f} ms")
print("identical codewords:", np.array_equal(cw, cw_g))
print("all syndromes zero:", not syndrome(code.H, cw).any())

# linearity
a, b = msgs[:2]
print("encode(a ^ b) == encode(a) ^ encode(b):",
      np.array_equal(code.encode(a ^ b), code.encode(a) ^ code.encode(b)))
