"""
Parity-check matrices, lifting and short cycles
===============================================

A QC code is stored as a small base matrix of circulant shifts. Lifting
replaces every entry e >= 0 with an s x s identity rotated by e and every -1
with a zero block. The Tanner graph of the lifted matrix is what the
decoders run on, and its short cycles are what hurt them.
"""

import numpy as np

from ldpclab.codes import load_code
from ldpclab.pcm import (BaseMatrix, count_short_cycles, expand_base, girth, load_alist,
                         save_alist, syndrome)

# a 2 x 3 base matrix lifted by s = 4
base = BaseMatrix(2, 3, 4, ((0, 1, -1), (2, -1, 3)))
H = expand_base(base)
print("lifted shape:", H.shape)
print(H.to_dense())

# every column of a lifted block holds exactly one 1
print("column degrees:", H.col_degrees)

# the rate-1/2 Wi-Fi style code shipped with the package
wifi = load_code("wifi-r12")
print(f"\n{wifi.name}: {wifi.H.m} x {wifi.H.n}, {wifi.H.num_edges} edges, girth {girth(wifi.H)}")

# per-check counts of cycles of length <= L (cumulative over lengths)
checks4, _ = count_short_cycles(wifi.H, 4)
checks6, _ = count_short_cycles(wifi.H, 6)
print("4-cycles through any check:", int(checks4.sum()))
print("checks on a 6-cycle:", int(np.count_nonzero(checks6)), "of", wifi.H.m)

# alist round trip (MacKay's text format)
text = save_alist(wifi.H)
print("\nalist header:", text.splitlines()[:2])
assert load_alist(text) == wifi.H

# a syndrome is H c over GF(2); codewords give zero
c = wifi.encode(np.random.default_rng(0).integers(0, 2, wifi.k))
print("syndrome weight of a codeword:", int(syndrome(wifi.H, c).sum()))
c[5] ^= 1
print("after one bit flip:", int(syndrome(wifi.H, c).sum()))
