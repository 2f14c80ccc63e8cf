"""
Growing codes: PEG, IRA and root-check layouts
==============================================

Progressive edge growth adds edges one at a time, always to the check that
is furthest away in the current graph. The IRA template fixes a dual-diagonal
parity part so encoding becomes a running XOR. The root-check construction
arranges a QC-IRA base matrix so that every information bit has a check whose
other neighbours all sit in the other fading block.
"""

import numpy as np

from ldpclab.codegen import (build_ira_template, build_qc_ira_root_check, expand_root_check,
                             peg_construct, peg_ira, root_check_violations)
from ldpclab.codes import load_code
from ldpclab.pcm import SparseBinaryMatrix, count_short_cycles, girth

# regular (3, 6) PEG code, n = 96
H = peg_construct(48, 96, [3] * 96, seed=0)
print("PEG girth:", girth(H), " check degrees:", np.bincount(H.row_degrees))

# a random graph with the same degrees for comparison
rng = np.random.default_rng(0)
sockets = rng.permutation(np.repeat(np.arange(48), 6))
rows = [[] for _ in range(48)]
for j in range(96):
    for i in sockets[3 * j:3 * j + 3]:
        if j not in rows[i]:
            rows[i].append(j)
R = SparseBinaryMatrix(48, 96, rows)
print("random girth:", girth(R), " 4-cycles:", int(count_short_cycles(R, 4)[0].sum() // 2))

# the IRA parity part for m = 4
print("\nIRA template (parity columns):")
print(build_ira_template(4, 8).to_dense()[:, 4:])
Hira = peg_ira(48, 96, [3] * 48, seed=0)
print("PEG-IRA girth:", girth(Hira))

# root-check QC-IRA code for two fading blocks, n = 16 * 42 = 672
base, template = build_qc_ira_root_check(nb=16, mb=8, s=42, fadings=2, seed=0, info_degree=4)
print("\nroot-check base matrix (-1 = zero block):")
print(base.array)
Hrc, _ = expand_root_check(base)
print("lifted:", Hrc.shape, " girth:", girth(Hrc))
print("audit violations:", len(root_check_violations(Hrc, template.block_of, template.info_positions)))

# the same audit on the Wi-Fi baseline finds many unprotected bits
wifi = load_code("wifi-r12")
bad = root_check_violations(wifi.H, np.repeat([0, 1], 336), wifi.info_positions)
print("wifi-r12 bits without a root check:", len(bad), "of", wifi.k)
