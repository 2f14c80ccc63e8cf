"""
Convergence speed and parameter tuning
======================================

On the AWGN channel at 3 dB the question is how many iterations each schedule
needs. Every decoder sees the same frames (common random numbers), and the
FER is read off after exactly t iterations. Then alpha for normalized
min-sum is tuned by a grid search at one SNR.
"""

import numpy as np

from ldpclab.decode import DecoderConfig
from ldpclab.harness import SimConfig, run_convergence_study, sweep_parameter

cfg = SimConfig("wifi-r12", (3.0,), max_frames=300, seed=2)
grid = [1, 2, 3, 4, 5, 8, 10, 20]
table = run_convergence_study(cfg, grid, [
    DecoderConfig("spa", "flooding"),
    DecoderConfig("spa", "layered"),
    DecoderConfig("urw", "flooding", rho=0.9),
])
print(table.to_csv())

nw = run_convergence_study(cfg, [1, 2, 3, 4, 5], [DecoderConfig("spa", "nwbp")])
print(nw.to_csv())

sweep = sweep_parameter(SimConfig("wifi-r12", (2.0,), max_frames=300, seed=3), "alpha",
                        np.arange(1.0, 2.01, 0.25))
print(sweep.to_csv())
print("best alpha:", sweep.best)
