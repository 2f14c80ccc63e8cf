"""
Root-check versus a standard QC code on two fading blocks
=========================================================

A desk-scale version of the block-fading comparison: rate 1/2, n = 672,
F = 2, SPA with at most 20 iterations. The baseline is sent through a
uniform interleaver, so both of its halves mix information and parity.
Increase FRAMES for smoother curves (the acceptance suite uses 10^5).
"""

import numpy as np

from ldpclab.channel import outage_probability
from ldpclab.decode import DecoderConfig
from ldpclab.harness import SimConfig, run_fer, snr_at_fer

FRAMES = 2000
snrs = (10.0, 14.0, 18.0, 22.0)
dec = DecoderConfig("spa", "flooding", max_iters=20)

runs = {
    "root-check": SimConfig("rootcheck-r12", snrs, dec, channel="block-fading", fadings=2,
                            max_frames=FRAMES, min_errors=200, seed=1),
    "wifi (interleaved)": SimConfig("wifi-r12", snrs, dec, channel="block-fading", fadings=2,
                                    interleave=True, max_frames=FRAMES, min_errors=200, seed=1),
}
print("Eb/N0 dB:", snrs)
print("outage:  ", [round(outage_probability(s, 0.5, 2, rng=0), 5) for s in snrs])
for label, cfg in runs.items():
    res = run_fer(cfg)
    print(f"{label:20s} FER {np.round(res.fer, 5)}  mean iterations {np.round(res.mean_iterations, 2)}")
    print(f"{'':20s} FER 1e-2 reached at {snr_at_fer(res, 1e-2)} dB")
# results can be written as plot-ready CSV plus a JSON echo of the config:
# res.save("rootcheck_fer")
