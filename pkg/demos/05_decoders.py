"""
Check-node rules and schedules
==============================

Sum-product computes exact extrinsic LLRs on a tree. Min-sum replaces the
tanh rule by the smallest magnitude, which always overshoots, so normalized
(divide by alpha) and offset (subtract beta) versions pull it back. The
schedule decides in which order messages move: all at once (flooding), check
by check (layered), or greedily by largest change (residual / node-wise).
"""

import numpy as np

from ldpclab.channel import ChannelModel, bpsk_modulate, compute_llr, ebn0_to_sigma, transmit
from ldpclab.codes import load_code
from ldpclab.decode import (Decoder, DecoderConfig, belief, check_update_minsum,
                            check_update_spa, vfap_config)

xs = [2.0, -1.5, 3.0]
print("SPA:", round(check_update_spa(xs), 4))
print("min-sum:", check_update_minsum(xs))
print("normalized (alpha = 1.25):", check_update_minsum(xs, alpha=1.25))
print("offset (beta = 2):", check_update_minsum(xs, beta=2.0))
print("belief with rho = 0.5:", belief(0.5, [1.0, -0.25], 0.5))

# one noisy frame of the Wi-Fi code at 2 dB, every schedule, SPA and min-sum
code = load_code("wifi-r12")
rng = np.random.default_rng(3)
cw = code.encode(rng.integers(0, 2, code.k))
ch = ChannelModel(sigma=ebn0_to_sigma(2.0, code.rate))
y, fr = transmit(bpsk_modulate(cw), ch, rng)
llr = compute_llr(y, ch, fr)
print(f"\nchannel bit errors: {int(np.count_nonzero((llr < 0) != cw))}")
for variant in ("spa", "nms", "oms", "urw"):
    for schedule in ("flooding", "layered", "rbp", "nwbp"):
        res = Decoder(code.H, DecoderConfig(variant, schedule, max_iters=30)).decode(llr)
        print(f"  {variant:4s} {schedule:9s} converged={res.converged!s:5s} "
              f"iterations={res.iterations:2d} bit errors={int(np.count_nonzero(res.bits != cw))}")

# VFAP weights checks on girth-length cycles with a smaller rho
cfg = vfap_config(code.H, 0.8, schedule="layered")
print("\nVFAP: checks on shortest cycles:", int(np.count_nonzero(cfg.rho_map < 1)), "of", code.H.m)
res = Decoder(code.H, cfg).decode(llr)
print("VFAP layered: converged", res.converged, "in", res.iterations, "iterations")
