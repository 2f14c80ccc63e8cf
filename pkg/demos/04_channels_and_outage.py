"""
BPSK, block fading and the outage bound
=======================================

Bit 0 is sent as +1. On the block-fading channel each codeword half sees its
own Rayleigh gain h (E[h^2] = 1), constant over the half and redrawn every
frame. When one half fades deeply, no code of rate 1/2 can do much: the
outage probability is the floor every FER curve on this channel sits above.
"""

import numpy as np

from ldpclab.channel import (BLOCK_FADING, ChannelModel, bpsk_modulate, capacity_bpsk,
                             compute_llr, ebn0_to_sigma, outage_probability, transmit)

rng = np.random.default_rng(0)
c = rng.integers(0, 2, 8)
x = bpsk_modulate(c)
print("bits:", c, "\nsymbols:", x)

# Eb/N0 -> noise std for rate 1/2
sigma = ebn0_to_sigma(10.0, 0.5)
ch = ChannelModel(BLOCK_FADING, sigma, fadings=2)
y, fr = transmit(x, ch, rng)
print(f"\nsigma = {sigma:.3f}, fading gains h = {np.round(fr.h, 3)}")
print("LLRs:", np.round(compute_llr(y, ch, fr), 2))

# h = 0 erases a block: its LLRs are exactly zero
y, fr = transmit(x, ch, rng, h=[0.0, 1.0])
print("erased first half:", compute_llr(y, ch, fr))

# outage curve with common random numbers (same seed at every point)
print("\nEb/N0  outage(gaussian)  outage(bpsk)")
for snr in range(4, 25, 4):
    pg = outage_probability(snr, 0.5, 2, rng=1)
    pb = outage_probability(snr, 0.5, 2, rng=1, input="bpsk")
    print(f"{snr:5d}  {pg:16.5f}  {pb:12.5f}")

# diversity: the slope steepens with the number of fading blocks
for F in (1, 2, 4):
    print(f"F = {F}: outage at 16 dB = {outage_probability(16, 0.5, F, rng=2):.5f}")
print("BPSK capacity at SNR 1:", round(float(capacity_bpsk(1.0)), 4))
