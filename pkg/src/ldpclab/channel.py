"""BPSK over AWGN and block-fading channels, LLRs and the outage reference.

Bit 0 maps to +1.0, so a positive LLR favours bit 0. Noise is real with
per-dimension standard deviation sigma; for unit-energy BPSK at rate R,
sigma**2 = 1 / (2 * R * Eb/N0) and the per-symbol SNR is 2 * R * Eb/N0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError

LLR_MAX = 50.0

AWGN = "awgn"
BLOCK_FADING = "block-fading"


@dataclass(frozen=True)
class ChannelModel:
    """Channel description; ``fadings`` only matters for block fading.

    With ``interleave`` set, bits are assigned to fading blocks through a
    fixed pseudo-random permutation (seeded by ``interleaver_seed``) instead
    of contiguous segments.
    """

    kind: str = AWGN
    sigma: float = 1.0
    fadings: int = 1
    interleave: bool = False
    interleaver_seed: int = 0

    def __post_init__(self):
        if self.kind not in (AWGN, BLOCK_FADING):
            raise ConfigError(f"unknown channel kind {self.kind!r}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.fadings < 1:
            raise ConfigError("fadings must be >= 1")

    @property
    def num_blocks(self):
        return self.fadings if self.kind == BLOCK_FADING else 1

    def block_of(self, n):
        """Fading block index of every transmitted bit (read-only array)."""
        F = self.num_blocks
        if n % F:
            raise ConfigError(f"length {n} does not divide into {F} fading blocks")
        return _block_map(n, F, self.interleave and F > 1, self.interleaver_seed)

    def with_sigma(self, sigma):
        return ChannelModel(self.kind, sigma, self.fadings, self.interleave, self.interleaver_seed)


@lru_cache(maxsize=64)
def _block_map(n, F, interleave, seed):
    blocks = np.repeat(np.arange(F), n // F)
    if interleave:
        blocks = blocks[np.random.default_rng(seed).permutation(n)]
    blocks.setflags(write=False)
    return blocks


@dataclass(frozen=True)
class FadingRealization:
    """Per-frame fading amplitudes, one per block (``[1.0]`` for AWGN)."""

    h: np.ndarray


def ebn0_to_sigma(ebn0_db, rate):
    """Noise std for unit-energy BPSK at the given Eb/N0 (dB) and code rate."""
    return float(np.sqrt(1.0 / (2.0 * rate * 10.0 ** (np.asarray(ebn0_db) / 10.0))))


def ebn0_to_snr(ebn0_db, rate):
    """Per-symbol SNR (linear) of real BPSK: 2 * R * Eb/N0."""
    return 2.0 * rate * 10.0 ** (np.asarray(ebn0_db, dtype=float) / 10.0)


def bpsk_modulate(c):
    return 1.0 - 2.0 * (np.asarray(c, dtype=np.float64) % 2)


def draw_fading(ch: ChannelModel, rng) -> FadingRealization:
    if ch.kind == AWGN:
        return FadingRealization(np.ones(1))
    # Rayleigh with E[h^2] = 1
    return FadingRealization(rng.rayleigh(scale=np.sqrt(0.5), size=ch.fadings))


def transmit(x, ch: ChannelModel, rng, h=None):
    """Pass symbols through the channel.

    Fading is drawn before the noise, so two codes of equal length see the
    same fading and noise from identically seeded generators. ``h`` overrides
    the random draw.

    Returns:
        (y, FadingRealization)
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    blocks = ch.block_of(n)
    if h is None:
        fr = draw_fading(ch, rng)
    else:
        h = np.atleast_1d(np.asarray(h, dtype=np.float64))
        if h.size != ch.num_blocks:
            raise ConfigError(f"need {ch.num_blocks} fading values, got {h.size}")
        fr = FadingRealization(h)
    y = fr.h[blocks] * x + ch.sigma * rng.standard_normal(x.shape)
    return y, fr


def compute_llr(y, ch: ChannelModel, fr: FadingRealization | None = None):
    """Coherent LLRs 2*h*y/sigma**2, clamped to +-LLR_MAX."""
    if not ch.sigma > 0:
        raise ConfigError("sigma must be positive")
    y = np.asarray(y, dtype=np.float64)
    gain = 1.0 if fr is None else fr.h[ch.block_of(y.shape[-1])]
    return np.clip(2.0 * gain * y / ch.sigma**2, -LLR_MAX, LLR_MAX)


# -- outage -------------------------------------------------------------------

_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite_e.hermegauss(64)
_GH_WEIGHTS = _GH_WEIGHTS / _GH_WEIGHTS.sum()


def capacity_gaussian(snr):
    """Real Gaussian-input AWGN capacity in bits per channel use."""
    return 0.5 * np.log2(1.0 + np.asarray(snr, dtype=float))


def capacity_bpsk(snr):
    """Mutual information of BPSK over real AWGN, by Gauss-Hermite quadrature."""
    snr = np.asarray(snr, dtype=float)[..., None]
    # y = 1 + z / sqrt(snr); I = 1 - E[log2(1 + exp(-2 snr y))]
    arg = -2.0 * snr - 2.0 * np.sqrt(snr) * _GH_NODES
    return 1.0 - (np.logaddexp(0.0, arg) / np.log(2.0)) @ _GH_WEIGHTS


def outage_probability(snr_db, rate, fadings, samples=100_000, rng=None, input="gaussian"):
    """Monte Carlo estimate of Pr[(1/F) sum_f C(snr * h_f**2) < R].

    ``snr_db`` is Eb/N0 in dB; the per-symbol SNR is 2 * R * Eb/N0.
    ``rng`` may be a Generator or a seed; reusing a seed gives common random
    numbers across SNR points.
    """
    if samples < 10_000:
        raise ConfigError("use at least 10^4 samples")
    if input not in ("gaussian", "bpsk"):
        raise ConfigError(f"unknown input distribution {input!r}")
    rng = np.random.default_rng(rng)
    h2 = rng.exponential(1.0, size=(samples, fadings))
    cap = capacity_gaussian if input == "gaussian" else capacity_bpsk
    mean_cap = cap(float(ebn0_to_snr(snr_db, rate)) * h2).mean(axis=1)
    return float(np.mean(mean_cap < rate))


def outage_stderr(p, samples):
    return float(np.sqrt(max(p * (1 - p), 0.0) / samples))
