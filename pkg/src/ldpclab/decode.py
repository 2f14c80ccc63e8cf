"""Belief-propagation decoders: check-update variants crossed with schedules.

Variants: ``spa``, ``minsum``, ``nms`` (normalized, alpha), ``oms`` (offset,
beta), ``urw`` (uniform reweighting rho) and ``vfap`` (per-check rho map).
Schedules: ``flooding``, ``layered``, ``rbp`` (residual BP, one message at a
time) and ``nwbp`` (node-wise residual BP, one check at a time).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from .errors import ConfigError, DimensionError, ParameterError
from .pcm import ACYCLIC, SparseBinaryMatrix, count_short_cycles, girth

LLR_MAX = K.LLR_MAX

VARIANTS = ("spa", "minsum", "nms", "oms", "urw", "vfap")
SCHEDULES = ("flooding", "layered", "rbp", "nwbp")


@dataclass(frozen=True)
class DecoderConfig:
    variant: str = "spa"
    schedule: str = "flooding"
    alpha: float = 1.25
    beta: float = 0.15
    rho: float = 0.8
    rho_map: np.ndarray | None = field(default=None, compare=False)
    max_iters: int = 20
    stop_on_syndrome: bool = True

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.schedule not in SCHEDULES:
            raise ConfigError(f"unknown schedule {self.schedule!r}; choose from {SCHEDULES}")
        if not self.alpha >= 1.0:
            raise ConfigError(f"alpha must be >= 1, got {self.alpha}")
        if not self.beta >= 0.0:
            raise ConfigError(f"beta must be >= 0, got {self.beta}")
        if not 0.0 < self.rho <= 1.0:
            raise ConfigError(f"rho must be in (0, 1], got {self.rho}")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be positive")
        if self.rho_map is not None:
            rm = np.asarray(self.rho_map, dtype=float)
            if np.any(rm <= 0) or np.any(rm > 1):
                raise ConfigError("rho_map values must lie in (0, 1]")

    @property
    def check_kind(self):
        return K.SPA if self.variant in ("spa", "urw", "vfap") else K.MINSUM

    @property
    def effective_alpha(self):
        return self.alpha if self.variant == "nms" else 1.0

    @property
    def effective_beta(self):
        return self.beta if self.variant == "oms" else 0.0

    def label(self):
        extra = {"nms": f"(a={self.alpha:g})", "oms": f"(b={self.beta:g})",
                 "urw": f"(rho={self.rho:g})"}.get(self.variant, "")
        return f"{self.variant}{extra}/{self.schedule}"


@dataclass
class DecodeResult:
    bits: np.ndarray
    converged: bool
    iterations: int
    syndrome_weight: int
    beliefs: np.ndarray
    bit_trace: np.ndarray | None = None
    message_trace: np.ndarray | None = None


# -- scalar building blocks ---------------------------------------------------

def _one_check(values, kind, alpha, beta):
    src = np.asarray(values, dtype=np.float64).ravel()
    d = src.size
    if d == 0:
        raise ParameterError("need at least one incoming message")
    # append a phantom target edge whose own input is ignored
    src = np.append(src, 0.0)
    dst = np.empty(d + 1)
    buf = np.empty(d + 1)
    K.check_update(kind, alpha, beta, src, 0, d + 1, dst, buf, buf.copy())
    return float(dst[d])


def check_update_spa(incoming):
    """Sum-product check output for a list of extrinsic inputs.

    2*atanh(prod tanh(x/2)), with the magnitude capped by min|x| (which the
    exact value never exceeds) and by LLR_MAX.
    """
    return _one_check(incoming, K.SPA, 1.0, 0.0)


def check_update_minsum(incoming, alpha=1.0, beta=0.0):
    """Min-sum output: sign product times max(min|x| / alpha - beta, 0)."""
    if alpha < 1.0 or beta < 0.0:
        raise ParameterError("need alpha >= 1 and beta >= 0")
    return _one_check(incoming, K.MINSUM, float(alpha), float(beta))


def belief(llr_j, incoming, rho=1.0):
    """L_j + sum_i rho_i * Lambda_ij. ``rho`` is a scalar or one weight per input."""
    incoming = np.asarray(incoming, dtype=np.float64)
    rho = np.broadcast_to(np.asarray(rho, dtype=np.float64), incoming.shape)
    b = float(llr_j)
    for r, x in zip(rho, incoming):
        b += r * x
    return b


def compute_residual(before, after):
    return abs(after - before)


def vfap_weights(H: SparseBinaryMatrix, check_cycle_counts, rho_in_cycle):
    """Two-level reweighting: checks on a counted short cycle get ``rho_in_cycle``."""
    if not 0.0 < rho_in_cycle <= 1.0:
        raise ParameterError("rho_in_cycle must lie in (0, 1]")
    counts = np.asarray(check_cycle_counts)
    if counts.shape != (H.m,):
        raise DimensionError(f"need one cycle count per check ({H.m})")
    return np.where(counts > 0, float(rho_in_cycle), 1.0)


def shortest_cycle_counts(H: SparseBinaryMatrix):
    """Per-check counts of cycles of girth length (zeros if girth > 8 or acyclic)."""
    g = girth(H)
    if g == ACYCLIC or g > 8:
        return np.zeros(H.m, dtype=np.int64)
    return count_short_cycles(H, g)[0]


def vfap_config(H: SparseBinaryMatrix, rho_in_cycle=0.8, **kwargs) -> DecoderConfig:
    rho_map = vfap_weights(H, shortest_cycle_counts(H), rho_in_cycle)
    return DecoderConfig(variant="vfap", rho=rho_in_cycle, rho_map=rho_map, **kwargs)


# -- decoder ------------------------------------------------------------------

class Decoder:
    """Reusable decoder bound to one parity-check matrix and configuration.

    Work buffers live on the instance, so one Decoder must not be shared by
    concurrent callers; H itself is read-only and may be shared.
    """

    def __init__(self, H: SparseBinaryMatrix, cfg: DecoderConfig):
        self.H = H
        self.cfg = cfg
        g = H.graph
        self._graph = (g.check_ptr, g.edge_check, g.edge_var, g.var_ptr, g.var_edges)
        if cfg.variant == "vfap":
            if cfg.rho_map is None:
                raise ConfigError("VFAP needs a per-check rho map (see vfap_config)")
            rho = np.asarray(cfg.rho_map, dtype=np.float64)
            if rho.shape != (H.m,):
                raise ConfigError(f"rho_map must have {H.m} entries")
        elif cfg.variant == "urw":
            rho = np.full(H.m, cfg.rho)
        else:
            rho = np.ones(H.m)
        self.rho = np.ascontiguousarray(rho)
        E = H.num_edges
        dmax = int(H.row_degrees.max(initial=1))
        self._c2v = np.zeros(E)
        self._v2c = np.zeros(E)
        self._fwd = np.zeros(dmax + 1)
        self._bwd = np.zeros(dmax + 1)
        if cfg.schedule in ("rbp", "nwbp"):
            keys = H.m if cfg.schedule == "nwbp" else E
            self._size = K.tree_size(keys)
            self._cand = np.zeros(E)
            self._res = np.zeros(E)
            self._tv = np.zeros(2 * self._size)
            self._ti = np.zeros(2 * self._size, dtype=np.int64)

    def decode(self, llr, trace_bits=False, trace_messages=False) -> DecodeResult:
        """Decode one word of channel LLRs (or raw correlations for min-sum).

        With ``trace_bits`` the result holds the hard decisions after every
        iteration-equivalent 0..max_iters (frozen once decoding stops); with
        ``trace_messages`` it holds the check-to-variable messages likewise.
        """
        H, cfg = self.H, self.cfg
        llr = np.ascontiguousarray(llr, dtype=np.float64)
        if llr.shape != (H.n,):
            raise DimensionError(f"expected {H.n} LLRs, got shape {llr.shape}")
        T = cfg.max_iters + 1
        bit_trace = np.zeros((T if trace_bits else 0, H.n), dtype=np.uint8)
        msg_trace = np.zeros((T if trace_messages else 0, H.num_edges))
        beliefs = np.empty(H.n)
        bits = np.empty(H.n, dtype=np.uint8)
        args = (*self._graph, llr, self.rho, cfg.check_kind, float(cfg.effective_alpha),
                float(cfg.effective_beta), int(cfg.max_iters), bool(cfg.stop_on_syndrome),
                self._c2v, self._v2c, beliefs, bits, bit_trace, msg_trace, self._fwd, self._bwd)
        if cfg.schedule == "flooding":
            it, sw = K.decode_flooding(*args)
        elif cfg.schedule == "layered":
            it, sw = K.decode_layered(*args)
        else:
            it, sw = K.decode_residual(*args, cfg.schedule == "nwbp", self._cand, self._res,
                                       self._tv, self._ti, self._size)
        return DecodeResult(
            bits=bits,
            converged=bool(sw == 0),
            iterations=int(it),
            syndrome_weight=int(sw),
            beliefs=beliefs,
            bit_trace=bit_trace if trace_bits else None,
            message_trace=msg_trace if trace_messages else None,
        )


def decode(H: SparseBinaryMatrix, llr, cfg: DecoderConfig = DecoderConfig(), **kwargs) -> DecodeResult:
    """One-shot convenience wrapper around :class:`Decoder`."""
    return Decoder(H, cfg).decode(llr, **kwargs)


def with_params(cfg: DecoderConfig, **changes) -> DecoderConfig:
    return replace(cfg, **changes)
