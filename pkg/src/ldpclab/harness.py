"""Monte Carlo link simulation: FER/BER curves, iteration profiles, sweeps.

Every frame draws its randomness from its own counter-based stream
(Philox keyed by ``(seed, frame_index, stream)``), so results depend only on
the configuration and the master seed, never on the worker count. Frame
indices restart at zero for every SNR point and every decoder, which gives
common random numbers across SNR points, decoders and equal-length codes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.stats import binomtest

from . import __version__
from .channel import AWGN, BLOCK_FADING, ChannelModel, bpsk_modulate, compute_llr, ebn0_to_sigma, transmit
from .codes import Code, load_code
from .decode import Decoder, DecoderConfig
from .errors import ConfigError

STREAM_MESSAGE = 0
STREAM_CHANNEL = 1

CHUNK = 64

WORKERS_ENV = "LDPCLAB_WORKERS"


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer") from None


def frame_rng(seed, frame, stream):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(frame, stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SimConfig:
    """Everything that determines a simulation result.

    ``snrs`` are Eb/N0 values in dB. A point stops after ``max_frames`` frames
    or as soon as ``min_errors`` frame errors have been seen (0 disables the
    early stop).
    """

    code: str
    snrs: tuple
    decoder: DecoderConfig = DecoderConfig()
    channel: str = AWGN
    fadings: int = 1
    interleave: bool = False
    max_frames: int = 10_000
    min_errors: int = 100
    seed: int = 1
    workers: int = 1
    all_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "snrs", tuple(float(s) for s in self.snrs))
        if not self.snrs:
            raise ConfigError("SNR grid is empty")
        if self.max_frames < 1:
            raise ConfigError("frame budget must be >= 1")
        if self.min_errors < 0:
            raise ConfigError("min_errors must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.channel not in (AWGN, BLOCK_FADING):
            raise ConfigError(f"unknown channel {self.channel!r}")
        if self.channel == BLOCK_FADING and self.fadings < 1:
            raise ConfigError("block fading needs fadings >= 1")

    def channel_model(self, snr_db, rate):
        return ChannelModel(
            kind=self.channel,
            sigma=ebn0_to_sigma(snr_db, rate),
            fadings=self.fadings if self.channel == BLOCK_FADING else 1,
            interleave=self.interleave,
        )

    def describe(self):
        """JSON-ready echo of the configuration (worker count excluded)."""
        d = asdict(self)
        d.pop("workers")
        dec = d["decoder"]
        if dec.get("rho_map") is not None:
            dec["rho_map"] = np.asarray(dec["rho_map"]).tolist()
        d["snrs"] = list(self.snrs)
        return d

    def config_hash(self):
        blob = json.dumps(self.describe(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class PointResult:
    snr_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    info_bits: int
    iterations: np.ndarray = field(repr=False)
    converged: int = 0

    @property
    def fer(self):
        return self.frame_errors / self.frames

    @property
    def ber(self):
        return self.bit_errors / (self.frames * self.info_bits)

    @property
    def fer_ci(self):
        ci = binomtest(self.frame_errors, self.frames).proportion_ci(0.95, method="wilson")
        return ci.low, ci.high

    @property
    def mean_iterations(self):
        return float(self.iterations.mean())

    def iteration_percentile(self, q):
        return float(np.percentile(self.iterations, q))

    def row(self):
        lo, hi = self.fer_ci
        return {
            "snr_db": f"{self.snr_db:.4f}",
            "frames": self.frames,
            "frame_errors": self.frame_errors,
            "bit_errors": self.bit_errors,
            "fer": f"{self.fer:.6e}",
            "ber": f"{self.ber:.6e}",
            "fer_ci_low": f"{lo:.6e}",
            "fer_ci_high": f"{hi:.6e}",
            "mean_iters": f"{self.mean_iterations:.4f}",
            "p50_iters": f"{self.iteration_percentile(50):.1f}",
            "p90_iters": f"{self.iteration_percentile(90):.1f}",
            "converged": self.converged,
        }


@dataclass
class SimResult:
    config: SimConfig
    code_name: str
    fingerprint: str
    points: list
    wall_time: float = 0.0

    @property
    def snrs(self):
        return np.array([p.snr_db for p in self.points])

    @property
    def fer(self):
        return np.array([p.fer for p in self.points])

    @property
    def ber(self):
        return np.array([p.ber for p in self.points])

    @property
    def mean_iterations(self):
        return np.array([p.mean_iterations for p in self.points])

    def to_csv(self):
        buf = io.StringIO()
        rows = [p.row() for p in self.points]
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()

    def to_json(self):
        meta = {
            "version": __version__,
            "code": self.code_name,
            "code_fingerprint": self.fingerprint,
            "config": self.config.describe(),
            "config_hash": self.config.config_hash(),
            "snr_convention": "Eb/N0 in dB; sigma^2 = 1 / (2 R Eb/N0), unit-energy BPSK",
            "rng": "numpy Philox keyed by SeedSequence(seed, spawn_key=(frame, stream))",
            "wall_time_s": round(self.wall_time, 3),
            "points": [p.row() for p in self.points],
        }
        return json.dumps(meta, indent=2, sort_keys=True)

    def save(self, prefix):
        with open(f"{prefix}.csv", "w") as f:
            f.write(self.to_csv())
        with open(f"{prefix}.json", "w") as f:
            f.write(self.to_json())


# -- per-frame machinery ------------------------------------------------------

def make_frame(code: Code, ch: ChannelModel, seed, frame, all_zero=False):
    """Message, codeword and channel LLRs of one frame."""
    if all_zero:
        msg = np.zeros(code.k, dtype=np.uint8)
        cw = np.zeros(code.n, dtype=np.uint8)
    else:
        msg = frame_rng(seed, frame, STREAM_MESSAGE).integers(0, 2, code.k, dtype=np.uint8)
        cw = code.encode(msg)
    y, fr = transmit(bpsk_modulate(cw), ch, frame_rng(seed, frame, STREAM_CHANNEL))
    return msg, cw, compute_llr(y, ch, fr)


def _run_chunk(code, ch, dec_cfg, seed, first, count, all_zero):
    dec = Decoder(code.H, dec_cfg)
    out = np.zeros((count, 4), dtype=np.int64)
    for t in range(count):
        msg, _, llr = make_frame(code, ch, seed, first + t, all_zero)
        res = dec.decode(llr)
        errs = int(np.count_nonzero(res.bits[code.info_positions] != msg))
        out[t] = (errs > 0, errs, res.iterations, res.converged)
    return out


def _simulate_point(code, cfg: SimConfig, snr, pool):
    ch = cfg.channel_model(snr, code.rate)
    rows = []
    errors = 0
    next_frame = 0
    while next_frame < cfg.max_frames:
        # a wave of chunks; the cut below keeps results worker-independent
        starts = list(range(next_frame, min(cfg.max_frames, next_frame + CHUNK * cfg.workers), CHUNK))
        jobs = [(s, min(CHUNK, cfg.max_frames - s)) for s in starts]
        if pool is None:
            outs = [_run_chunk(code, ch, cfg.decoder, cfg.seed, s, c, cfg.all_zero) for s, c in jobs]
        else:
            futs = [pool.submit(_run_chunk, code, ch, cfg.decoder, cfg.seed, s, c, cfg.all_zero)
                    for s, c in jobs]
            outs = [f.result() for f in futs]
        stop = False
        for out in outs:
            for row in out:
                rows.append(row)
                errors += int(row[0])
                if cfg.min_errors and errors >= cfg.min_errors:
                    stop = True
                    break
            if stop:
                break
        if stop:
            break
        next_frame = starts[-1] + jobs[-1][1]
    arr = np.array(rows, dtype=np.int64)
    return PointResult(
        snr_db=snr,
        frames=arr.shape[0],
        frame_errors=int(arr[:, 0].sum()),
        bit_errors=int(arr[:, 1].sum()),
        info_bits=code.k,
        iterations=arr[:, 2].copy(),
        converged=int(arr[:, 3].sum()),
    )


def run_fer(cfg: SimConfig, code: Code | None = None) -> SimResult:
    """FER/BER and iteration statistics at every SNR point of ``cfg``."""
    code = code if code is not None else load_code(cfg.code)
    t0 = time.perf_counter()
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        points = [_simulate_point(code, cfg, snr, pool) for snr in cfg.snrs]
    finally:
        if pool is not None:
            pool.shutdown()
    return SimResult(cfg, code.name, code.fingerprint(), points, time.perf_counter() - t0)


def run_iteration_profile(cfg: SimConfig, code: Code | None = None) -> SimResult:
    """Same frames as :func:`run_fer`; per-point iteration statistics are in the result."""
    return run_fer(cfg, code)


@dataclass
class ConvergenceTable:
    snr_db: float
    frames: int
    iterations: list
    fer: dict

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        labels = list(self.fer)
        w.writerow(["iterations"] + labels)
        for t_idx, t in enumerate(self.iterations):
            w.writerow([t] + [f"{self.fer[lab][t_idx]:.6e}" for lab in labels])
        return buf.getvalue()


def run_convergence_study(cfg: SimConfig, iteration_grid, decoders=None, code=None) -> ConvergenceTable:
    """FER after exactly t iteration-equivalents for every t in the grid.

    All decoders see the same ``cfg.max_frames`` frames at ``cfg.snrs[0]``.
    Decoders stop on a zero syndrome (when configured) and keep their
    decision from then on. Each decoder runs ``max(iteration_grid)``
    iterations at most.
    """
    code = code if code is not None else load_code(cfg.code)
    grid = sorted(int(t) for t in iteration_grid)
    if not grid or grid[0] < 0:
        raise ConfigError("iteration grid must be non-empty and non-negative")
    decoders = list(decoders) if decoders is not None else [cfg.decoder]
    tmax = max(grid[-1], 1)
    snr = cfg.snrs[0]
    ch = cfg.channel_model(snr, code.rate)
    errors = {}
    for dc in decoders:
        dec = Decoder(code.H, replace(dc, max_iters=tmax))
        err = np.zeros(len(grid), dtype=np.int64)
        for f in range(cfg.max_frames):
            msg, _, llr = make_frame(code, ch, cfg.seed, f, cfg.all_zero)
            trace = dec.decode(llr, trace_bits=True).bit_trace
            wrong = (trace[grid][:, code.info_positions] != msg).any(axis=1)
            err += wrong
        errors[dc.label()] = err / cfg.max_frames
    return ConvergenceTable(snr, cfg.max_frames, grid, errors)


_SWEEP_VARIANT = {"alpha": "nms", "beta": "oms", "rho": "urw"}


@dataclass
class SweepTable:
    parameter: str
    values: list
    results: list

    @property
    def fer(self):
        return np.array([r.points[0].fer for r in self.results])

    @property
    def best(self):
        i = int(np.argmin(self.fer))
        return self.values[i], float(self.fer[i])

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.parameter, "frames", "frame_errors", "fer"])
        for v, r in zip(self.values, self.results):
            p = r.points[0]
            w.writerow([f"{v:g}", p.frames, p.frame_errors, f"{p.fer:.6e}"])
        return buf.getvalue()


def sweep_parameter(cfg: SimConfig, parameter, grid, code=None) -> SweepTable:
    """FER over a grid of alpha, beta or rho at the single SNR of ``cfg``.

    Every grid value reuses the same frames (common random numbers).
    """
    if parameter not in _SWEEP_VARIANT:
        raise ConfigError(f"parameter must be one of {sorted(_SWEEP_VARIANT)}")
    grid = [float(v) for v in grid]
    if not grid:
        raise ConfigError("sweep grid is empty")
    if len(cfg.snrs) != 1:
        raise ConfigError("a sweep runs at exactly one SNR point")
    code = code if code is not None else load_code(cfg.code)
    results = []
    for v in grid:
        dec = replace(cfg.decoder, variant=_SWEEP_VARIANT[parameter], **{parameter: v})
        results.append(run_fer(replace(cfg, decoder=dec), code))
    return SweepTable(parameter, grid, results)


def snr_at_fer(result: SimResult, target):
    """Eb/N0 where the FER curve crosses ``target`` (log-linear interpolation).

    Returns None if the curve never reaches the target.
    """
    snr, fer = result.snrs, result.fer
    for a in range(len(snr) - 1):
        if fer[a] >= target > fer[a + 1]:
            if fer[a + 1] == 0:
                return float(snr[a + 1])
            la, lb = np.log10(fer[a]), np.log10(fer[a + 1])
            return float(snr[a] + (np.log10(target) - la) * (snr[a + 1] - snr[a]) / (lb - la))
    return None
