import json

import numpy as np
import pytest

from ldpclab.decode import DecoderConfig
from ldpclab.errors import ConfigError
from ldpclab.harness import (WORKERS_ENV, PointResult, SimConfig, default_workers, frame_rng,
                             make_frame, run_convergence_study, run_fer, run_iteration_profile,
                             snr_at_fer, sweep_parameter)
from ldpclab.pcm import syndrome


def small(**kw):
    base = dict(code="peg96", snrs=(1.0, 2.0), max_frames=300, min_errors=0, seed=5)
    base.update(kw)
    return SimConfig(**base)


class TestConfig:
    @pytest.mark.parametrize("kw", [
        dict(snrs=()), dict(max_frames=0), dict(min_errors=-1), dict(workers=0),
        dict(channel="rayleigh"),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            small(**kw).channel_model(1.0, 0.5)

    def test_hash_ignores_workers(self):
        assert small(workers=1).config_hash() == small(workers=3).config_hash()
        assert small(seed=1).config_hash() != small(seed=2).config_hash()

    def test_default_workers(self, monkeypatch):
        monkeypatch.delenv(WORKERS_ENV, raising=False)
        assert default_workers() == 1
        monkeypatch.setenv(WORKERS_ENV, "3")
        assert default_workers() == 3
        monkeypatch.setenv(WORKERS_ENV, "many")
        with pytest.raises(ConfigError):
            default_workers()


class TestFrames:
    def test_streams_independent(self):
        a = frame_rng(1, 0, 0).random(4)
        assert not np.array_equal(a, frame_rng(1, 0, 1).random(4))
        assert not np.array_equal(a, frame_rng(1, 1, 0).random(4))
        assert np.array_equal(a, frame_rng(1, 0, 0).random(4))

    def test_frame_is_codeword(self, rootcheck):
        ch = small().channel_model(3.0, rootcheck.rate)
        msg, cw, llr = make_frame(rootcheck, ch, 1, 7)
        assert not syndrome(rootcheck.H, cw).any()
        assert np.array_equal(cw[rootcheck.info_positions], msg)
        assert llr.shape == (rootcheck.n,)

    def test_common_random_numbers(self, peg96):
        # the message stream does not depend on SNR
        a = make_frame(peg96, small().channel_model(1.0, 0.5), 3, 4)[0]
        b = make_frame(peg96, small().channel_model(6.0, 0.5), 3, 4)[0]
        assert np.array_equal(a, b)


class TestRunFer:
    def test_noiseless_point(self):
        r = run_fer(small(snrs=(80.0,), max_frames=50))
        p = r.points[0]
        assert p.fer == 0 and p.ber == 0 and p.mean_iterations <= 1

    def test_noiseless_block_fading(self):
        # at huge SNR only a deep fade can cause an error; with these seeds none does
        r = run_fer(small(code="rootcheck-r12", snrs=(90.0,), channel="block-fading", fadings=2,
                          max_frames=50))
        assert r.points[0].fer == 0

    def test_fer_decreases(self):
        r = run_fer(small(snrs=(0.0, 2.0, 4.0)))
        assert r.fer[0] > r.fer[1] > r.fer[2]
        assert np.all((0 <= r.fer) & (r.fer <= 1))

    def test_mean_iterations_bounded_and_monotone(self):
        r = run_iteration_profile(small(snrs=(0.0, 1.0, 2.0, 3.0, 4.0)))
        it = r.mean_iterations
        assert np.all(it <= 20)
        assert np.all(np.diff(it) <= 0)

    def test_min_errors_stops_exactly(self):
        r = run_fer(small(snrs=(0.0,), max_frames=2000, min_errors=17))
        assert r.points[0].frame_errors == 17
        assert r.points[0].frames < 2000

    @pytest.mark.parametrize("workers", [2, 3])
    def test_worker_independence(self, workers):
        cfg = small(max_frames=400, min_errors=25)
        assert run_fer(cfg).to_csv() == run_fer(SimConfig(**{**cfg.__dict__, "workers": workers})).to_csv()

    def test_outputs(self, tmp_path):
        r = run_fer(small(snrs=(2.0,), max_frames=100))
        r.save(tmp_path / "out")
        csv_text = (tmp_path / "out.csv").read_text()
        assert csv_text.splitlines()[0].startswith("snr_db,frames,frame_errors")
        meta = json.loads((tmp_path / "out.json").read_text())
        assert meta["code_fingerprint"] == r.fingerprint
        assert meta["config"]["seed"] == 5

    def test_wilson_interval(self):
        p = PointResult(1.0, 100, 10, 0, 10, np.zeros(100))
        lo, hi = p.fer_ci
        assert lo < 0.1 < hi
        assert lo == pytest.approx(0.0552, abs=1e-3) and hi == pytest.approx(0.1744, abs=1e-3)

    def test_snr_at_fer(self):
        r = run_fer(small(snrs=(0.0, 2.0, 4.0)))
        x = snr_at_fer(r, 0.1)
        assert x is None or 0.0 <= x <= 4.0
        assert snr_at_fer(r, 1e-9) is None


class TestConvergence:
    def test_t0_is_channel_decision(self, peg96):
        cfg = small(snrs=(1.0,), max_frames=60)
        table = run_convergence_study(cfg, [0, 5, 20])
        ch = cfg.channel_model(1.0, peg96.rate)
        wrong = []
        for f in range(60):
            msg, _, llr = make_frame(peg96, ch, 5, f)
            wrong.append(np.any((llr < 0)[peg96.info_positions] != msg))
        assert list(table.fer.values())[0][0] == pytest.approx(np.mean(wrong))

    def test_matches_fixed_budget_runs(self):
        cfg = small(snrs=(1.5,), max_frames=150)
        table = run_convergence_study(cfg, [3, 8])
        for t_idx, t in enumerate([3, 8]):
            r = run_fer(SimConfig(**{**cfg.__dict__, "decoder": DecoderConfig(max_iters=t)}))
            assert list(table.fer.values())[0][t_idx] == pytest.approx(r.fer[0])

    def test_bad_grid(self):
        with pytest.raises(ConfigError):
            run_convergence_study(small(), [])


class TestSweep:
    def test_neutral_values_reduce(self):
        cfg = small(snrs=(2.0,), max_frames=120)
        ms = run_fer(SimConfig(**{**cfg.__dict__, "decoder": DecoderConfig("minsum")}))
        assert sweep_parameter(cfg, "alpha", [1.0]).fer[0] == ms.fer[0]
        assert sweep_parameter(cfg, "beta", [0.0]).fer[0] == ms.fer[0]
        spa = run_fer(cfg)
        assert sweep_parameter(cfg, "rho", [1.0]).fer[0] == spa.fer[0]

    def test_best_and_csv(self):
        t = sweep_parameter(small(snrs=(2.0,), max_frames=100), "alpha", [1.0, 1.25, 1.5])
        assert t.best[0] in (1.0, 1.25, 1.5)
        assert len(t.to_csv().splitlines()) == 4

    def test_errors(self):
        with pytest.raises(ConfigError):
            sweep_parameter(small(), "alpha", [1.0])
        with pytest.raises(ConfigError):
            sweep_parameter(small(snrs=(1.0,)), "gamma", [1.0])
        with pytest.raises(ConfigError):
            sweep_parameter(small(snrs=(1.0,)), "rho", [])
