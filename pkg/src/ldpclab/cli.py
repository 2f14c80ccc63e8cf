"""Command-line front end: ``ldpclab <command> ...``.

Exit status is 0 on success, 2 for configuration errors (bad flags, bad
parameter values, bad config file contents) and 3 for data or file errors
(missing files, malformed matrices or word files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import AWGN, BLOCK_FADING, outage_probability, outage_stderr
from .codegen import (build_qc_ira_root_check, contiguous_blocks, peg_construct, peg_ira,
                      root_check_violations)
from .codes import WIFI_RATES, load_code
from .decode import SCHEDULES, VARIANTS, Decoder, DecoderConfig, vfap_config
from .errors import ConfigError, DimensionError, FormatError, LdpcError, ParameterError
from .harness import SimConfig, default_workers, run_fer, snr_at_fer, sweep_parameter
from .pcm import ACYCLIC, count_short_cycles, girth, save_alist, save_base_matrix

EXIT_CONFIG = 2
EXIT_DATA = 3

SIM_KEYS = {"code", "rates", "snr_from", "snr_to", "snr_step", "channel", "fadings", "interleave",
            "decoder", "schedule", "alpha", "beta", "rho", "max_iters", "frames", "min_errors",
            "seed", "workers", "out", "all_zero"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


# -- shared option groups -----------------------------------------------------

def _add_decoder_opts(p):
    p.add_argument("--decoder", choices=VARIANTS, default="spa", help="check-update variant")
    p.add_argument("--schedule", choices=SCHEDULES, default="flooding")
    p.add_argument("--alpha", type=float, default=1.25, help="normalized min-sum divisor")
    p.add_argument("--beta", type=float, default=0.15, help="offset min-sum offset")
    p.add_argument("--rho", type=float, default=0.8, help="URW weight, or VFAP in-cycle weight")
    p.add_argument("--max-iters", type=int, default=20)


def _add_channel_opts(p):
    p.add_argument("--channel", choices=(AWGN, BLOCK_FADING), default=AWGN)
    p.add_argument("--fadings", type=int, default=2, help="fading blocks per codeword")
    p.add_argument("--interleave", action="store_true",
                   help="spread bits over fading blocks pseudo-randomly")
    p.add_argument("--frames", type=int, default=10_000, help="frame budget per point")
    p.add_argument("--min-errors", type=int, default=100, help="stop a point after this many frame errors")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=None,
                   help="worker threads (default from $LDPCLAB_WORKERS, else 1)")
    p.add_argument("--all-zero", action="store_true", help="send the all-zero codeword")


def _decoder_config(args, H):
    if args.decoder == "vfap":
        return vfap_config(H, args.rho, schedule=args.schedule, max_iters=args.max_iters)
    return DecoderConfig(args.decoder, args.schedule, alpha=args.alpha, beta=args.beta,
                         rho=args.rho, max_iters=args.max_iters)


def _snr_grid(a, b, step):
    if step <= 0:
        raise ConfigError("--snr-step must be positive")
    if b < a:
        raise ConfigError("--snr-to must not be below --snr-from")
    return tuple(np.round(np.arange(a, b + step / 2, step), 10).tolist())


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_rows(path):
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror}") from None
    return [(k + 1, ln.strip()) for k, ln in enumerate(lines) if ln.strip() and not ln.startswith("#")]


# -- commands -----------------------------------------------------------------

def cmd_construct(args):
    if args.kind == "root-check":
        base, _ = build_qc_ira_root_check(args.nb, args.mb, args.lift, args.fadings, args.seed,
                                          info_degree=args.dv)
        text = (f"# QC-IRA root-check code, nb={args.nb} mb={args.mb} s={args.lift} seed={args.seed}\n"
                "# layout: root-check\n" + save_base_matrix(base))
    else:
        if args.m is None or args.n is None:
            raise ConfigError(f"{args.kind} needs -m and -n")
        if args.kind == "peg":
            H = peg_construct(args.m, args.n, [args.dv] * args.n, args.seed)
        else:
            H = peg_ira(args.m, args.n, [args.dv] * (args.n - args.m), args.seed)
        text = save_alist(H)
    _emit(text, args.out)


def _cycle_totals(H):
    # per-check counts are cumulative over lengths; a cycle of length L visits L/2 checks
    totals = {}
    seen = 0
    for L in (4, 6, 8):
        visits = int(count_short_cycles(H, L)[0].sum())
        exact = visits - seen
        totals[str(L)] = exact // (L // 2)
        seen = visits
    return totals


def cmd_analyze(args):
    code = load_code(args.code)
    H = code.H
    g = girth(H)
    info = {
        "code": code.name,
        "fingerprint": code.fingerprint(),
        "m": H.m, "n": H.n, "k": code.k, "rate": round(code.rate, 6),
        "edges": H.num_edges,
        "girth": g if g == ACYCLIC else int(g),
        "variable_degrees": {str(d): int(c) for d, c in zip(*np.unique(H.col_degrees, return_counts=True))},
        "check_degrees": {str(d): int(c) for d, c in zip(*np.unique(H.row_degrees, return_counts=True))},
    }
    if not args.no_cycles:
        info["cycles"] = _cycle_totals(H)
    block_of = code.template.block_of if code.template is not None else contiguous_blocks(H.n, args.fadings)
    bad = root_check_violations(H, block_of, code.info_positions)
    info["root_check_violations"] = len(bad)
    info["root_check"] = not bad
    _emit(json.dumps(info, indent=2) + "\n", args.out)


def cmd_encode(args):
    code = load_code(args.code)
    rows = _read_rows(args.input)
    msgs = np.zeros((len(rows), code.k), dtype=np.uint8)
    for t, (lineno, ln) in enumerate(rows):
        word = ln.replace(" ", "")
        if len(word) != code.k or set(word) - {"0", "1"}:
            raise FormatError(f"expected {code.k} binary digits", lineno)
        msgs[t] = np.frombuffer(word.encode(), dtype=np.uint8) - ord("0")
    cw = code.encode(msgs)
    _emit("".join("".join(map(str, c)) + "\n" for c in cw), args.out)


def cmd_decode(args):
    code = load_code(args.code)
    dec = Decoder(code.H, _decoder_config(args, code.H))
    out = []
    failures = 0
    for lineno, ln in _read_rows(args.input):
        try:
            llr = np.array([float(v) for v in ln.replace(",", " ").split()])
        except ValueError:
            raise FormatError("LLR lines must hold real numbers", lineno) from None
        if llr.size != code.n:
            raise FormatError(f"expected {code.n} LLRs, got {llr.size}", lineno)
        res = dec.decode(llr)
        bits = res.bits[code.info_positions] if args.info_only else res.bits
        failures += not res.converged
        out.append("".join(map(str, bits)) + "\n")
    _emit("".join(out), args.out)
    if failures:
        print(f"{failures} of {len(out)} words did not converge", file=sys.stderr)


def _load_sim_config(path):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise FileNotFoundError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = set(data) - SIM_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def cmd_simulate(args):
    if args.rates:
        sources = []
        for r in args.rates.split(","):
            if r.strip() not in WIFI_RATES:
                raise ConfigError(f"unknown rate {r!r}; choose from {', '.join(WIFI_RATES)}")
            sources.append(WIFI_RATES[r.strip()])
    else:
        sources = [args.code]
    snrs = _snr_grid(args.snr_from, args.snr_to, args.snr_step)
    workers = args.workers if args.workers is not None else default_workers()
    for src in sources:
        code = load_code(src)
        cfg = SimConfig(code=src, snrs=snrs, decoder=_decoder_config(args, code.H),
                        channel=args.channel, fadings=args.fadings, interleave=args.interleave,
                        max_frames=args.frames, min_errors=args.min_errors, seed=args.seed,
                        workers=workers, all_zero=args.all_zero)
        res = run_fer(cfg, code)
        if args.out:
            prefix = args.out if len(sources) == 1 else f"{args.out}-{src}"
            res.save(prefix)
            print(f"{src}: wrote {prefix}.csv and {prefix}.json", file=sys.stderr)
        else:
            if len(sources) > 1:
                sys.stdout.write(f"# {src}\n")
            sys.stdout.write(res.to_csv())
        if args.target_fer:
            x = snr_at_fer(res, args.target_fer)
            shown = "not reached" if x is None else f"{x:.3f} dB"
            print(f"{src}: FER {args.target_fer:g} at {shown}", file=sys.stderr)


def cmd_sweep(args):
    code = load_code(args.code)
    grid = [float(v) for v in args.grid.split(",")]
    workers = args.workers if args.workers is not None else default_workers()
    cfg = SimConfig(code=args.code, snrs=(args.snr,), decoder=_decoder_config(args, code.H),
                    channel=args.channel, fadings=args.fadings, interleave=args.interleave,
                    max_frames=args.frames, min_errors=args.min_errors, seed=args.seed,
                    workers=workers, all_zero=args.all_zero)
    table = sweep_parameter(cfg, args.parameter, grid, code)
    _emit(table.to_csv(), args.out)
    v, f = table.best
    print(f"best {args.parameter} = {v:g} (FER {f:.3e})", file=sys.stderr)


def cmd_outage(args):
    rows = ["snr_db,outage,stderr"]
    for snr in _snr_grid(args.snr_from, args.snr_to, args.snr_step):
        # one seed for every point: common random numbers keep the curve monotone
        p = outage_probability(snr, args.rate, args.fadings, args.samples, args.seed, args.input)
        rows.append(f"{snr:.4f},{p:.6e},{outage_stderr(p, args.samples):.3e}")
    _emit("\n".join(rows) + "\n", args.out)


# -- parser -------------------------------------------------------------------

def _parse_rate(text):
    try:
        if "/" in text:
            a, b = text.split("/")
            return int(a) / int(b)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rate {text!r}") from None


def build_parser():
    parser = _Parser(prog="ldpclab", description="LDPC construction, decoding and simulation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a code and write its matrix")
    p.add_argument("kind", choices=("peg", "peg-ira", "root-check"))
    p.add_argument("-m", type=int, help="checks (peg, peg-ira)")
    p.add_argument("-n", type=int, help="variables (peg, peg-ira)")
    p.add_argument("--dv", type=int, default=3, help="variable (information) degree")
    p.add_argument("--nb", type=int, default=16, help="base columns (root-check)")
    p.add_argument("--mb", type=int, default=8, help="base rows (root-check)")
    p.add_argument("--lift", type=int, default=42, help="circulant size (root-check)")
    p.add_argument("--fadings", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="girth, cycle counts and root-check audit")
    p.add_argument("--code", required=True, help="builtin name, file or construction spec")
    p.add_argument("--fadings", type=int, default=2, help="blocks for the audit of non-root codes")
    p.add_argument("--no-cycles", action="store_true", help="skip cycle counting")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("encode", help="encode messages, one binary word per line")
    p.add_argument("--code", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode LLR words, one per line")
    p.add_argument("--code", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--info-only", action="store_true", help="print information bits only")
    p.add_argument("--out")
    _add_decoder_opts(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo FER/BER curve")
    p.add_argument("--config", help="JSON file with any of the flags below (flags win)")
    p.add_argument("--code", default="wifi-r12")
    p.add_argument("--rates", help="comma list of Wi-Fi rates (1/2,5/8,3/4,13/16); overrides --code")
    p.add_argument("--snr-from", type=float, default=0.0, help="Eb/N0 in dB")
    p.add_argument("--snr-to", type=float, default=3.0)
    p.add_argument("--snr-step", type=float, default=0.5)
    p.add_argument("--target-fer", type=float, help="report the Eb/N0 reaching this FER")
    p.add_argument("--out", help="output prefix for .csv and .json (default: CSV on stdout)")
    _add_decoder_opts(p)
    _add_channel_opts(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="grid search over alpha, beta or rho")
    p.add_argument("--code", default="wifi-r12")
    p.add_argument("--parameter", choices=("alpha", "beta", "rho"), required=True)
    p.add_argument("--grid", required=True, help="comma-separated values")
    p.add_argument("--snr", type=float, required=True, help="Eb/N0 in dB")
    p.add_argument("--out")
    _add_decoder_opts(p)
    _add_channel_opts(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("outage", help="block-fading outage probability curve")
    p.add_argument("--rate", type=_parse_rate, default=0.5)
    p.add_argument("--fadings", type=int, default=2)
    p.add_argument("--snr-from", type=float, default=0.0)
    p.add_argument("--snr-to", type=float, default=20.0)
    p.add_argument("--snr-step", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--input", choices=("gaussian", "bpsk"), default="gaussian")
    p.add_argument("--out")
    p.set_defaults(func=cmd_outage)
    return parser


def _parse(parser, argv):
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.config:
        # config values become defaults; explicit flags still win
        sim = parser._subparsers._group_actions[0].choices["simulate"]
        sim.set_defaults(**_load_sim_config(args.config))
        args = parser.parse_args(argv)
    return args


def main(argv=None):
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        args.func(args)
    except (ConfigError, ParameterError) as exc:
        print(f"ldpclab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FormatError, DimensionError, FileNotFoundError, OSError, LdpcError) as exc:
        print(f"ldpclab: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
