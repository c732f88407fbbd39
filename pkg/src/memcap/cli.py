"""
Command-line interface.

Exit status: 0 on success, 1 on usage errors (bad flags, out-of-range
values, unwritable output), 2 on numerical or physicality errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from typing import Optional, Sequence

import numpy as np

from . import capacity_opt, sweep_io
from .errors import MemcapError
from .gaussian_core import symplectic_values_bimodal
from .memory_channel import ChannelSpec, InputStrategy, tmsv_input_covariance
from .verification_oracle import (
    grid_search_optimum,
    monte_carlo_channel_moments,
    numeric_symplectic_spectrum,
    random_physical_covariance,
)

EXIT_USAGE = 1
EXIT_NUMERIC = 2


class UsageError(Exception):
    pass


class _ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ParseError(f"{self.prog}: error: {message}")


def _bounded(name, lo=None, hi=None, lo_open=False):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {text!r}")
        if not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"{name} must be finite, got {text!r}")
        if lo is not None and (value <= lo if lo_open else value < lo):
            raise argparse.ArgumentTypeError(f"{name} must be {'>' if lo_open else '>='} {lo:g}, got {text}")
        if hi is not None and value > hi:
            raise argparse.ArgumentTypeError(f"{name} must be <= {hi:g}, got {text}")
        return value

    return parse


def _positive_int(name, minimum):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {value}")
        return value

    return parse


def _memory_list(text):
    parse = _bounded("--memories", 0.0, 1.0)
    return tuple(parse(part) for part in text.split(","))


def _add_nbar(p):
    p.add_argument("--nbar", type=_bounded("--nbar", 0.0, lo_open=True), required=True,
                   help="mean input photon number per mode")


def _add_noise(p, allow_snr):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--noise", type=_bounded("--noise", 0.0), help="thermal photons added per mode (N)")
    if allow_snr:
        group.add_argument("--snr", type=_bounded("--snr", 0.0, lo_open=True), help="signal-to-noise ratio nbar/N")


def _add_memory(p):
    p.add_argument("--memory", type=_bounded("--memory", 0.0, 1.0), required=True,
                   help="noise correlation coefficient x in [0, 1]")


def _add_format(p):
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memcap", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("capacity", help="memoryless one-shot capacity g(nbar+N) - g(N)")
    _add_nbar(p)
    _add_noise(p, allow_snr=False)
    _add_format(p)

    p = sub.add_parser("rate", help="transmission rate of one (eta, y) strategy")
    _add_nbar(p)
    _add_noise(p, allow_snr=False)
    _add_memory(p)
    p.add_argument("--eta", type=_bounded("--eta", 0.0, 1.0), required=True)
    p.add_argument("--y", type=_bounded("--y", -1.0, 1.0), required=True)
    _add_format(p)

    for name, text in (("optimize", "optimal (eta, y), capacity, squeezing and gain"),
                       ("gain", "entanglement gain G")):
        p = sub.add_parser(name, help=text)
        _add_nbar(p)
        _add_noise(p, allow_snr=True)
        _add_memory(p)
        _add_format(p)

    p = sub.add_parser("sweep", help="figure preset sweeps as CSV or JSON")
    p.add_argument("--figure", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")
    p.add_argument("--nbar", type=_bounded("--nbar", 0.0, lo_open=True), help="figure 1 photon budget")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--noise", type=_bounded("--noise", 0.0), help="figure 1 noise photons")
    group.add_argument("--snr", type=_bounded("--snr", 0.0, lo_open=True), help="figures 2-4 nbar/N")
    p.add_argument("--memories", type=_memory_list, help="comma-separated memory coefficients")
    p.add_argument("--points", type=_positive_int("--points", 2), help="number of axis points")

    p = sub.add_parser("verify", help="run the oracle cross-checks")
    p.add_argument("--seed", type=_positive_int("--seed", 0), default=20050101)
    p.add_argument("--samples", type=_positive_int("--samples", 10_000), default=1_000_000,
                   help="Monte Carlo noise draws")
    p.add_argument("--draws", type=_positive_int("--draws", 1), default=1000,
                   help="random covariances for the spectrum check")
    _add_format(p)
    return parser


def _fmt(value) -> str:
    if isinstance(value, float):
        return sweep_io.format_number(value)
    return str(value)


def _print_record(record: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(record, indent=2) + "\n")
    else:
        for key, value in record.items():
            out.write(f"{key}: {_fmt(value)}\n")


def _channel(args) -> tuple[float, ChannelSpec]:
    noise = args.noise if args.noise is not None else args.nbar / args.snr
    return noise, ChannelSpec(noise, args.memory)


def _cmd_capacity(args, out):
    c1 = capacity_opt.memoryless_capacity(args.nbar, args.noise)
    _print_record({"nbar": args.nbar, "noise": args.noise, "capacity": c1}, args.format, out)


def _cmd_rate(args, out):
    _, channel = _channel(args)
    report = capacity_opt.transmission_rate(InputStrategy(args.nbar, args.eta, args.y), channel)
    _print_record(asdict(report), args.format, out)


def _cmd_optimize(args, out):
    noise, channel = _channel(args)
    opt = capacity_opt.optimal_strategy(args.nbar, channel)
    record = {"nbar": args.nbar, "noise": noise, "memory": args.memory, **asdict(opt)}
    _print_record(record, args.format, out)


def _cmd_gain(args, out):
    noise, channel = _channel(args)
    gain = capacity_opt.capacity_gain(args.nbar, channel)
    _print_record({"nbar": args.nbar, "noise": noise, "memory": args.memory, "gain": gain}, args.format, out)


def _cmd_sweep(args, out):
    kwargs = {"figure": args.figure, "output_format": args.format}
    if args.figure == 1:
        if args.snr is not None:
            raise UsageError("--snr applies to figures 2-4; use --nbar/--noise for figure 1")
        if args.nbar is not None:
            kwargs["nbar"] = args.nbar
        if args.noise is not None:
            kwargs["noise"] = args.noise
    else:
        if args.nbar is not None or args.noise is not None:
            raise UsageError("--nbar/--noise apply to figure 1; use --snr for figures 2-4")
        if args.snr is not None:
            kwargs["snr"] = args.snr
    if args.memories is not None:
        kwargs["memories"] = args.memories
    if args.points is not None:
        if args.figure == 1:
            axis = np.linspace(0.0, 1.0, args.points)
        else:
            axis = np.logspace(-2.0, 3.0, args.points)
        kwargs["axis_values"] = tuple(float(v) for v in axis)
    spec = sweep_io.SweepSpec(**kwargs)
    rows = sweep_io.run_sweep(spec)
    if args.out is not None:
        try:
            sweep_io.emit(rows, spec.output_format, args.out, spec.abscissa_label)
        except OSError as exc:
            raise UsageError(f"--out: {exc}") from exc
    else:
        out.write(sweep_io.emit(rows, spec.output_format, None, spec.abscissa_label))


def verification_suite(seed: int, samples: int, draws: int) -> list[dict]:
    """Run the oracle checks; each result records pass/fail, the measured value and its bound."""
    results = []
    rng = np.random.default_rng(seed)

    worst = 0.0
    for _ in range(draws):
        cov = random_physical_covariance(rng)
        closed = symplectic_values_bimodal(cov)
        numeric = numeric_symplectic_spectrum(cov)
        worst = max(worst, *(abs(a - b) / b for a, b in zip(closed, numeric)))
    results.append({"check": "spectrum", "value": worst, "bound": 1e-10})

    channel = ChannelSpec(1.0 / 3.0, 0.7)
    mc = monte_carlo_channel_moments(tmsv_input_covariance(0.2, 1.0), channel, samples, seed)
    results.append({"check": "monte_carlo", "value": mc.max_abs_deviation, "bound": 5e-3})

    opt = capacity_opt.optimal_strategy(1.0, channel)
    _, _, grid_rate = grid_search_optimum(1.0, channel, 201)
    results.append({"check": "grid_optimum", "value": abs(opt.capacity - grid_rate), "bound": 1e-4})

    memoryless = capacity_opt.optimal_strategy(1.0, ChannelSpec(1.0 / 3.0, 0.0))
    gap = abs(memoryless.capacity - capacity_opt.memoryless_capacity(1.0, 1.0 / 3.0))
    results.append({"check": "memoryless", "value": gap, "bound": 1e-9})

    for r in results:
        r["passed"] = r["value"] <= r["bound"]
        r["margin"] = r["bound"] - r["value"]
    return results


def _cmd_verify(args, out):
    results = verification_suite(args.seed, args.samples, args.draws)
    if args.format == "json":
        out.write(json.dumps({"seed": args.seed, "samples": args.samples, "checks": results}, indent=2) + "\n")
    else:
        out.write(f"seed: {args.seed}\n")
        for r in results:
            status = "PASS" if r["passed"] else "FAIL"
            out.write(f"{status} {r['check']}: value={_fmt(r['value'])} bound={_fmt(r['bound'])} "
                      f"margin={_fmt(r['margin'])}\n")
    return 0 if all(r["passed"] for r in results) else EXIT_NUMERIC


COMMANDS = {
    "capacity": _cmd_capacity,
    "rate": _cmd_rate,
    "optimize": _cmd_optimize,
    "gain": _cmd_gain,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ParseError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status = COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"memcap {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (MemcapError, ArithmeticError, ValueError) as exc:
        err.write(f"memcap {args.command}: numerical error: {exc}\n")
        return EXIT_NUMERIC
    return status or 0


def main() -> None:
    sys.exit(run())
