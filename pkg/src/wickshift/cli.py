"""
Experiment driver.

    wickshift <command> [--config cfg.json] [--out DIR] [--seed S] [--threads N]

Each command reads a JSON config (every key optional), writes ``<command>.csv``
and ``manifest.json`` into ``--out``.  Exit codes: 0 success, 1 usage error,
2 invalid configuration, 3 degenerate observability result.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bilinear import probe_samples, probe_to_csv
from .observability import (
    ControlProfile,
    ergodic_bound,
    ergodic_deviation,
    observability_scan,
    rows_to_csv,
    strichartz_cap,
)
from .optimality import DEFAULT_LEVELS, CounterexampleSpec, divergence_scan, scan_echo, scan_to_csv
from .spectral_core import FlowParams, FourierCoeffs, WickExponents, japanese
from .wick_square import convergence_scan, report_to_csv, report_to_json

COMMANDS = ("wick-converge", "wick-diverge", "bilinear-probe", "strichartz", "observability", "ergodic")

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(cfg, key, default, *, positive=False, integer=False):
    val = cfg.get(key, default)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key} must be a number")
    if integer and int(val) != val:
        raise ConfigError(f"{key} must be an integer")
    if positive and not val > 0:
        raise ConfigError(f"{key} must be positive")
    return int(val) if integer else float(val)


def _levels(cfg, default):
    levels = cfg.get("levels", default)
    if not isinstance(levels, list) or not levels or not all(isinstance(n, int) and n >= 0 for n in levels):
        raise ConfigError("levels must be a nonempty list of nonnegative integers")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ConfigError("levels must be strictly increasing")
    return levels


def _coeffs(spec, what):
    try:
        return FourierCoeffs({int(n): complex(re, im) for n, re, im in spec})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be a list of [n, re, im] triples") from exc


def _flow(cfg):
    return FlowParams(_number(cfg, "alpha", 2.0))


def _wick_data(cfg, cutoff):
    data = cfg.get("data", {"power": 0.6})
    if "coeffs" in data:
        return _coeffs(data["coeffs"], "data.coeffs")
    if "power" in data:
        N = int(data.get("cutoff", cutoff))
        n = np.arange(-N, N + 1)
        return FourierCoeffs.from_arrays(n, japanese(n) ** (-_number(data, "power", 0.6)))
    raise ConfigError("data needs either 'power' or 'coeffs'")


def run_wick_converge(cfg, ctx):
    p = _flow(cfg)
    exps = WickExponents.for_flow(_number(cfg, "sigma", 0.5, positive=True), p.alpha,
                                  _number(cfg, "lambda_slack", 0.01, positive=True))
    levels = _levels(cfg, [2**k for k in range(4, 10)])
    a = _wick_data(cfg, levels[-1])
    records = convergence_scan(a, exps, p, levels, _number(cfg, "t_samples", 16, integer=True))
    ctx["extra"]["report"] = json.loads(report_to_json(records))
    ctx["extra"]["exponents"] = {"sigma": exps.sigma, "s1": exps.s1, "s2": exps.s2}
    return report_to_csv(records), EXIT_OK


def run_wick_diverge(cfg, ctx):
    p = _flow(cfg)
    kind = cfg.get("kind", "time_regularity")
    sigma = _number(cfg, "sigma", 0.5, positive=True)
    spec = CounterexampleSpec(kind, sigma, cfg.get("epsilon", 0.1 if kind == "time_regularity" else None),
                              cfg.get("s2") if kind == "space_regularity" else None)
    if kind == "borderline":
        s1_default = 2 * sigma / (p.alpha - 1)
        s2_default = 0.5 - s1_default
    elif kind == "time_regularity":
        s1_default = (2 * sigma - 2 * spec.epsilon) / (p.alpha - 1)
        s2_default = 0.0
    else:
        s1_default = 2 * sigma / (p.alpha - 1)
        s2_default = spec.s2
    s1 = _number(cfg, "s1", s1_default)
    s2 = _number(cfg, "s2", s2_default)
    levels = _levels(cfg, DEFAULT_LEVELS[kind])
    rows = divergence_scan(spec, s1, s2, p, levels, workers=ctx["threads"])
    ctx["extra"]["echo"] = json.loads(scan_echo(spec, s1, s2, p))
    return scan_to_csv(kind, rows), EXIT_OK


def run_bilinear_probe(cfg, ctx):
    p = _flow(cfg)
    sigma = _number(cfg, "sigma", 0.5, positive=True)
    trials = _number(cfg, "trials", 100, positive=True, integer=True)
    max_mode = _number(cfg, "max_mode", 32, positive=True, integer=True)
    samples = probe_samples(sigma, p, trials, ctx["seed"], max_mode, workers=ctx["threads"])
    exps = WickExponents.for_flow(sigma, p.alpha)
    ctx["extra"]["summary"] = {
        "max_ratio": max(s.ratio for s in samples),
        "max_resonant_ratio": max(s.resonant_ratio for s in samples),
        "s1": exps.s1, "s2": exps.s2, "alpha": p.alpha, "sigma": sigma,
    }
    return probe_to_csv(ctx["seed"], samples), EXIT_OK


def run_strichartz(cfg, ctx):
    alphas = cfg.get("alphas", [cfg.get("alpha", 2.0)])
    T = _number(cfg, "T", 1.0, positive=True)
    max_modes = cfg.get("max_modes", [32, 64])
    samples = _number(cfg, "samples", 1000, positive=True, integer=True)
    rows = []
    for alpha in alphas:
        p = FlowParams(float(alpha))
        for M in max_modes:
            if not isinstance(M, int) or M < 1:
                raise ConfigError("max_modes must be positive integers")
            rows.append((p.alpha, T, M, strichartz_cap(p, T, M, samples, ctx["seed"])))
    return rows_to_csv(["alpha", "T", "maxmode", "ratio_cap"], rows), EXIT_OK


_ARC = re.compile(r"^arc\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$")


def parse_profile(spec, kmax: int) -> ControlProfile:
    """``"uniform"``, ``"one_plus_cos"``, ``"arc(beta,gamma)"`` or ``{"bhat": [[k, re, im], ...]}``."""
    if isinstance(spec, dict):
        return ControlProfile(_coeffs(spec.get("bhat"), "b.bhat"), "explicit")
    if spec == "uniform":
        return ControlProfile.uniform()
    if spec == "one_plus_cos":
        return ControlProfile.one_plus_cos()
    match = _ARC.match(str(spec))
    if match:
        try:
            beta, gamma = float(match.group(1)), float(match.group(2))
        except ValueError as exc:
            raise ConfigError(f"bad arc endpoints in {spec!r}") from exc
        return ControlProfile.arc(beta, gamma, kmax)
    raise ConfigError(f"unknown control profile {spec!r}")


def run_observability(cfg, ctx):
    p = _flow(cfg)
    T = _number(cfg, "T", 1.0, positive=True)
    levels = _levels(cfg, [4, 8, 16, 32, 64])
    b = parse_profile(cfg.get("b", "uniform"), 2 * levels[-1])
    results = observability_scan(b, p, T, levels)
    rows = [(N, r.lambda_min, r.C) for N, r in results]
    ctx["extra"]["profile"] = b.description
    status = EXIT_DEGENERATE if any(r.degenerate for _, r in results) else EXIT_OK
    return rows_to_csv(["N", "lambda_min", "C"], rows), status


def run_ergodic(cfg, ctx):
    f = _coeffs(cfg.get("f", [[m, 1.0, 0.0] for m in (-2, -1, 0, 1, 2)]), "f")
    shift = _number(cfg, "shift", 1.0)
    ns = cfg.get("ns", [1, 10, 100, 1000])
    if not all(isinstance(n, int) and n >= 1 for n in ns):
        raise ConfigError("ns must be positive integers")
    rows = [(n, ergodic_deviation(f, shift, n), ergodic_bound(f, shift, n)) for n in ns]
    return rows_to_csv(["n", "deviation", "bound"], rows), EXIT_OK


RUNNERS = {
    "wick-converge": run_wick_converge,
    "wick-diverge": run_wick_diverge,
    "bilinear-probe": run_bilinear_probe,
    "strichartz": run_strichartz,
    "observability": run_observability,
    "ergodic": run_ergodic,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wickshift", description="Wick square and observability experiments.")
    parser.add_argument("command", nargs="?", help=f"one of {', '.join(COMMANDS)}")
    parser.add_argument("--config", type=Path, help="JSON config file, '-' for stdin")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--seed", type=int, help="random seed (u64)")
    parser.add_argument("--threads", type=int, help="worker threads (fallback: WICKSHIFT_THREADS)")
    return parser


def _resolve_threads(flag):
    if flag is not None:
        return flag
    env = os.environ.get("WICKSHIFT_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError("WICKSHIFT_THREADS must be an integer") from None
    return 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = {}
    if args.config is not None:
        try:
            text = sys.stdin.read() if str(args.config) == "-" else args.config.read_text()
            cfg = json.loads(text)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"wickshift: cannot read config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        if not isinstance(cfg, dict):
            print("wickshift: config must be a JSON object", file=sys.stderr)
            return EXIT_CONFIG
    command = args.command or cfg.get("command")
    if command not in RUNNERS:
        parser.print_usage(sys.stderr)
        print(f"wickshift: unknown command {command!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.command and cfg.get("command", command) != command:
        print("wickshift: config command disagrees with the command line", file=sys.stderr)
        return EXIT_CONFIG

    start = time.perf_counter()
    try:
        threads = _resolve_threads(args.threads)
        if threads < 1:
            raise ConfigError("threads must be >= 1")
        seed = args.seed if args.seed is not None else cfg.get("seed", 0)
        if not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        ctx = {"seed": seed, "threads": threads, "extra": {}}
        body, status = RUNNERS[command](cfg, ctx)
    except ValueError as exc:
        print(f"wickshift: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / f"{command}.csv"
    csv_path.write_text(body)
    manifest = {
        "command": command,
        "config": cfg,
        "seed": seed,
        "threads": threads,
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "csv": csv_path.name,
        "exit_status": status,
        **ctx["extra"],
    }
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=float))
    if status == EXIT_DEGENERATE:
        print("wickshift: observability form is degenerate at this truncation", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
