"""Command-line entry point.

Subcommands: sweep (Monte Carlo SE sweeps to CSV), dataset (labeled JSONL
export), verify (randomized invariant suites), bench (selector timing).
Option precedence is flags > config file > defaults; defaults are P=100,
L=8, K=N_t=10, W=4, snr_db=15, R=3. Exit codes: 0 ok, 1 runtime or
invariant failure, 2 usage.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness, verify
from .errors import FamaportError, InvalidArgumentError, InvalidConfigError
from .model import SystemConfig, read_config_file
from .selectors import ALGORITHMS

DEFAULTS = {
    "P": 100,
    "L": 8,
    "K": 10,
    "N_t": None,
    "W": 4.0,
    "snr_db": 15.0,
    "seed": 0,
    "user_index": 0,
}

DEFAULT_SNRS = (5.0, 10.0, 15.0, 20.0, 25.0)
DEFAULT_R = 3


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="JSON config file")
    p.add_argument("--ports", "--P", dest="P", type=int, help="candidate ports P")
    p.add_argument("--active", "--L", dest="L", type=int, help="active ports L")
    p.add_argument("--users", "--K", dest="K", type=int, help="user count K")
    p.add_argument("--nt", "--N-t", dest="N_t", type=int, help="BS antennas (default K)")
    p.add_argument("--aperture", "--W", dest="W", type=float, help="aperture in wavelengths")
    p.add_argument("--snr-db", dest="snr_db", type=float, help="transmit SNR in dB")
    p.add_argument("--seed", type=int, help="master PRNG seed")
    p.add_argument("--user-index", dest="user_index", type=int, help="simulated user (0-based)")


def _build_config(args: argparse.Namespace) -> SystemConfig:
    values = dict(DEFAULTS)
    if args.config:
        values.update(read_config_file(args.config))
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return SystemConfig(
        P=values["P"],
        L=values["L"],
        K=values["K"],
        W=values["W"],
        snr_db=values["snr_db"],
        seed=values["seed"],
        N_t=values["N_t"],
        user_index=values["user_index"],
    )


def _parse_values(param: str, text: str) -> tuple:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise InvalidArgumentError("--values must be a nonempty comma-separated list")
    if param == "snr_db":
        return tuple(float(s) for s in items)
    return tuple(int(s) for s in items)


def _parse_algs(text: str) -> tuple[str, ...]:
    algs = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = [a for a in algs if a not in ALGORITHMS]
    if unknown:
        raise InvalidArgumentError(
            f"unknown algorithm ids: {unknown}; valid: {', '.join(sorted(ALGORITHMS))}"
        )
    if not algs:
        raise InvalidArgumentError("--algs must name at least one algorithm")
    return algs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famaport",
        description="Multi-port selection simulator for slow-FAMA fluid-antenna receivers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="Monte Carlo SE sweep over one parameter")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=harness.SWEEPABLE)
    p_sweep.add_argument("--values", required=True, help="comma-separated swept values")
    p_sweep.add_argument("--algs", default="sfama,dc,cuma,gfwd,gfwds,geport")
    p_sweep.add_argument("--trials", type=int, default=200)
    p_sweep.add_argument("--r", dest="R", type=int, default=DEFAULT_R, help="swap rounds for gfwds")
    p_sweep.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ds = sub.add_parser("dataset", help="export a labeled JSONL dataset")
    _add_config_flags(p_ds)
    p_ds.add_argument("--n", type=int, required=True, help="number of records")
    p_ds.add_argument("--snrs", default=",".join(str(s) for s in DEFAULT_SNRS))
    p_ds.add_argument("--r", dest="R", type=int, default=DEFAULT_R)
    p_ds.add_argument("--golden", action="store_true", help="write the reduced feature-only schema")
    p_ds.add_argument("--out", required=True, help="output JSONL path")
    p_ds.set_defaults(func=cmd_dataset)

    p_ver = sub.add_parser("verify", help="run the randomized invariant suites")
    _add_config_flags(p_ver)
    p_ver.add_argument("--trials", type=int, default=10000)
    p_ver.set_defaults(func=cmd_verify)

    p_bench = sub.add_parser("bench", help="selector timing table")
    _add_config_flags(p_bench)
    p_bench.add_argument("--algs", default="sfama,dc,cuma,gfwd,gfwds,geport")
    p_bench.add_argument("--trials", type=int, default=30)
    p_bench.add_argument("--r", dest="R", type=int, default=DEFAULT_R)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    spec = harness.SweepSpec(
        base=cfg,
        swept_parameter=args.param,
        values=_parse_values(args.param, args.values),
        algorithms=_parse_algs(args.algs),
        trials=args.trials,
        R=args.R,
        threads=args.threads,
    )
    records = harness.run_sweep(spec)
    harness.write_sweep_csv(records, args.out)
    print(f"{'param':<8}{'value':>10}{'algorithm':>12}{'mean_se':>12}{'std_se':>10}")
    for r in records:
        print(f"{r.swept_param:<8}{r.value:>10}{r.algorithm:>12}{r.mean_se:>12.4f}{r.std_se:>10.4f}")
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def cmd_dataset(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise InvalidArgumentError(f"--n must be >= 1, got {args.n}")
    cfg = _build_config(args)
    snrs = tuple(float(s) for s in args.snrs.split(",") if s.strip())
    if not snrs:
        raise InvalidArgumentError("--snrs must be a nonempty comma-separated list")
    if args.golden:
        harness.export_golden(cfg, args.n, snrs, args.out)
    else:
        harness.export_dataset(cfg, args.n, snrs, args.R, args.out)
    print(f"wrote {args.n} records to {args.out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise InvalidArgumentError(f"--trials must be >= 1, got {args.trials}")
    seed = args.seed if args.seed is not None else 0
    results = verify.run_all(args.trials, seed)
    failed = False
    for res in results:
        print(res.summary())
        for failure in res.failures[:5]:
            print(f"  violation: {failure}")
        if res.failures:
            failed = True
    return 1 if failed else 0


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    rows = harness.bench_timing(cfg, _parse_algs(args.algs), args.trials, args.R)
    print(format_bench_header(cfg))
    print(harness.format_timing_table(rows))
    return 0


def format_bench_header(cfg: SystemConfig) -> str:
    return (
        f"timing at P={cfg.P}, L={cfg.L}, K={cfg.K}, N_t={cfg.N_t}, "
        f"W={cfg.W}, snr_db={cfg.snr_db}"
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidArgumentError, InvalidConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FamaportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
