"""Command-line experiment drivers.

Every subcommand writes a CSV table to ``--out`` (default
``<subcommand>.csv``) and prints a JSON summary on standard output.

Exit codes: 0 success, 1 property failure, 2 invalid configuration,
3 optimizer failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import experiments as ex
from .exceptions import DiscordLabError, OptimizerError
from .optimize import OptimizerConfig

EXIT_OK, EXIT_PROPERTY, EXIT_CONFIG, EXIT_OPTIMIZER = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if v == 0:
        return "0"
    return f"{v:.12g}"


def write_csv(path, columns, rows):
    path = Path(path)
    if path.parent and not path.parent.exists():
        raise ConfigError(f"output directory {path.parent} does not exist")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(v) for v in row])


def _steps(lo, hi, n):
    if n < 2:
        raise ConfigError("sweeps need at least 2 steps")
    return [float(x) for x in np.linspace(lo, hi, n)]


def _positive(name, v):
    if v < 1:
        raise ConfigError(f"--{name} must be >= 1")


def _cfg(args) -> OptimizerConfig:
    return OptimizerConfig(
        multistarts=args.multistarts, grid_resolution=args.grid, seed=args.seed
    )


def cmd_dqc1(args):
    if args.sweep == "n":
        if args.n_min < 1 or args.n_max < args.n_min:
            raise ConfigError("need 1 <= n-min <= n-max")
        if args.n_max - args.n_min < 1:
            raise ConfigError("sweeps need at least 2 steps")
        if not 0 <= args.mu <= 1:
            raise ConfigError("--mu must lie in [0, 1]")
        points = [(args.mu, n) for n in range(args.n_min, args.n_max + 1)]
    else:
        mus = _steps(args.mu_min, args.mu_max, args.mu_steps)
        if min(mus) < 0 or max(mus) > 1:
            raise ConfigError("mu range must lie in [0, 1]")
        points = [(mu, args.n) for mu in mus]
    if args.unitary == "laf2" and any(n != 3 for _, n in points):
        raise ConfigError("the laf2 unitary needs n = 3")
    if args.unitary == "traceless" and any(n < 2 for _, n in points):
        raise ConfigError("traceless unitaries need n >= 2")
    return ex.dqc1(points, args.unitary, args.seed, _cfg(args), exact=not args.no_exact)


def cmd_werner(args):
    lams = _steps(args.lambda_min, args.lambda_max, args.lambda_steps)
    if min(lams) < 0 or max(lams) > 1:
        raise ConfigError("lambda range must lie in [0, 1]")
    dims = args.d if args.d else list(range(args.d_min, args.d_max + 1))
    if min(dims) < 2:
        raise ConfigError("d must be >= 2")
    return ex.werner(lams, dims)


def cmd_hierarchy(args):
    _positive("samples", args.samples)
    _positive("dB", args.dB)
    return ex.hierarchy(args.dB, args.samples, args.seed)


def cmd_scatter2q(args):
    _positive("samples", args.samples)
    return ex.scatter2q(args.samples, args.seed, _cfg(args))


def cmd_gaussian(args):
    _positive("samples", args.samples)
    return ex.gaussian(args.samples, args.seed, _cfg(args))


def cmd_gaussian_sts(args):
    _positive("samples", args.samples)
    return ex.gaussian_sts(args.samples, args.seed, _cfg(args))


def cmd_qubitosc(args):
    ps = _steps(args.p_min, args.p_max, args.p_steps)
    fs = _steps(0.0, 1.0, args.r_steps)
    if min(ps) < 0 or max(ps) > 1:
        raise ConfigError("p range must lie in [0, 1]")
    if args.nbar < 0:
        raise ConfigError("--nbar must be nonnegative")
    return ex.qubitosc(ps, fs, args.beta, args.nbar, args.cutoff, _cfg(args))


def cmd_check(args):
    from .checks import run_checks

    results = run_checks(seed=args.seed, scale=args.scale)
    rows = [(name, int(ok), detail) for name, ok, detail in results]
    failed = [r[0] for r in rows if not r[1]]
    return ("check", "passed", "detail"), rows, {"failed": failed, "total": len(rows)}


def _add_common(p, samples=None):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV output path (default: <subcommand>.csv)")
    p.add_argument("--multistarts", type=int, default=24)
    p.add_argument("--grid", type=int, default=64, help="Bloch pre-scan points per angle")
    if samples is not None:
        p.add_argument("--samples", type=int, default=samples)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discordlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dqc1", help="DQC1 output-state measures")
    _add_common(p)
    p.add_argument("--sweep", choices=["n", "mu"], default="n")
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mu-min", type=float, default=0.05)
    p.add_argument("--mu-max", type=float, default=1.0)
    p.add_argument("--mu-steps", type=int, default=20)
    p.add_argument("--unitary", choices=["traceless", "laf2"], default="traceless")
    p.add_argument("--no-exact", action="store_true", help="skip the entropic optimisation")
    p.set_defaults(func=cmd_dqc1)

    p = sub.add_parser("werner", help="Werner-state measures over lambda and d")
    _add_common(p)
    p.add_argument("--d", type=int, action="append", help="dimension (repeatable)")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--lambda-min", type=float, default=0.0)
    p.add_argument("--lambda-max", type=float, default=1.0)
    p.add_argument("--lambda-steps", type=int, default=51)
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("hierarchy", help="rescaled discord vs negativity on random 2 x dB states")
    _add_common(p, samples=10_000)
    p.add_argument("--dB", type=int, default=2)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("scatter2q", help="entropic vs rescaled discord on random two-qubit states")
    _add_common(p, samples=1000)
    p.set_defaults(func=cmd_scatter2q, grid=16)

    p = sub.add_parser("gaussian", help="Gaussian rescaled discord of random covariances")
    _add_common(p, samples=1000)
    p.set_defaults(func=cmd_gaussian)

    p = sub.add_parser("gaussian-sts", help="squeezed-thermal closed form vs numeric maximisation")
    _add_common(p, samples=200)
    p.set_defaults(func=cmd_gaussian_sts)

    p = sub.add_parser("qubitosc", help="qubit-oscillator measures over (p, r)")
    _add_common(p)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--nbar", type=float, default=2.0)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--p-min", type=float, default=0.1)
    p.add_argument("--p-max", type=float, default=0.9)
    p.add_argument("--p-steps", type=int, default=5)
    p.add_argument("--r-steps", type=int, default=5)
    p.set_defaults(func=cmd_qubitosc, grid=16)

    p = sub.add_parser("check", help="run the invariant/property suite")
    _add_common(p)
    p.add_argument("--scale", type=float, default=1.0, help="sample-count multiplier")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.multistarts < 1 or args.grid < 1:
            raise ConfigError("--multistarts and --grid must be >= 1")
        columns, rows, summary = args.func(args)
        out = args.out or f"{args.command}.csv"
        write_csv(out, columns, rows)
    except OptimizerError as err:
        print(json.dumps({"error": str(err), "kind": "optimizer"}), file=sys.stderr)
        return EXIT_OPTIMIZER
    except (ConfigError, DiscordLabError, ValueError) as err:
        print(json.dumps({"error": str(err), "kind": "config"}), file=sys.stderr)
        return EXIT_CONFIG
    config = {k: v for k, v in vars(args).items() if k != "func"}
    report = {
        "version": __version__,
        "command": args.command,
        "config": config,
        "output": str(out),
        "rows": len(rows),
        "summary": summary,
        "wall_time_s": round(time.perf_counter() - start, 3),
    }
    print(json.dumps(report, sort_keys=True, default=str))
    if args.command == "check" and summary["failed"]:
        return EXIT_PROPERTY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
