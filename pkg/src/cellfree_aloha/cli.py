"""Command-line entry point for throughput experiments.

Parameter precedence: built-in defaults, then the --config file, then
explicit command-line flags.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .detection import NETWORK_MODES

_PREFACTORS = {"2B": 2.0, "B": 1.0}

DEFAULT_PI_GRID = tuple(i / 20.0 for i in range(1, 21))
DEFAULT_N_GRID = (1, 2, 4, 8)
DEFAULT_L_GRID = (1, 2, 4, 8, 16, 32, 64)


def _add_common_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="flat key = value parameter file")
    p.add_argument(
        "--network",
        action="append",
        metavar="NAME",
        help=f"network(s) to simulate, repeatable or comma-separated; one of {', '.join(NETWORK_MODES)}",
    )
    p.add_argument("--trials", type=int, help="Monte Carlo slots per point")
    p.add_argument("--seed", type=int, help="base seed of the run")
    p.add_argument("--out", metavar="FILE", help="CSV destination (default: stdout)")
    p.add_argument("--plot", metavar="FILE", help="optional SVG chart destination")
    p.add_argument(
        "--fixed-layout",
        action="store_true",
        default=None,
        help="freeze one node layout instead of redrawing it every trial",
    )
    p.add_argument(
        "--throughput-prefactor",
        choices=sorted(_PREFACTORS),
        help="rate prefactor convention: twice the bandwidth (2B, default) or once (B)",
    )
    p.add_argument("--users", type=int, help="number of potential users")
    p.add_argument("--aps", type=int, dest="num_aps", help="number of APs")
    p.add_argument("--antennas-per-ap", type=int, help="antennas per AP")
    p.add_argument("--cluster-size", type=int, help="APs serving each user-centric user")
    p.add_argument("--tx-power-dbm", type=float, help="per-user transmit power")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellfree-aloha",
        description=(
            "Monte Carlo sum-throughput of slotted ALOHA with capture over "
            "cell-free, user-centric, cellular massive MIMO and small-cell uplinks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser("point", help="simulate one parameter point")
    point.add_argument("--pi", type=float, help="activation probability")
    _add_common_arguments(point)

    swp = sub.add_parser("sweep-pi", help="sweep the activation probability")
    swp.add_argument("--grid", metavar="V1,V2,...", help="grid values (default 0.05..1.0 step 0.05)")
    _add_common_arguments(swp)

    swn = sub.add_parser("sweep-n", help="sweep the antennas per AP")
    swn.add_argument("--grid", metavar="V1,V2,...", help="grid values (default 1,2,4,8)")
    _add_common_arguments(swn)

    swl = sub.add_parser("sweep-l", help="sweep the AP count at fixed total antennas")
    swl.add_argument("--grid", metavar="V1,V2,...", help="grid values (default 1,2,4,8,16,32,64)")
    _add_common_arguments(swl)

    return parser


def _parse_grid(text, cast, default):
    if text is None:
        return default
    values = [cast(part.strip()) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError("empty sweep grid")
    return values


def _config_from_args(args) -> harness.SimulationConfig:
    overrides = {}
    if args.config:
        overrides.update(harness.load_config_file(args.config))
    if args.network:
        overrides["networks"] = tuple(
            name.strip() for chunk in args.network for name in chunk.split(",") if name.strip()
        )
    for key in ("trials", "seed", "users", "num_aps", "antennas_per_ap", "cluster_size", "tx_power_dbm"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.fixed_layout:
        overrides["fixed_layout"] = True
    if args.throughput_prefactor:
        overrides["throughput_prefactor"] = _PREFACTORS[args.throughput_prefactor]
    if getattr(args, "pi", None) is not None:
        overrides["activation_probability"] = args.pi
    return harness.config_from_overrides(overrides)


def _run_command(args, cfg):
    if args.command == "point":
        return [harness.run_point(cfg, nw) for nw in cfg.networks]
    if args.command == "sweep-pi":
        return harness.sweep_pi(cfg, _parse_grid(args.grid, float, DEFAULT_PI_GRID))
    if args.command == "sweep-n":
        return harness.sweep_n(cfg, _parse_grid(args.grid, int, DEFAULT_N_GRID))
    if args.command == "sweep-l":
        return harness.sweep_l(cfg, _parse_grid(args.grid, int, DEFAULT_L_GRID))
    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        results = _run_command(args, cfg)
        if args.out:
            harness.emit_csv(results, args.out)
        else:
            sys.stdout.write(harness.format_csv(results))
        if args.plot:
            harness.plot_results(results, args.plot)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
