"""Command-line entry point: run scenarios, emit CSV matrices, self-check.

Exit codes: 0 success, 1 usage error, 2 acceptance failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .bench import PROTOCOL_ORDER, emit_csv, run_scenario
from .scenarios import BUILTIN_SCENARIOS, DEFAULT_SEED_BASE, parse_scenario


def _seed_default() -> int:
    env = os.environ.get("NETLAB_SEED")
    return int(env) if env else DEFAULT_SEED_BASE


def _load_scenario(name_or_path: str):
    if name_or_path in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[name_or_path]
    path = Path(name_or_path)
    if path.is_file():
        return parse_scenario(path.read_text())
    return None


def _cmd_run(args) -> int:
    spec = _load_scenario(args.scenario)
    if spec is None:
        print(f"error: unknown scenario {args.scenario!r}; "
              f"built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))}", file=sys.stderr)
        return 1
    protocols = [p.strip() for p in args.protocols.split(",") if p.strip()]
    for proto in protocols:
        if proto not in PROTOCOL_ORDER:
            print(f"error: unknown protocol {proto!r}; "
                  f"choose from {', '.join(PROTOCOL_ORDER)}", file=sys.stderr)
            return 1
    spec = replace(spec, seed_base=args.seed, repetitions=args.reps)
    records = run_scenario(spec, protocols, fec=args.fec == "on")
    csv_text = emit_csv(records)
    if args.out:
        Path(args.out).write_text(csv_text)
        print(f"wrote {len(records)} records to {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_matrix(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in sorted(BUILTIN_SCENARIOS):
        spec = replace(BUILTIN_SCENARIOS[name], seed_base=args.seed)
        records = run_scenario(spec)
        (out_dir / f"{name}.csv").write_text(emit_csv(records))
        print(f"{name}: {len(records)} records")
    return 0


def _cmd_check(args) -> int:
    from .acceptance import run_acceptance

    passed = run_acceptance(quick=args.quick)
    return 0 if passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netlab",
        description="Deterministic impaired-link benchmark of TCP, QUIC-like "
                    "and smUDP transports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario and emit CSV")
    run_p.add_argument("--scenario", required=True,
                       help="built-in name or path to a scenario file")
    run_p.add_argument("--protocols", default=",".join(PROTOCOL_ORDER),
                       help="comma-separated subset of tcp,quic,smudp")
    run_p.add_argument("--seed", type=int, default=_seed_default())
    run_p.add_argument("--reps", type=int, default=5)
    run_p.add_argument("--out", help="output CSV path (default: stdout)")
    run_p.add_argument("--fec", choices=["on", "off"], default="on",
                       help="toggle smUDP forward error correction")
    run_p.set_defaults(func=_cmd_run)

    matrix_p = sub.add_parser("matrix", help="run all built-in scenarios")
    matrix_p.add_argument("--all", action="store_true",
                          help="run every built-in scenario (the default)")
    matrix_p.add_argument("--seed", type=int, default=_seed_default())
    matrix_p.add_argument("--out", default="results",
                          help="output directory, one CSV per scenario")
    matrix_p.set_defaults(func=_cmd_matrix)

    check_p = sub.add_parser("check", help="run the acceptance property suite")
    check_p.add_argument("--quick", action="store_true",
                         help="skip the long benchmark-trend criteria")
    check_p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
