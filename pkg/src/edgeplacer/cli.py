"""Command-line front door: run, sweep, verify, gen-trace.

A thin shell over the harness; every behavior here is reachable through the
library API. Exit codes: 0 success, 2 configuration problem, 3 trace format
problem, 4 verification failure.
"""

import argparse
import os
import sys

from . import harness

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TRACE = 3
EXIT_VERIFY = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="edgeplacer",
        description="Online edge service placement simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, desc in (("run", "execute one configured run"),
                       ("sweep", "execute one run per sweep axis value")):
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", help="output CSV path (overrides config)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key, e.g. policy.v=900 (repeatable)")
        p.add_argument("--per-slot", action="store_true",
                       help="also dump per-slot CSV next to the output")
        p.add_argument("--seed", type=int, help="override scenario.seed")

    p = sub.add_parser("verify", help="run the brute-force oracle suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--instances", type=int, default=200)

    p = sub.add_parser("gen-trace", help="write a synthetic mobility trace CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--regions", type=int, default=6)
    p.add_argument("--length", type=int, default=1400)
    p.add_argument("--stickiness", type=float, default=0.7)

    return parser


def _slots_path(out_path: str, index=None) -> str:
    stem, ext = os.path.splitext(out_path)
    if index is None:
        return f"{stem}_slots{ext or '.csv'}"
    return f"{stem}_slots_{index}{ext or '.csv'}"


def _load(args) -> harness.ExperimentConfig:
    raw = harness.load_config_file(args.config)
    harness.apply_overrides(raw, args.set)
    if args.seed is not None:
        raw.setdefault("scenario", {})["seed"] = args.seed
    if args.out is not None:
        raw["output"] = args.out
    config = harness.config_from_dict(raw)
    if config.output is None:
        raise harness.ConfigError("no output path: set --out or config output")
    return config


def _cmd_run(args) -> int:
    config = _load(args)
    rec = harness.run(config)
    harness.write_summary_csv(config.output, [("", config.policy, rec)])
    if args.per_slot:
        harness.write_per_slot_csv(_slots_path(config.output), rec)
    print(f"wrote {config.output}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = _load(args)
    results = harness.sweep(config)
    harness.write_summary_csv(
        config.output, [(v, config.policy, rec) for v, rec in results])
    if args.per_slot:
        for i, (_, rec) in enumerate(results):
            harness.write_per_slot_csv(_slots_path(config.output, i), rec)
    print(f"wrote {config.output}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    ok = True
    matches, total, mismatches = harness.verify_frame_oracles(
        seed=args.seed, instances=args.instances)
    print(f"{matches}/{total} oracle matches")
    ok &= matches == total

    wu_total = max(args.instances // 2, 1)
    matches_wu, _, mismatches_wu = harness.verify_frame_oracles(
        seed=args.seed + 1, instances=wu_total, anchor_low=-20.0)
    print(f"{matches_wu}/{wu_total} oracle matches (weight anchor)")
    ok &= matches_wu == wu_total

    passes, checks, bound_failures = harness.verify_horizon_bound(seed=args.seed)
    print(f"{passes}/{checks} horizon bound holds")
    ok &= passes >= 0.9 * checks

    for line in mismatches + mismatches_wu + bound_failures:
        print(f"  {line}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_gen_trace(args) -> int:
    trace = harness.synthetic_trace(args.seed, args.regions, args.length,
                                    args.stickiness)
    harness.write_trace_csv(args.out, trace)
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "sweep": _cmd_sweep, "verify": _cmd_verify,
               "gen-trace": _cmd_gen_trace}[args.command]
    try:
        return handler(args)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except harness.TraceFormatError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_TRACE


if __name__ == "__main__":
    sys.exit(main())
