"""Command-line front end.

Subcommands cover the package's report surface: orbit listings, PBM
rasters, the exclusion-horizon scan, exhaustive range verification, the
random-orbit experiment table, the head/tail audit, and the structured
family probes.  Output is text and files only (CSV, PBM); everything is
deterministic given the flags.

Exit codes: 0 success, 1 property violation or counterexample, 2 usage
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import (
    DivergenceError,
    MapKind,
    TrajectoryRecord,
    audit_length_deltas,
    family_orbit_probe,
    kstar_scan,
    run_trajectory,
    verify_range,
)
from .exact import BinaryFraction, to_decimal
from .harness import ExperimentConfig, run_table, write_csv
from .maps import Family
from .raster import orbit_rows, render_pbm

__all__ = ["main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _parse_start(text: str) -> int | BinaryFraction:
    """An integer start, or a digit-string start given as bits:10110."""
    if text.startswith("bits:"):
        return BinaryFraction.from_bits(text[len("bits:") :])
    try:
        return int(text, 10)
    except ValueError:
        raise ValueError(f"start must be an integer or bits:<digits>, got {text!r}") from None


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from None


def _row_fields(record: TrajectoryRecord, i: int) -> tuple[int, str, int]:
    it = record.iterates[i]
    if record.map_kind is MapKind.BINARY:
        return it.numerator, it.to_bits(), it.length
    return it, format(it, "b"), it.bit_length()


def _step_parity_split(record: TrajectoryRecord) -> tuple[int, int]:
    """(odd steps, halving steps) taken along a classic-map trajectory."""
    odd = sum(1 for v in record.iterates[:-1] if v % 2)
    return odd, len(record.iterates) - 1 - odd


def cmd_trajectory(args: argparse.Namespace) -> int:
    kind = MapKind(args.map)
    start = _parse_start(args.start)
    if kind is not MapKind.BINARY and not isinstance(start, int):
        raise ValueError("digit-string starts apply to the binary map only")
    record = run_trajectory(start, kind, args.max_steps)
    summary: dict[str, object] = {
        "stopping_time": record.stopping_time,
        "hailstone_index": record.hailstone_index,
        "max_length": record.max_length,
    }
    if kind is MapKind.COLLATZ:
        odd, halving = _step_parity_split(record)
        summary["odd_steps"] = odd
        summary["halving_steps"] = halving
    if args.format == "json":
        payload = {
            "map": kind.value,
            **summary,
            "steps": [
                {"step": i, "value": v, "bits": b, "length": n}
                for i, (v, b, n) in (
                    (i, _row_fields(record, i)) for i in range(len(record.iterates))
                )
            ],
        }
        print(json.dumps(payload))
    else:
        print("step,value,bits,length")
        for i in range(len(record.iterates)):
            value, bits, length = _row_fields(record, i)
            print(f"{i},{value},{bits},{length}")
        for key, val in summary.items():
            print(f"# {key}={'none' if val is None else val}")
    return EXIT_OK


def cmd_raster(args: argparse.Namespace) -> int:
    start = _parse_start(args.start)
    record = run_trajectory(start, MapKind.BINARY, args.max_steps)
    rows = orbit_rows(record.iterates)
    text = render_pbm(rows)
    with open(args.out, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    width = max(len(r) for r in rows)
    print(f"wrote {width}x{len(rows)} raster to {args.out}")
    if record.capped:
        print(f"note: orbit capped after {args.max_steps} steps")
    return EXIT_OK


def cmd_kstar(args: argparse.Namespace) -> int:
    report = kstar_scan(args.ell, args.k_max, collect_margins=True)
    print(f"ell = {report.ell}")
    if report.k_star is None:
        print(f"no reversal up to k = {report.k_max}: every horizon excluded")
        return EXIT_OK
    print(f"k* = {report.k_star}")
    print(f"c = {to_decimal(report.critical, 6)}")
    print(f"eps = {to_decimal(report.epsilon, 6)}")
    safe = all(m >= 0 for m in report.margins[:-1])
    print(f"exact margin check for k < {report.k_star}: {'pass' if safe else 'FAIL'}")
    return EXIT_OK if safe else EXIT_VIOLATION


def cmd_verify(args: argparse.Namespace) -> int:
    result = verify_range(args.ell, workers=args.workers, step_cap=args.step_cap)
    print(f"verified {result.verified_count} odd starts below 2^{result.ell}")
    print(f"max stopping time {result.max_stopping_time} at start {result.worst_start}")
    return EXIT_OK


def cmd_table1(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        lengths=_parse_int_list(args.lengths),
        samples=args.samples,
        runs=args.runs,
        master_seed=args.seed,
        step_cap=args.step_cap,
    )
    summary = run_table(config, workers=args.workers)
    for cell in summary.cells:
        print(
            f"length={cell.length} samples={cell.samples} runs={cell.runs} "
            f"max_length_delta=+{cell.max_length_delta} "
            f"max_stop_time={cell.max_stop_time} capped={cell.capped_count}"
        )
    if args.out:
        write_csv(summary, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    failed = False
    for ell in _parse_int_list(args.ell):
        summary = audit_length_deltas(args.samples, ell, seed=args.seed)
        print(f"ell={ell}: {summary.samples} samples, {len(summary.violations)} violations")
        for witness in summary.violations:
            print(f"  violation: {witness}", file=sys.stderr)
        failed = failed or not summary.ok
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_families(args: argparse.Namespace) -> int:
    kind = Family[args.kind.upper()]
    probe = family_orbit_probe(kind, args.k_max, step_cap=args.step_cap)
    if kind in (Family.ALPHA, Family.BETA):
        bad = {k: s for k, s in probe.stopping_times.items() if s != 2}
        if bad or probe.unresolved:
            for k, s in sorted(bad.items()):
                print(f"violation: {args.kind} k={k} stopped in {s} steps, expected 2",
                      file=sys.stderr)
            for k in probe.unresolved:
                print(f"violation: {args.kind} k={k} unresolved at step cap", file=sys.stderr)
            return EXIT_VIOLATION
        print(f"{args.kind}: all {probe.k_max} members stop in exactly 2 steps")
        return EXIT_OK
    resolved = len(probe.stopping_times)
    print(f"{args.kind}: {resolved} of {probe.k_max} members reached the ground state"
          f" (max stopping time {probe.max_stop})")
    if probe.unresolved:
        print(f"unresolved at step cap {probe.step_cap}: k = "
              + ",".join(str(k) for k in probe.unresolved))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatzbin",
        description="Exact-arithmetic Collatz dynamics on binary fractions in [1/2, 1).",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("trajectory", help="list one orbit with its length profile")
    p.add_argument("--start", required=True, help="integer, or bits:<digits> for the binary map")
    p.add_argument("--map", choices=["b", "r", "c"], default="b",
                   help="binary interval map, reduced integer map, or classic map")
    p.add_argument("--max-steps", type=int, default=10**6)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("raster", help="render a binary-map orbit as a PBM bit image")
    p.add_argument("--start", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-steps", type=int, default=10**6)
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("kstar", help="scan for the first non-excluded period horizon")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--k-max", type=int, default=1000)
    p.set_defaults(func=cmd_kstar)

    p = sub.add_parser("verify", help="exhaustively verify all odd starts below 2^ell")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--step-cap", type=int, default=10**6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table1", help="random-orbit worst-case table, CSV output")
    p.add_argument("--lengths", default="50,100")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=20250815)
    p.add_argument("--step-cap", type=int, default=10**6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("audit", help="randomized audit of the head/tail length table")
    p.add_argument("--ell", required=True, help="comma-separated digit lengths")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("families", help="probe the 111000-block start families")
    p.add_argument("--kind", choices=["alpha", "beta", "gamma"], required=True)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--step-cap", type=int, default=10**6)
    p.set_defaults(func=cmd_families)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
