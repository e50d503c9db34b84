"""Command line entry point: ``coringkit COMMAND INSTANCE [OBJECT ...] [options]``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .commands import COMMANDS, CommandError, run_command
from .instance import InstanceError, parse_instance
from .linalg import parse_field
from .recheck import confirm_witness
from .report import INPUT_ERROR, Report, parse_report


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coringkit",
                description="Construct and verify corings, comodules and equivalence criteria "
                            "from an instance file.")
    p.add_argument("command", help=f"one of: {', '.join(COMMANDS)}")
    p.add_argument("instance", help="instance file")
    p.add_argument("objects", nargs="*", help="object names (default: last declared of each kind)")
    p.add_argument("--field", help="override the field: rationals or gf:p")
    p.add_argument("--branch", help="criterion branch (equiv-sigma) or side (graded-induction)")
    p.add_argument("--samples", type=int, help="cap on sample modules per spot check")
    p.add_argument("--witness", help="report file whose counterexample validate should confirm")
    return p


def _run(argv: list[str]) -> tuple[Report, float]:
    args = build_parser().parse_args(argv)
    if args.command not in COMMANDS:
        raise CommandError(f"unknown command {args.command!r}")
    if args.witness and args.command != "validate":
        raise CommandError("--witness is only accepted by validate")
    if args.samples is not None and args.samples < 0:
        raise CommandError("--samples must be non-negative")
    try:
        field = parse_field(args.field) if args.field else None
    except ValueError as e:
        raise CommandError(str(e)) from None
    t0 = time.perf_counter()
    ws = parse_instance(args.instance, field)
    options = {"branch": args.branch, "samples": args.samples}
    if args.witness:
        try:
            block = parse_report(Path(args.witness).read_text())
        except OSError as e:
            raise CommandError(f"cannot read {args.witness}: {e.strerror}") from None
        except ValueError as e:
            raise CommandError(f"{args.witness}: {e}") from None
        if args.objects:
            raise CommandError("validate --witness takes no object names")
        verdict = confirm_witness(block, ws)
        objs = tuple(o for o in block.get("objects", "").split(",") if o)
        info = {"confirms": block.get("command", ""), "confirms_reason": block.get("reason", "")}
        report = Report("validate", ws.source, ws.field.name, objs, verdict, info,
                        {"witness": args.witness})
    else:
        report = run_command(args.command, args.objects, ws, options)
    return report, time.perf_counter() - t0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        report, elapsed = _run(argv)
    except (_UsageError, CommandError, InstanceError) as e:
        print(f"coringkit: error: {e}", file=sys.stderr)
        return INPUT_ERROR
    sys.stdout.write(report.render())
    sys.stdout.flush()
    print(f"coringkit: {report.command} {report.outcome} in {elapsed:.3f}s", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
