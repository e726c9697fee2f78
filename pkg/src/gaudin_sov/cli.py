"""Command line runner: ``verify --suite <name|all> --genus g ...``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on a bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .classical import ConfigError
from .report import render_json, render_text
from .suites import SUITES, RunConfig, run_suites


def parse_rationals(text: str | list | None) -> tuple[Fraction, ...] | None:
    if text is None:
        return None
    items = text if isinstance(text, list) else [s for s in text.split(",") if s.strip()]
    try:
        return tuple(Fraction(str(s).strip()) for s in items)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse rationals from {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Exact verification suites for the Gaudin/separation-of-variables identities.")
    p.add_argument("--config", help="JSON file with genus, points, casimirs, seed, suites, trials, mode")
    p.add_argument("--suite", action="append", help=f"suite name or 'all' (repeatable); one of {', '.join(SUITES)}")
    p.add_argument("--genus", type=int)
    p.add_argument("--points", help="comma separated rationals, e.g. 0,1,2,3 or 1/2,3,...")
    p.add_argument("--casimirs", help="comma separated rationals")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--mode", choices=["exact", "probabilistic"])
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--timings", action="store_true", help="include elapsed_ms in JSON (breaks byte-identical output)")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def load_run(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(data) - {"genus", "points", "casimirs", "seed", "suites", "trials", "mode"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
    run = RunConfig()
    run.genus = args.genus if args.genus is not None else int(data.get("genus", run.genus))
    run.points = parse_rationals(args.points if args.points is not None else data.get("points"))
    run.casimirs = parse_rationals(args.casimirs if args.casimirs is not None else data.get("casimirs"))
    run.seed = args.seed if args.seed is not None else int(data.get("seed", run.seed))
    run.trials = args.trials if args.trials is not None else int(data.get("trials", run.trials))
    run.mode = args.mode or data.get("mode", run.mode)
    run.suites = args.suite or data.get("suites", run.suites)
    return run


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = load_run(args)
        reports = run_suites(run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = render_json(reports, args.timings) if args.format == "json" else render_text(reports)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.status == "fail" for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
