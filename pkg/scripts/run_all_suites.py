"""Run every suite for genus 1 and 2 and write one JSON report per genus.

Usage: python3 scripts/run_all_suites.py [outdir] [--genus 1 2 3]
"""

import argparse
from pathlib import Path

from gaudin_sov.report import render_json, render_text
from gaudin_sov.suites import RunConfig, run_suites


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("outdir", nargs="?", default="reports")
    p.add_argument("--genus", type=int, nargs="+", default=[1, 2])
    p.add_argument("--seed", type=int, default=42)
    args = p.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for g in args.genus:
        reports = run_suites(RunConfig(genus=g, seed=args.seed))
        (out / f"genus{g}.json").write_text(render_json(reports, timings=True))
        print(render_text(reports))


if __name__ == "__main__":
    main()
