"""Command line front end.

    magnon-cnot run --config cfg.json [--out DIR] [--format csv,json] [--jobs N]
    magnon-cnot run --scenario coupling
    magnon-cnot validate --config cfg.json
    magnon-cnot defaults --scenario coupling
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import FORMATS, SCENARIOS, ConfigError, defaults, validate_config
from .runner import run_scenario


def _load(args) -> dict | str:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            return fh.read()
    return {"scenario": args.scenario, "parameters": {}}


def _error(kind: str, path: str, message: str, code: int) -> int:
    json.dump({"error": kind, "path": path, "message": message}, sys.stderr, sort_keys=True)
    sys.stderr.write("\n")
    return code


def _formats(text: str) -> tuple:
    items = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in items if f not in FORMATS]
    if not items or bad:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="magnon-cnot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario config")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="path to a JSON scenario config")
    src.add_argument("--scenario", choices=SCENARIOS, help="run a scenario with default parameters")
    run.add_argument("--out", help="output directory (overrides output.directory)")
    run.add_argument("--format", type=_formats, help="comma-separated subset of csv,json")
    run.add_argument("--jobs", type=int, help="worker threads for sweeps (env MAGNON_CNOT_JOBS)")

    val = sub.add_parser("validate", help="check a config and print it with defaults filled in")
    val.add_argument("--config", required=True)

    dfl = sub.add_parser("defaults", help="print the default config for a scenario")
    dfl.add_argument("--scenario", required=True, choices=SCENARIOS)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "defaults":
        print(json.dumps(defaults(args.scenario), sort_keys=True, indent=2))
        return 0

    try:
        config = validate_config(_load(args))
    except ConfigError as exc:
        return _error("config", exc.path, exc.message, 2)
    except OSError as exc:
        return _error("io", args.config or "", str(exc), 2)

    if args.command == "validate":
        print(json.dumps(config.to_dict(), sort_keys=True, indent=2))
        return 0

    report = run_scenario(config, out_dir=args.out, formats=args.format, jobs=args.jobs)
    if not report.ok:
        json.dump({"error": "run", "failures": report.errors}, sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return 1
    summary = {"scenario": report.scenario, "headline": report.headline}
    print(json.dumps(summary, sort_keys=True, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
