"""Command-line front end.

Exit codes: 0 success or decided verdict, 1 malformed configuration or a
symbol that is not a self-map, 2 numerical failure (including a broken
interpolation contract or a failed property), 3 inconclusive verdict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from ..errors import BergmanError, ConfigError, DomainError
from .commands import COMMANDS, EXIT_CONFIG, EXIT_NUMERIC
from .schema import load_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman-interp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="random seed (verify)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--strategy", choices=("paper", "greedy"))
        p.add_argument("--tol", type=float)
    return parser


def render(outcome, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(outcome.header)
        w.writerows(outcome.rows)
        return buf.getvalue()
    return json.dumps(outcome.payload, indent=2, allow_nan=True) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        cfg = load_config(opts.command, opts.config)
        outcome = COMMANDS[opts.command](cfg, opts)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BergmanError, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit(json.dumps({"error": type(exc).__name__, "message": str(exc)}, indent=2) + "\n", opts.out)
        return EXIT_NUMERIC
    _emit(render(outcome, opts.format), opts.out)
    return outcome.code
