"""Command line entry point.

Each analysis subcommand reads a JSON request (file path or ``-`` for
stdin); flags override the request options. Exit status is 0 on success,
2 on invalid input and 3 when a requested stage failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asymptotics import Sector
from .errors import ParseError
from .report import CASE_STUDIES, COMMANDS, emit, parse_request, run_case_study, run_pipeline

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_STAGE_FAILED = 3

_SUBCOMMAND_STAGES = {
    "classify": ["classify"],
    "reduce": ["reduce"],
    "index": ["index", "verify-index"],
    "holonomy": ["holonomy"],
}


def _sector(text: str) -> list[float]:
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R,a1,a2 numbers, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected exactly three values R,a1,a2")
    return parts


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--truncation", type=int, metavar="N", help="series truncation order")
    p.add_argument("--max-depth", type=int, metavar="D", help="blow-up depth budget")
    p.add_argument("--field", choices=("exact", "approx"), help="coefficient field")
    p.add_argument("--sector", type=_sector, metavar="R,a1,a2", help="sector for asymptotic checks")
    p.add_argument("--out", choices=("json", "dot", "text"), default="json", help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foliate", description="Singularities of holomorphic foliations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*_SUBCOMMAND_STAGES, "report"):
        p = sub.add_parser(name, help=f"run the {name} stage" if name != "report" else "run all stages")
        p.add_argument("request", help="JSON request file, or - for stdin")
        _common(p)
    p = sub.add_parser("asymptotics", help="built-in asymptotic case studies")
    p.add_argument("case", choices=CASE_STUDIES)
    p.add_argument("--k-max", type=int, help="largest order checked")
    p.add_argument("--csv", metavar="PATH", help="write the per-shell constants as CSV")
    _common(p)
    return parser


def _load(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return json.loads(text) if text.strip() else {}


def _apply_flags(data: dict, args, command: str) -> dict:
    opts = dict(data.get("options", {}))
    if args.truncation is not None:
        opts["truncation"] = args.truncation
    if args.max_depth is not None:
        opts["max_depth"] = args.max_depth
    if args.field is not None:
        opts["field"] = args.field
    if args.sector is not None:
        opts["sector"] = args.sector
    opts["commands"] = list(COMMANDS) if command == "report" else _SUBCOMMAND_STAGES[command]
    return {**data, "options": opts}


def _write(payload: bytes) -> None:
    sys.stdout.buffer.write(payload)
    sys.stdout.flush()


def _asymptotics(args) -> int:
    try:
        sector = Sector(*args.sector) if args.sector else None
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        result = run_case_study(args.case, sector, args.k_max)
    except Exception as exc:  # report any numerical breakdown as a stage failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILED
    csv_text = result.pop("csv")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    if args.out == "text":
        _write(f"asymptotics {args.case}: {result['verdict']}\n".encode())
    elif args.out == "dot":
        _write(b"graph divisor {\n}\n")
    else:
        _write((json.dumps(result, sort_keys=True, indent=2) + "\n").encode())
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "asymptotics":
        return _asymptotics(args)
    try:
        data = _load(args.request)
        if not isinstance(data, dict):
            raise ParseError("$", "request must be a JSON object")
        req = parse_request(_apply_flags(data, args, args.command))
    except json.JSONDecodeError as exc:
        print(f"error: line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = run_pipeline(req)
    _write(emit(report, args.out))
    return EXIT_STAGE_FAILED if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
