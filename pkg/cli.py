"""Command-line entry point: one JSON job per invocation.

    python cli.py invariants --input hw.json
    python cli.py strata --c 2 --d 2
    python cli.py gl --check lemma65 --n 2 --p 3

Results go to stdout as sorted, indented JSON. Failures print the error
envelope to stderr and exit 1 (input) or 2 (precision or budget).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from algebra.codec import to_jsonable
from jobs import execute
from jobs.schemas import JobSpec
from utils.errors import InputError, error_envelope, exit_code_for
from utils.settings import get_settings
from utils.telemetry import sanitize

SUBCOMMANDS = {
    "invariants": "Hasse invariant, a-number and fiber heights of a BT descriptor",
    "roots": "tame roots, tame generator matrix and cartan check of an additive polynomial",
    "certificate": "ramification certificate and non-split witness of an additive polynomial",
    "strata": "Newton polygons of NP(c+d, d), their order and dimensions",
    "gl": "finite-level GL_n checks",
    "igusa": "valuations along the level tower",
    "cartan": "non-split Cartan generator of GL_n(F_p)",
    "versality": "Jacobian rank of a multivariate descriptor",
}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--input", help="path to a JSON payload")
    source.add_argument("--json", dest="inline", help="inline JSON payload")
    common.add_argument("--prec", type=int, default=None, help="series precision (default from settings, 64)")
    common.add_argument("--ext-bound", type=int, default=None, help="largest residue extension degree searched (default 8)")
    common.add_argument("--budget", type=int, default=None, help="element budget for group closures (default 10000000)")
    slopes = common.add_mutually_exclusive_group()
    slopes.add_argument("--open-slopes", dest="open_slopes", action="store_true", default=None)
    slopes.add_argument("--closed-slopes", dest="open_slopes", action="store_false")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bt-monodromy", description="p-adic monodromy of HW-cyclic BT groups")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = _common()
    parsers = {name: sub.add_parser(name, parents=[common], help=text) for name, text in SUBCOMMANDS.items()}
    parsers["strata"].add_argument("--c", type=int)
    parsers["strata"].add_argument("--d", type=int)
    parsers["gl"].add_argument("--check", choices=["lemma65", "lemma63", "closure", "order", "small_levels"], default="lemma65")
    for name in ("gl", "cartan"):
        parsers[name].add_argument("--n", type=int)
        parsers[name].add_argument("--p", type=int)
    parsers["gl"].add_argument("--m", type=int)
    parsers["igusa"].add_argument("--p", type=int)
    parsers["igusa"].add_argument("--levels", type=int, default=1)
    parsers["versality"].add_argument("--universal", type=int, metavar="C")
    parsers["versality"].add_argument("--p", type=int)
    parsers["certificate"].add_argument("--search-deg", type=int, metavar="K", help="search F_(p^K) for a non-split witness")
    return parser


def _payload(args: argparse.Namespace) -> Any:
    if args.input is not None:
        source = args.input
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError("unreadable_input", f"cannot read {args.input}: {exc.strerror}", details={"path": args.input}) from exc
    elif args.inline is not None:
        source, text = "--json", args.inline
    else:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            "malformed_json",
            f"{source}: {exc.msg}",
            details={"path": "payload", "line": exc.lineno, "column": exc.colno},
        ) from exc


def job_from_args(args: argparse.Namespace) -> JobSpec:
    fields = {
        "subcommand": args.subcommand,
        "payload": _payload(args),
        "precision": args.prec,
        "extension_bound": args.ext_bound,
        "budget": args.budget,
        "open_slopes": args.open_slopes,
    }
    for name in ("check", "n", "p", "m", "c", "d", "levels", "universal", "search_deg"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    return JobSpec(**fields)


def render(result: Any) -> str:
    return json.dumps(to_jsonable(result), indent=2, sort_keys=True)


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors; --help exits 0
        return 1 if exc.code else 0
    try:
        result = execute(job_from_args(args), get_settings())
    except Exception as exc:
        print(json.dumps(sanitize(error_envelope(exc)), indent=2, sort_keys=True), file=sys.stderr)
        return exit_code_for(exc)
    print(render(result))
    return 0


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
