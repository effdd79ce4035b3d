"""Command line front end for scenario files and the built-in suites."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Optional, Sequence

from .errors import NCGeomError, ParseError, ValidationError
from .scenario import (
    available_checks,
    load_scenario,
    report_to_markdown,
    run_scenario,
    verify_appendix,
)

__all__ = ["main", "builtin_scenario", "BUILTIN_SCENARIOS"]

BUILTIN_SCENARIOS = (
    "example-1",
    "example-2",
    "sphere-classical-limit",
    "spherical-theorem",
    "quasi-moyal-crosscheck",
)


def builtin_scenario(name: str) -> dict:
    """Load one of the scenarios shipped inside the package."""
    if name not in BUILTIN_SCENARIOS:
        raise ParseError(f"no built-in scenario named {name!r}")
    path = resources.files("ncgeom.scenarios").joinpath(f"{name}.json")
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot load built-in scenario {name}: {exc}") from exc


def _emit(report: dict, out: Optional[str], fmt: str) -> None:
    if fmt == "md":
        text = report_to_markdown(report)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncgeom",
        description="Exact star-product differential geometry checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", help="path to a scenario JSON document")
    run.add_argument("--out", default=None, help="write the report to a file")
    run.add_argument("--format", choices=("json", "md"), default="json")
    run.add_argument("--jet-order", type=int, default=None)

    app = sub.add_parser(
        "verify-appendix", help="check the closed-form trig product identities"
    )
    app.add_argument("--order", type=int, default=8)
    app.add_argument("--points", type=int, default=5)
    app.add_argument("--seed", type=int, default=42)
    app.add_argument("--out", default=None)
    app.add_argument("--format", choices=("json", "md"), default="json")

    ex = sub.add_parser("example", help="run a built-in worked example")
    ex.add_argument("--id", type=int, choices=(1, 2), required=True)
    ex.add_argument("--out", default=None)
    ex.add_argument("--format", choices=("json", "md"), default="json")

    sub.add_parser("list-checks", help="list the available check names")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 on --help
        return int(exc.code or 0)

    try:
        if args.command == "run":
            doc = load_scenario(args.scenario)
            report = run_scenario(doc, jet_order=args.jet_order)
        elif args.command == "verify-appendix":
            report = verify_appendix(
                order=args.order, points=args.points, seed=args.seed
            )
        elif args.command == "example":
            report = run_scenario(builtin_scenario(f"example-{args.id}"))
        else:  # list-checks
            for name in available_checks():
                print(name)
            return 0
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NCGeomError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    _emit(report, args.out, args.format)
    return 0 if report["all_ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
