"""render: turn qsl-dephasing CSV sweeps into figure images.

    render --figure fig1 --input dephasing.csv --out fig1.png
    render --figure fig3 --input steady.csv nonmarkov.csv --out fig3.png

Exit codes: 0 success, 1 usage error, 2 schema validation failure (the
expected-vs-found header diff is printed to stderr).
"""

from __future__ import annotations

import argparse
import sys

from .render import render
from .schemas import FIGURE_INPUTS, SchemaError, load_table


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="render", description=__doc__.splitlines()[0])
    parser.add_argument("--figure", required=True, choices=sorted(FIGURE_INPUTS))
    parser.add_argument("--input", required=True, nargs="+", help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0

    expected = FIGURE_INPUTS[args.figure]
    if len(args.input) != len(expected):
        print(
            f"error: {args.figure} needs {len(expected)} input file(s), got {len(args.input)}",
            file=sys.stderr,
        )
        return 1

    try:
        tables = [load_table(path, schema) for path, schema in zip(args.input, expected)]
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        render(args.figure, tables, args.out, dpi=args.dpi)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
