"""Command-line entry point: one artifact file in, one image out.

Exit codes: 0 success, 2 on missing/invalid inputs (schema mismatch,
missing column, unreadable file).
"""
from __future__ import annotations

import argparse
import sys

from .errors import FigvizError
from .renderers import figure_ids, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figviz",
        description="Render a darwinium result file (CSV/JSON) as a figure.",
    )
    parser.add_argument("figure", choices=figure_ids(), help="figure id")
    parser.add_argument("--input", required=True, help="CSV/JSON artifact to plot")
    parser.add_argument("--out", required=True, help="output image path (.svg/.png/.pdf)")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)

    try:
        render(args.figure, args.input, args.out, dpi=args.dpi)
    except (FigvizError, OSError) as exc:
        print(f"figviz: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
