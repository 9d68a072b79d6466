"""figures <fig-id> --in <csv> [--in <csv> ...] --out <png>

Renders one figure from fmrabi CSV artifacts.  fig4 takes two inputs (cells,
boundaries, in that order); fig2/fig3/fig5 accept several curves.  Exit codes:
0 success, 2 schema mismatch or unusable input.
"""

from __future__ import annotations

import argparse
import sys

from .io import EmptyInputError, SchemaError
from .render import FIGURE_IDS, FigureSpec, render

EXIT_OK = 0
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figures", description=__doc__.split("\n")[0])
    parser.add_argument("fig_id", choices=FIGURE_IDS, help="which figure to render")
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True, metavar="CSV",
        help="input artifact (repeat for multi-curve figures)",
    )
    parser.add_argument("--out", required=True, help="output image path (png)")
    parser.add_argument("--xlim", type=float, nargs=2, default=None)
    parser.add_argument("--ylim", type=float, nargs=2, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        fig_id=args.fig_id,
        inputs=tuple(args.inputs),
        output=args.out,
        xlim=tuple(args.xlim) if args.xlim else None,
        ylim=tuple(args.ylim) if args.ylim else None,
    )
    try:
        render(spec)
    except (SchemaError, EmptyInputError, OSError) as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {spec.output}")
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())
