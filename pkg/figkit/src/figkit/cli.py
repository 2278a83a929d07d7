"""Command-line figure renderer.

Usage:
    render --spec figure.json
    render cdf_a.csv cdf_b.csv --label "variant A" --label "variant B" --out fig.pdf
"""

import argparse
import json
import sys

from .render import PlotSpec, render_cdf_figure


def build_parser():
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render spectral-efficiency CDF figures from campaign CSVs.")
    parser.add_argument("csvs", nargs="*", metavar="CSV",
                        help="series CSV files (se,cdf columns)")
    parser.add_argument("--spec", metavar="FILE",
                        help="JSON plot spec (series, labels, output)")
    parser.add_argument("--label", action="append", default=[],
                        help="series label, one per positional CSV")
    parser.add_argument("--out", default="cdf.pdf",
                        help="output image path (default: cdf.pdf)")
    parser.add_argument("--title", default="", help="optional figure title")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.spec:
            if args.csvs:
                raise ValueError("use either --spec or positional CSVs, not both")
            with open(args.spec) as fh:
                spec = PlotSpec.from_dict(json.load(fh))
        else:
            if not args.csvs:
                raise ValueError("no input: pass CSV files or --spec")
            labels = args.label or [str(p) for p in args.csvs]
            spec = PlotSpec(csv_paths=args.csvs, labels=labels,
                            output=args.out, title=args.title)
        output = render_cdf_figure(spec)
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
