"""Command line entry point: render one figure from CSV inputs."""

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sparsedensity-figures",
        description="Render calibration curves, density overlays, or "
                    "boxplot panels from sparsedensity CSV outputs.")
    parser.add_argument("--input", action="append", required=True,
                        help="input CSV path (repeat for multi-panel "
                             "boxplot figures)")
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--output", required=True,
                        help="output image path (png/svg/pdf)")
    parser.add_argument("--label", action="append", default=[],
                        help="optional label, one per curve or panel")
    args = parser.parse_args(argv)

    spec = FigureSpec(inputs=tuple(args.input), kind=args.kind,
                      output=args.output, labels=tuple(args.label))
    try:
        path, _ = render(spec)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
