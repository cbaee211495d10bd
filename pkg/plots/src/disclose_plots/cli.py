"""Command line: render figures from JSON specifications."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import SchemaMismatch, load_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from disclose CSV results"
    )
    subs = parser.add_subparsers(dest="command", required=True)
    p = subs.add_parser("render", help="render one figure from a spec file")
    p.add_argument("--spec", required=True, help="JSON figure specification")
    args = parser.parse_args(argv)
    try:
        figure = render(load_spec(args.spec))
    except SchemaMismatch as exc:
        print(f"schema mismatch: {exc}", file=sys.stderr)
        return 2
    for path in figure.outputs:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
