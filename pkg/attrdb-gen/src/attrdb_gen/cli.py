"""gen-attrdb: write the attribute-database JSON for the running interpreter."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import GeneratorConfig, generate_attrdb


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gen-attrdb",
        description="Introspect builtin and abstract-collection types and "
                    "write the attribute database JSON.",
    )
    parser.add_argument("--out", required=True, metavar="PATH",
                        help="output JSON file")
    parser.add_argument("--extra", action="append", default=[],
                        metavar="DOTTED.NAME",
                        help="additional type to introspect (repeatable)")
    parser.add_argument("--no-dunder", dest="include_dunder",
                        action="store_false",
                        help="exclude remaining __dunder__ attributes")
    args = parser.parse_args(argv)

    config = GeneratorConfig(output=Path(args.out),
                             extra_types=list(args.extra),
                             include_dunder=args.include_dunder)
    result = generate_attrdb(config)
    for warning in result.warnings:
        print(f"warning: could not introspect {warning}", file=sys.stderr)
    print(f"wrote {args.out} ({len(result.document['types'])} types, "
          f"python {sys.version_info.major}.{sys.version_info.minor})")
    return 0


def entrypoint() -> None:  # pragma: no cover - console script shim
    sys.exit(main())
