"""Command line entry point: one subcommand per experiment.

Exit status is 0 when the verdict agrees with the expected outcome
(including expected failures), 1 on disagreement and 2 on usage or resource
errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .coxeter import GraphError
from .harness import FORMATS, ExperimentConfig, ResourceError, default_cache_dir, export, run

SUBCOMMANDS = {
    "group": ("enumerate", "Enumerate W (or a length ball) with W_c membership"),
    "mult": ("mult", "Multiply t_x t_y in TL(X)"),
    "ic": ("ic", "Compute and verify the IC basis of TL(X)"),
    "monomial-check": ("monomial-check", "Compare the IC basis with the monomial basis"),
    "counterexample": ("counterexample", "Show a monomial that is not an IC element"),
    "positivity": ("positivity", "Check IC structure constants for nonnegativity"),
    "kl-kernel": ("kl-kernel", "Compare J(X) with the Kazhdan-Lusztig elements it contains"),
    "transitions": ("transitions", "Transition matrices between m' and the monomial basis"),
}


def _word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "e"):
        return ()
    try:
        return tuple(int(tok.lstrip("s")) for tok in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad word {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tlcanon", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--graph", required=True,
                       help='type name such as "A3", "I2:5", "affA3", or graph JSON')
        p.add_argument("--cap", type=int, default=None, help="length cap (required for infinite W_c)")
        p.add_argument("--format", choices=FORMATS, default="json")
        p.add_argument("--cache-dir", type=Path, default=None,
                       help="IC table cache (default: $TLCANON_CACHE_DIR or ~/.cache/tlcanon)")
        p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
        p.add_argument("--budget", type=int, default=10_000, help="largest |W| for Hecke-side work")
        p.add_argument("--output", "-o", type=Path, default=None, help="write the report here")
        if name in ("counterexample", "mult"):
            p.add_argument("--word", type=_word, default=None, help='element, e.g. "1 3 2 4 1 3"')
        if name == "mult":
            p.add_argument("--by", type=_word, default=None, help="right factor")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = ExperimentConfig(
        graph=args.graph,
        experiment=SUBCOMMANDS[args.command][0],
        cap=args.cap,
        format=args.format,
        cache_dir=None if args.no_cache else (args.cache_dir or default_cache_dir()),
        budget=args.budget,
        word=getattr(args, "word", None),
        other=getattr(args, "by", None),
    )
    try:
        report = run(cfg)
        text = export(report, args.format, args.output)
    except (GraphError, ResourceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output is None:
        sys.stdout.write(text)
    print(f"{report.experiment} {report.graph}: {report.verdict} ({report.timing:.2f}s)", file=sys.stderr)
    return 0 if report.matches else 1


if __name__ == "__main__":
    sys.exit(main())
