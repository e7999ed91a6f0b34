"""``tdlc`` command line: reports, ball dumps and the acceptance suite.

Exit codes: 0 success, 1 computation error, 2 invalid input, 3 acceptance failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .acceptance import SuiteConfig, summary_lines, verify_suite
from .cache import BallCache, cache_dir
from .graphs import graph_to_json
from .models import ModelError, model_from_spec
from .perm import DEFAULT_ORDER_BOUND
from .report import COMMANDS, ReportInputError, RunConfig, render, run_report

EXIT_OK, EXIT_COMPUTE, EXIT_INPUT, EXIT_ACCEPT = 0, 1, 2, 3


def _scalar(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_spec(text: str) -> dict:
    """A spec given inline as JSON, as a path to a JSON file, or as ``family:key=value,...``."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ReportInputError(f"inline spec is not valid JSON: {exc}") from exc
    p = Path(text)
    if p.is_file():
        try:
            return json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ReportInputError(f"{p}: not valid JSON: {exc}") from exc
    fam, _, rest = text.partition(":")
    if not fam or "/" in fam or fam.endswith(".json"):
        raise ReportInputError(f"spec {text!r} is neither JSON, a readable file, nor family:key=value")
    doc: dict = {"family": fam}
    for part in filter(None, rest.split(",")):
        k, eq, v = part.partition("=")
        if not eq:
            raise ReportInputError(f"expected key=value in spec, got {part!r}")
        doc[k.strip()] = _scalar(v.strip())
    return doc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tdlc", description="Invariants of groups acting on Cayley-Abels graphs.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log cache and progress messages")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cache", metavar="DIR", help="ball cache directory (default: $TDLC_CACHE)")
        p.add_argument("--order-bound", type=_positive, default=DEFAULT_ORDER_BOUND,
                       help="largest group order handed to the composition-factor routine")

    for name in COMMANDS:
        p = sub.add_parser(name, help=f"{name} report")
        p.add_argument("--spec", required=True, help="JSON text, JSON file, or family:key=value,...")
        p.add_argument("--radius", type=_positive)
        p.add_argument("--depth", type=_positive, default=3)
        p.add_argument("--terms", type=_positive, default=5, help="number of powers g^n used in scale estimates")
        common(p)

    p = sub.add_parser("ball", help="dump the canonical ball as graph JSON")
    p.add_argument("--spec", required=True)
    p.add_argument("--radius", type=_positive, default=2)
    p.add_argument("--cache", metavar="DIR")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return ap


def _verify(args) -> int:
    only = [int(x) for x in args.only.split(",")] if args.only else None
    suite = verify_suite(SuiteConfig(args.order_bound, args.cache, args.seed), only, args.jobs)
    if args.format == "json":
        sys.stdout.write(json.dumps(suite, sort_keys=True, indent=2) + "\n")
    else:
        print("\n".join(summary_lines(suite)))
    return EXIT_OK if suite["passed"] else EXIT_ACCEPT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            return _verify(args)
        spec = parse_spec(args.spec)
        if args.command == "ball":
            try:
                m = model_from_spec(spec)
            except ModelError as exc:
                raise ReportInputError(str(exc)) from exc
            d = cache_dir(args.cache)
            ball = BallCache(d).ball(m, args.radius) if d else m.canonical_cayley_abels(args.radius)
            sys.stdout.write(graph_to_json(ball) + "\n")
            return EXIT_OK
        cfg = RunConfig(spec, args.radius, args.depth, args.order_bound, args.format, args.cache, args.terms)
        doc = run_report(cfg, args.command)
        sys.stdout.write(render(doc, args.format))
        return EXIT_OK
    except ReportInputError as exc:
        print(f"tdlc: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        print(f"tdlc: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
