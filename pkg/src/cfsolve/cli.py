"""Command-line front end.

Exit status: 0 when every box is certified, 1 when some boxes hit the depth
limit, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .homography import DomainBox
from .parse import ParseError, ParsedSystem, format_system, parse_box, parse_system
from .solver import Certificate, SolveConfig, StepKind, report_roots, solve
from .svg import render_run

__all__ = ["main", "run", "build_parser", "to_json", "format_box", "EXIT_OK", "EXIT_DEPTH", "EXIT_INPUT"]

EXIT_OK = 0
EXIT_DEPTH = 1
EXIT_INPUT = 2

JSON_VERSION = "1"

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cfsolve",
        description="Isolate the real roots of an integer polynomial system by "
        "continued-fraction subdivision, in exact arithmetic.",
    )
    p.add_argument("system", nargs="?", help="file with the system, or '-' for stdin")
    p.add_argument("-e", "--expr", help="system given inline, e.g. 'x^2-2; y-1'")
    p.add_argument("--box", help="domain as lo:hi,lo:hi,... (default 0:inf on every axis)")
    p.add_argument("--max-depth", type=int, default=64, metavar="N")
    p.add_argument("--no-precondition", action="store_true")
    p.add_argument("--no-reduction", action="store_true")
    p.add_argument("--bound", choices=("exact", "cauchy"), default="exact")
    p.add_argument("--upper-bounds", action="store_true", help="also reduce with upper bounds")
    p.add_argument("--split", choices=("binary", "full"), default="binary")
    p.add_argument("--split-point", choices=("unit", "balanced"), default="unit")
    p.add_argument("--projection", choices=("plain", "bernstein"), default="plain")
    p.add_argument("--spread", type=int, default=0, metavar="L", help="scale roots by 2**L first")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cf", action="store_true", help="print continued-fraction prefixes (text)")
    p.add_argument(
        "--cf-terms",
        type=int,
        default=0,
        metavar="N",
        help="refine certified boxes until each prefix has N partial quotients",
    )
    p.add_argument("--svg", metavar="PATH", help="write a plot of the run (two variables only)")
    p.add_argument("--stats", action="store_true", help="print run statistics")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _frac(v) -> dict:
    v = Fraction(v)
    return {"num": str(v.numerator), "den": str(v.denominator)}


def _endpoint_json(v):
    return "inf" if v == math.inf else _frac(v)


def _fmt(v) -> str:
    if v == math.inf:
        return "inf"
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def format_box(b: DomainBox) -> str:
    return " x ".join(f"[{_fmt(lo)}, {_fmt(hi)}]" for lo, hi in b)


def to_json(system: ParsedSystem, domain: DomainBox, results, stats, reports) -> dict:
    return {
        "version": JSON_VERSION,
        "variables": list(system.variables),
        "system": format_system(system),
        "domain": [{"lower": _endpoint_json(lo), "upper": _endpoint_json(hi)} for lo, hi in domain],
        "boxes": [
            {
                "intervals": [{"lower": _endpoint_json(lo), "upper": _endpoint_json(hi)} for lo, hi in r.box],
                "certificate": r.certificate.value,
                "cf": [[str(c) for c in q] for q in rep.cf],
                "exact": list(rep.exact),
            }
            for r, rep in zip(results, reports)
        ],
        "stats": {k: str(v) for k, v in stats.as_dict().items()},
    }


def _read_system(args) -> str:
    if args.expr is not None:
        if args.system is not None:
            raise ParseError("give either a system file or --expr, not both")
        return args.expr
    if args.system is None:
        raise ParseError("no system given (file argument, '-' or --expr)")
    if args.system == "-":
        return sys.stdin.read()
    with open(args.system, encoding="utf-8") as fh:
        return fh.read()


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text = _read_system(args)
        system = parse_system(text)
        n = len(system.variables)
        if any(f.is_zero for f in system):
            raise ParseError("the zero polynomial cannot be part of a system")
        domain = parse_box(args.box, n) if args.box else DomainBox.orthant(n)
        if args.cf_terms < 0:
            raise ValueError("--cf-terms must be >= 0")
        if args.svg and n != 2:
            raise ParseError(f"--svg needs exactly two variables, the system has {n}")
        cfg = SolveConfig(
            max_depth=args.max_depth,
            use_precondition=not args.no_precondition,
            use_reduction=not args.no_reduction,
            lower_bound_strategy=args.bound,
            use_upper_bounds=args.upper_bounds,
            spread=args.spread,
            split=args.split,
            split_point=args.split_point,
            projection=args.projection,
            jobs=args.jobs,
        )
    except (ParseError, ValueError, OSError) as exc:
        print(f"cfsolve: error: {exc}", file=stderr)
        return EXIT_INPUT

    excluded: list[DomainBox] = []
    scale = 2**args.spread

    def collect(state, out):
        if out.kind is StepKind.EXCLUDED:
            b = state.box()
            excluded.append(DomainBox([(lo / scale, hi if hi == math.inf else hi / scale) for lo, hi in b]))

    results, stats = solve(list(system), domain, cfg, on_state=collect if args.svg else None)
    reports = report_roots(results, list(system), quotients=args.cf_terms)

    if args.format == "json":
        json.dump(to_json(system, domain, results, stats, reports), stdout, indent=2)
        stdout.write("\n")
    else:
        names = system.variables
        for r, rep in zip(results, reports):
            line = f"{format_box(r.box)}  {r.certificate.value}"
            if args.cf:
                parts = []
                for name, q, ex in zip(names, rep.cf, rep.exact):
                    body = ", ".join(str(c) for c in q[1:])
                    cf = f"[{q[0]}; {body}]" if q and body else (f"[{q[0]}]" if q else "[]")
                    parts.append(f"{name}={cf}{' exact' if ex else ''}")
                line += "  " + " ".join(parts)
            print(line, file=stdout)
        if args.stats:
            print(
                "iterations={iterations} subdivisions={subdivisions} solutions={solutions} "
                "excluded={excluded} depth_limited={depth_limited} reductions={reductions}".format(
                    **stats.as_dict()
                ),
                file=stdout,
            )
    if args.svg:
        sols = [r.box for r in results if r.certificate is Certificate.MIRANDA_JACOBIAN]
        kept = [r.box for r in results if r.certificate is Certificate.DEPTH_LIMIT]
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_run(domain, excluded, kept, sols))

    return EXIT_DEPTH if stats.depth_limited else EXIT_OK


def main(argv: Sequence[str] | None = None) -> None:
    logging.basicConfig(level=logging.WARNING, format="cfsolve: %(levelname)s: %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
