"""``cvxgeo`` command line.

Exit codes: 0 when the property holds or the object is found, 1 when it
fails or is absent, 2 on usage, input or cap errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .closure import ClosedFamily, format_family, is_convex_geometry, parse_family
from .errors import CapExceeded, CvxGeoError
from .geometry import build_geometry, parse_points
from .lattice import build_lattice, count_subgeometry_embeddings, find_subgeometry_embedding
from .rules import Rule, check_rule

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CvxGeoError(f"cannot read {path}: {exc.strerror}") from None


def _first_directive(text: str) -> str | None:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.split()[0]
    return None


def load_family(path: str) -> ClosedFamily:
    """A family file, or a points file whose relatively convex sets are taken."""
    text = _read(path)
    if _first_directive(text) == "dim":
        return build_geometry(parse_points(text))
    return parse_family(text)


def cmd_realize(args) -> int:
    family = build_geometry(parse_points(_read(args.points)))
    if args.check:
        report = is_convex_geometry(family)
        print(f"convex geometry: {report.describe()}")
        return EXIT_HOLDS if report else EXIT_FAILS
    sys.stdout.write(format_family(family))
    return EXIT_HOLDS


def cmd_rule(args) -> int:
    rule = Rule(args.rule)
    if rule in (Rule.CARATHEODORY, Rule.CAROUSEL) and args.n is None:
        raise _Usage(f"-n is required for --rule {rule.value}")
    family = load_family(args.input)
    verdict = check_rule(family, rule, args.n)
    print(verdict.describe())
    print(f"tuples examined: {verdict.tuples_examined}")
    return EXIT_HOLDS if verdict.holds else EXIT_FAILS


def cmd_embed(args) -> int:
    G = build_lattice(load_family(args.source))
    H = build_lattice(load_family(args.target))
    if args.count_all:
        count = count_subgeometry_embeddings(G, H)
        print(f"embeddings: {count}")
        return EXIT_HOLDS if count else EXIT_FAILS
    found = find_subgeometry_embedding(G, H)
    if found is None:
        print("none")
        return EXIT_FAILS
    print(found)
    return EXIT_HOLDS


def cmd_paper(args) -> int:
    from .gallery import format_results, item_names, run_gallery

    names = None
    if args.item:
        unknown = [n for n in args.item if n not in item_names()]
        if unknown:
            raise _Usage(f"unknown item {unknown[0]!r}; known: {' '.join(item_names())}")
        names = args.item
    results = run_gallery(names)
    sys.stdout.write(format_results(results))
    return EXIT_HOLDS if all(r.passed for r in results) else EXIT_FAILS


def cmd_search(args) -> int:
    from .search import conjecture_search

    report = conjecture_search(args.max_ground, args.seed, args.budget)
    sys.stdout.write(report.format())
    return EXIT_FAILS if report.candidates else EXIT_HOLDS


def cmd_export_dot(args) -> int:
    sys.stdout.write(build_lattice(load_family(args.input)).to_dot())
    return EXIT_HOLDS


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cvxgeo", description="Finite convex geometries: closure, rules, embeddings.")
    sub = p.add_subparsers(dest="verb", required=True)

    r = sub.add_parser("realize", help="relatively convex sets of a point configuration")
    r.add_argument("points")
    mode = r.add_mutually_exclusive_group()
    mode.add_argument("--closed-sets", action="store_true", help="print the closed sets (default)")
    mode.add_argument("--check", action="store_true", help="check the convex-geometry axioms")
    r.set_defaults(func=cmd_realize)

    r = sub.add_parser("rule", help="check a Caratheodory/Carousel/Sharp rule")
    r.add_argument("input", help="family file or points file")
    r.add_argument("--rule", required=True, choices=[x.value for x in Rule])
    r.add_argument("-n", type=int)
    r.set_defaults(func=cmd_rule)

    r = sub.add_parser("embed", help="search a sublattice embedding of one family into another")
    r.add_argument("source")
    r.add_argument("target")
    r.add_argument("--count-all", action="store_true", help="count every embedding instead")
    r.set_defaults(func=cmd_embed)

    r = sub.add_parser("paper", help="run the gallery of worked examples")
    which = r.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true")
    which.add_argument("--item", action="append", metavar="NAME")
    r.set_defaults(func=cmd_paper)

    r = sub.add_parser("search", help="look for rule-abiding geometries with no planar realization")
    r.add_argument("--max-ground", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--budget", type=int, default=20)
    r.set_defaults(func=cmd_search)

    r = sub.add_parser("export-dot", help="Hasse diagram of a family in DOT")
    r.add_argument("input", help="family file or points file")
    r.set_defaults(func=cmd_export_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except CapExceeded as exc:
        print(f"cvxgeo: cap exceeded: {exc}", file=sys.stderr)
    except CvxGeoError as exc:
        print(f"cvxgeo: error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
