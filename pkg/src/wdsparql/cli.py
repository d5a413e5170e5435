"""Command-line front end.

Exit status: 0 success, 1 violations found or query outside the fragment,
2 usage or parse error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import bench
from .algebra import Pattern, Select, is_opt_normal_form, opt_count, opt_depth
from .errors import (
    NotInOptNormalForm,
    NotWellDesigned,
    ParseError,
    ShapeInfeasible,
    UnsupportedNode,
)
from .normalform import to_opt_normal_form
from .semantics import Graph, evaluate, serialize_answers
from .surface import parse_pattern, print_pattern
from .wdtree import (
    build_tree,
    k_approximate,
    k_approximation_tree,
    left_deep_level_traversal,
    reductions,
    render_tree,
)
from .wellformed import check_well_designed

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
FORMAT_ENV = "WDSPARQL_FORMAT"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_query(path: str) -> Pattern:
    return parse_pattern(_read(path))


def _prepare(p: Pattern, normalize: bool) -> Pattern:
    """ONF version of ``p`` (keeping a top-level SELECT)."""
    body = p.pattern if isinstance(p, Select) else p
    if is_opt_normal_form(body):
        violations = check_well_designed(p)
        if violations:
            raise NotWellDesigned(violations)
        return p
    if not normalize:
        raise NotInOptNormalForm("query is not in OPT normal form (--no-normalize)")
    return to_opt_normal_form(p)[0]


def _body(p: Pattern) -> Pattern:
    return p.pattern if isinstance(p, Select) else p


def cmd_check(args) -> int:
    violations = check_well_designed(_load_query(args.query))
    for v in violations:
        if args.format == "json":
            print(json.dumps(v.as_record(), ensure_ascii=False))
        else:
            print(f"{v.kind.value}: {v.message}")
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_normalize(args) -> int:
    p = _load_query(args.query)
    out, trace = to_opt_normal_form(p)
    print(print_pattern(out))
    if args.verbose and len(trace):
        print(trace.format(), file=sys.stderr)
    return EXIT_OK


def cmd_depth(args) -> int:
    p = _body(_prepare(_load_query(args.query), not args.no_normalize))
    print(f"depth={opt_depth(p)} opts={opt_count(p)}")
    return EXIT_OK


def _print_tree(p: Pattern, k: int | None) -> None:
    t = build_tree(_body(p))
    if k is not None:
        t = k_approximation_tree(t, k)
    print(render_tree(t))
    print()
    print(left_deep_level_traversal(t).format())


def cmd_tree(args) -> int:
    _print_tree(_prepare(_load_query(args.query), not args.no_normalize), args.k)
    return EXIT_OK


def cmd_approx(args) -> int:
    p = _prepare(_load_query(args.query), not args.no_normalize)
    print(print_pattern(k_approximate(p, args.k)))
    if args.profile:
        depth = opt_depth(_body(p))
        for k, n in bench.opt_count_profile(_body(p), max(depth, args.k)):
            print(f"k={k} opts={n}")
    if args.tree:
        print()
        _print_tree(p, args.k)
    return EXIT_OK


def cmd_eval(args) -> int:
    p = _load_query(args.query)
    g = Graph.from_ntriples(_read(args.data))
    if args.k is not None:
        p = k_approximate(_prepare(p, not args.no_normalize), args.k)
    t0 = time.perf_counter()
    answers = evaluate(p, g)
    elapsed = (time.perf_counter() - t0) * 1e3
    sys.stdout.write(serialize_answers(answers, args.format))
    print(f"# answers={len(answers)} time_ms={elapsed:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_reductions(args) -> int:
    p = _load_query(args.query)
    for text in sorted(print_pattern(r) for r in reductions(p)):
        print(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    shapes = {"zigzag": bench.Shape.ZIGZAG, "left-deep": bench.Shape.LEFT_DEEP,
              "right-deep": bench.Shape.RIGHT_DEEP, "full": bench.Shape.FULL}
    if args.shapes:
        names = args.shapes.split(",")
        counts = [int(c) for c in args.opts.split(",")] if args.opts else None
        if counts is not None and len(counts) != len(names):
            raise SystemExit("--opts needs one count per shape")
        queries = {}
        for i, name in enumerate(names):
            if name not in shapes:
                raise SystemExit(f"unknown shape {name!r}")
            default = {"zigzag": 9, "left-deep": 4, "right-deep": 4, "full": 15}[name]
            n = counts[i] if counts else default
            steps = None
            if shapes[name] is bench.Shape.ZIGZAG and n == 9:
                hits = bench.find_zigzag(9, bench.ZIGZAG_PROFILE)
                steps = hits[0] if hits else None
            shape = bench.TreeShape(shapes[name], n, steps)
            queries[f"{name}/{n}"] = bench.generate_query(shape, args.seed)
    else:
        queries = bench.benchmark_queries(args.seed)
    datasets = {f"scale{s}": bench.generate_graph(int(s), args.seed)
                for s in args.scales.split(",")}
    report = bench.run_workload(queries, datasets, range(args.k_max + 1),
                                args.repeats, args.workers)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    elif args.format == "json":
        print(report.to_json())
    else:
        print(report.trend())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wdsparql",
                                 description="Well-designed pattern approximation toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def query_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("query", help="pattern file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    sp = query_cmd("check", cmd_check, "report well-designedness violations")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = query_cmd("normalize", cmd_normalize, "rewrite into OPT normal form")
    sp.add_argument("-v", "--verbose", action="store_true", help="print rewrite trace")

    for name, func, help_ in (("depth", cmd_depth, "print OPT-depth and OPT count"),
                              ("tree", cmd_tree, "render the well-designed tree")):
        sp = query_cmd(name, func, help_)
        sp.add_argument("--no-normalize", action="store_true")
        if name == "tree":
            sp.add_argument("--k", type=int, default=None,
                            help="render the k-approximation spanning tree instead")

    sp = query_cmd("approx", cmd_approx, "print the k-approximate pattern")
    sp.add_argument("-k", "--k", type=int, required=True)
    sp.add_argument("--profile", action="store_true", help="OPT count for each k")
    sp.add_argument("--tree", action="store_true", help="also render the spanning tree")
    sp.add_argument("--no-normalize", action="store_true")

    sp = query_cmd("eval", cmd_eval, "evaluate a query over N-Triples data")
    sp.add_argument("data", help="N-Triples file")
    sp.add_argument("-k", "--k", type=int, default=None,
                    help="evaluate the k-approximation (default: exact)")
    sp.add_argument("--format", choices=("tsv", "json"),
                    default=os.environ.get(FORMAT_ENV, "tsv"))
    sp.add_argument("--no-normalize", action="store_true")

    query_cmd("reductions", cmd_reductions, "list one-step reductions")

    sp = sub.add_parser("bench", help="k-approximation latency study on synthetic data")
    sp.set_defaults(func=cmd_bench)
    sp.add_argument("--shapes", help="comma list of zigzag,left-deep,right-deep,full")
    sp.add_argument("--opts", help="comma list of OPT counts, one per shape")
    sp.add_argument("--k-max", type=int, default=4)
    sp.add_argument("--scales", default="1,5,10")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeats", type=int, default=5)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("table", "csv", "json"), default="table")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "format", None) not in (None, "text", "tsv", "json", "table", "csv"):
        print(f"error: unknown format {args.format!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, ShapeInfeasible, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotWellDesigned, NotInOptNormalForm, UnsupportedNode) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except SystemExit as exc:
        print(f"error: {exc.code}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
