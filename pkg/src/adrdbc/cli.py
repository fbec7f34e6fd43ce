"""Command-line front end.

Exit codes: 0 ok, 1 input error, 2 post-condition outside the transformable
fragment, 3 check failed, 4 no recovery plan.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import dsl
from .contracts import Bounds, Status, check_soundness, check_validity, check_weakest
from .graph import GraphError, apply_production, find_matches
from .logic import FormulaError, enumerate_graphs, find_distinguishing, free_vars
from .recovery import recover
from .wp import FragmentError, wpre

EXIT_OK, EXIT_INPUT, EXIT_FRAGMENT, EXIT_CHECK, EXIT_NO_PLAN = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _load(path: str) -> dsl.Document:
    try:
        text = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return dsl.parse(text)
    except dsl.ParseError as e:
        raise InputError("\n".join(f"{path}:{d}" for d in e.diagnostics)) from None


def _get(table: dict, name: str, kind: str):
    if name not in table:
        raise InputError(f"unknown {kind} {name!r}")
    return table[name]


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ADR_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"ADR_SEED must be an integer, got {env!r}") from None
    return 1


def cmd_wp(args) -> int:
    doc = _load(args.file)
    p = _get(doc.productions, args.production, "production")
    phi = _get(doc.formulas, args.formula, "formula")
    if free_vars(phi):
        raise InputError(f"post-condition must be closed (free: {', '.join(sorted(free_vars(phi)))})")
    pre = wpre(p, phi, mode=args.mode)
    if args.json:
        print(json.dumps({"production": args.production, "post": args.formula,
                          "mode": args.mode, "wpre": dsl.formula_to_json(pre),
                          "text": dsl.format_formula(pre)}, indent=2))
    else:
        print(dsl.format_formula(pre))
    return EXIT_OK


def _report_verdict(verdict, p) -> int:
    print(f"status: {verdict.status.value}")
    print(f"graphs_checked: {verdict.graphs_checked}")
    cex = verdict.counterexample
    if cex is not None:
        print(dsl.format_graph(cex.graph, "counterexample"))
        if cex.match is not None:
            print(f"# match: {p.name} at edge {cex.match.edge_id}")
        if cex.result is not None:
            print(dsl.format_graph(cex.result, "after"))
    return EXIT_OK if verdict.status is Status.HOLDS else EXIT_CHECK


def cmd_check(args) -> int:
    doc = _load(args.file)
    ap = _get(doc.asserted, args.asserted, "asserted production")
    if args.max_nodes < 0 or args.max_edges < 0:
        raise InputError("bounds must be non-negative")
    bounds = Bounds(args.max_nodes, args.max_edges)
    alphabet = set(doc.types.values())
    if args.theorem == "soundness":
        verdict = check_soundness(ap.production, ap.post, ap.h, ap.hbar, bounds, alphabet)
    elif args.theorem == "weakest":
        verdict = check_weakest(ap.pre, ap.production, ap.post, ap.h, ap.hbar, bounds, alphabet)
    else:
        verdict = check_validity(ap, bounds, alphabet)
    print(f"theorem: {args.theorem}")
    return _report_verdict(verdict, ap.production)


def cmd_apply(args) -> int:
    doc = _load(args.file)
    g = _get(doc.graphs, args.graph, "graph")
    p = _get(doc.productions, args.production, "production")
    match = next((m for m in find_matches(g, p) if m.edge_id == args.at), None)
    if match is None:
        raise InputError(f"edge {args.at!r} is not a match of {p.name} in {args.graph}")
    print(dsl.format_graph(apply_production(g, match, p, _seed(args)), args.output_name))
    return EXIT_OK


def cmd_recover(args) -> int:
    doc = _load(args.file)
    g = _get(doc.graphs, args.graph, "graph")
    style = _get(doc.styles, args.style, "style")
    plan = recover(g, style, args.max_depth, _seed(args))
    if plan is None:
        print(f"no plan within depth {args.max_depth}")
        return EXIT_NO_PLAN
    print(f"steps: {len(plan.steps)}")
    for k, (i, m) in enumerate(plan.steps, 1):
        ap = style.productions[i]
        print(f"  {k}. {ap.name} ({ap.production.name}) at edge {m.edge_id}")
    print(dsl.format_graph(plan.final, "final"))
    return EXIT_OK


def cmd_equiv(args) -> int:
    doc = _load(args.file)
    f1 = _get(doc.formulas, args.first, "formula")
    f2 = _get(doc.formulas, args.second, "formula")
    for name, f in ((args.first, f1), (args.second, f2)):
        if free_vars(f):
            raise InputError(f"formula {name} must be closed")
    witness = find_distinguishing(f1, f2, doc.types.values(), args.max_nodes, args.max_edges)
    if witness is None:
        print("true")
        return EXIT_OK
    print("false")
    print(dsl.format_graph(witness, "witness"))
    return EXIT_CHECK


def cmd_enumerate(args) -> int:
    doc = _load(args.file)
    count = 0
    for count, g in enumerate(enumerate_graphs(doc.types.values(), args.max_nodes,
                                               args.max_edges), 1):
        print(dsl.format_graph(g, f"g{count}"))
    print(f"count {count}")
    return EXIT_OK


def _bounds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=3)
    p.add_argument("--max-edges", type=int, default=3)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adrdbc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wp", help="weakest pre-condition of a production")
    p.add_argument("file")
    p.add_argument("production")
    p.add_argument("formula")
    p.add_argument("--mode", choices=("literal", "feasible"), default="literal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("check", help="bounded check of an asserted production")
    p.add_argument("file")
    p.add_argument("asserted")
    p.add_argument("--theorem", choices=("soundness", "weakest", "validity"),
                   default="soundness")
    _bounds(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("apply", help="apply a production at an edge")
    p.add_argument("file")
    p.add_argument("graph")
    p.add_argument("production")
    p.add_argument("--at", required=True, metavar="EDGE")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output-name", default="result")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("recover", help="search for a plan restoring a style")
    p.add_argument("file")
    p.add_argument("graph")
    p.add_argument("style")
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("equiv", help="bounded equivalence of two formulas")
    p.add_argument("file")
    p.add_argument("first")
    p.add_argument("second")
    _bounds(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("enumerate", help="list all graphs within bounds")
    p.add_argument("file")
    _bounds(p)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FragmentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FRAGMENT
    except (FormulaError, GraphError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
