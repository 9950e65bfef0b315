"""Batch entry point: plan, convert, query, export-dot, serve.

Exit codes: 1 usage error, 2 validation failure, 3 unsolvable problem or
unknown id. Query output is compact sorted JSON, byte-identical to the HTTP
service's answer for the same graph, overlay, and question.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import catalog, dot, dynamics, environments, explain, htn, mapping, model

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_UNSOLVABLE = 3

QUERY_KINDS = ("reliability", "sensitivity", "impact", "pertinence", "assumptions", "replan")


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors
        self.print_usage(sys.stderr)
        raise CliError(message, EXIT_USAGE)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", EXIT_USAGE)
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON in {path}: {exc}", EXIT_VALIDATION)


def _load_graph(path: str) -> model.ProvGraph:
    graph = model.ProvGraph.from_dict(_load_json(path))
    violations = graph.validate()
    if violations:
        raise CliError(
            "graph fails validation:\n" + "\n".join(str(v) for v in violations),
            EXIT_VALIDATION,
        )
    return graph


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _build_overlay(args, graph: model.ProvGraph) -> dynamics.Overlay:
    refuted = set(args.refute or ())
    for selector in args.refute_class or ():
        dim, _, key = selector.partition(":")
        if not key:
            raise CliError(f"--refute-class wants DIMENSION:KEY, got {selector!r}", EXIT_USAGE)
        cat = catalog.build_catalog(graph)
        try:
            members = catalog.class_members(cat, dim, key)
        except catalog.UnknownClass as exc:
            raise CliError(str(exc), EXIT_UNSOLVABLE)
        refuted.update(members)
    overrides = {}
    for item in getattr(args, "set_confidence", None) or ():
        node_id, _, value = item.rpartition("=")
        if not node_id:
            raise CliError(f"--set-confidence wants ID=VALUE, got {item!r}", EXIT_USAGE)
        try:
            overrides[node_id] = float(value)
        except ValueError:
            raise CliError(f"bad confidence value in {item!r}", EXIT_VALIDATION)
    overlay = dynamics.Overlay(frozenset(refuted), overrides)
    try:
        overlay.validate_for(graph)
    except dynamics.UnknownNode as exc:
        raise CliError(str(exc), EXIT_UNSOLVABLE)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    return overlay


def _cmd_plan(args) -> int:
    domain = htn.Domain.from_dict(_load_json(args.domain))
    problem = htn.Problem.from_dict(_load_json(args.problem))
    try:
        if args.all_plans:
            plans = htn.all_plans(domain, problem, limit=args.all_plans, depth_bound=args.depth)
            if not plans:
                raise CliError("no plan found", EXIT_UNSOLVABLE)
        else:
            plans = [htn.seek_plan(domain, problem, depth_bound=args.depth)]
    except (htn.Unsolvable, htn.DepthExceeded) as exc:
        raise CliError(str(exc), EXIT_UNSOLVABLE)
    payload = {"plans": [p.to_dict() for p in plans]}
    _write_output(json.dumps(payload, indent=2, sort_keys=True), args.output)
    return 0


def _cmd_convert(args) -> int:
    plan_doc = _load_json(args.plans)
    problem = htn.Problem.from_dict(_load_json(args.problem))
    plans = [htn.PlanTree.from_dict(d) for d in plan_doc.get("plans", ())]
    appraisals = []
    if args.appraisals:
        appraisals = [model.Appraisal.from_dict(d) for d in _load_json(args.appraisals)]
    try:
        graph, report = mapping.plan_to_prov(plans, problem, appraisals)
    except (mapping.UnreplayablePlan, htn.UnknownSource) as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    doc = graph.to_dict()
    doc["report"] = report.to_dict()
    _write_output(json.dumps(doc, indent=2, sort_keys=True), args.output)
    return 0


def _cmd_query(args) -> int:
    graph = _load_graph(args.graph)
    overlay = _build_overlay(args, graph)
    if any(f not in graph for f in args.focus):
        missing = [f for f in args.focus if f not in graph]
        raise CliError(f"unknown focus id(s): {missing}", EXIT_UNSOLVABLE)
    try:
        explanation = explain.answer(
            graph, overlay, args.kind, args.focus, threshold=args.threshold
        )
    except (explain.NotAnActivity, explain.NotAGoal, dynamics.UnknownNode) as exc:
        raise CliError(str(exc), EXIT_UNSOLVABLE)
    except (environments.OverflowUnsound, ValueError) as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    _write_output(explanation.to_json(), args.output)
    return 0


def _cmd_export_dot(args) -> int:
    graph = _load_graph(args.graph)
    overlay = _build_overlay(args, graph)
    status = dynamics.support_fixpoint(graph, overlay)
    confidence = dynamics.propagate_confidence(graph, overlay, status)
    _write_output(dot.export_dot(graph, status, confidence), args.output)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    graph = _load_graph(args.graph)
    app = create_app({"default": graph})
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="planprov", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="run the planner on a domain and problem")
    p_plan.add_argument("--domain", required=True)
    p_plan.add_argument("--problem", required=True)
    p_plan.add_argument("--all-plans", type=int, default=0, metavar="N",
                        help="enumerate up to N distinct plans")
    p_plan.add_argument("--depth", type=int, default=htn.DEFAULT_DEPTH_BOUND)
    p_plan.add_argument("-o", "--output", default=None)
    p_plan.set_defaults(func=_cmd_plan)

    p_conv = sub.add_parser("convert", help="map plans into a provenance graph")
    p_conv.add_argument("--plans", required=True)
    p_conv.add_argument("--problem", required=True)
    p_conv.add_argument("--appraisals", default=None)
    p_conv.add_argument("-o", "--output", default=None)
    p_conv.set_defaults(func=_cmd_convert)

    p_query = sub.add_parser("query", help="ask an explanation question")
    p_query.add_argument("--graph", required=True)
    p_query.add_argument("--kind", required=True, choices=QUERY_KINDS)
    p_query.add_argument("--focus", action="append", required=True)
    p_query.add_argument("--refute", action="append", default=[])
    p_query.add_argument("--refute-class", action="append", default=[],
                         metavar="DIM:KEY")
    p_query.add_argument("--threshold", type=float, default=0.0)
    p_query.add_argument("--set-confidence", action="append", default=[],
                         metavar="ID=X")
    p_query.add_argument("-o", "--output", default=None)
    p_query.set_defaults(func=_cmd_query)

    p_dot = sub.add_parser("export-dot", help="emit the graph as Graphviz DOT")
    p_dot.add_argument("--graph", required=True)
    p_dot.add_argument("--refute", action="append", default=[])
    p_dot.add_argument("--refute-class", action="append", default=[], metavar="DIM:KEY")
    p_dot.add_argument("-o", "--output", default=None)
    p_dot.set_defaults(func=_cmd_export_dot)

    p_serve = sub.add_parser("serve", help="serve the HTTP query API")
    p_serve.add_argument("--graph", required=True)
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"planprov: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
