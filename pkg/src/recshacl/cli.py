"""Command-line driver: ``recshacl {validate,models,snf,compare}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .acorss import compare_semantics
from .core import PartialInterpretation
from .evaluate import EvaluationError
from .fixpoint import DEFAULT_MAX_CANDIDATES, ResourceLimitError, SemanticsKind, models
from .schema import SchemaError, to_snf
from .textio import (FORMAT_VERSION, assignment_json, comparison_json, format_assignment,
                     format_partial, format_schema, format_shape, parse_graph, parse_schema,
                     report_json)
from .validate import ValidationMode, validate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recshacl", description="Validate recursive SHACL schemas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def inputs(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, type=Path)
        p.add_argument("--schema", required=True, type=Path)

    def cap(p):
        p.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES)

    p = sub.add_parser("validate", help="check the schema's targets")
    inputs(p)
    p.add_argument("--semantics", required=True, choices=["wf", "kk", "stable", "supported"])
    p.add_argument("--mode", required=True, choices=["brave", "cautious"])
    p.add_argument("--json", action="store_true")
    cap(p)

    p = sub.add_parser("models", help="list stable or supported models")
    inputs(p)
    p.add_argument("--semantics", required=True, choices=["stable", "supported", "wf", "kk"])
    p.add_argument("--json", action="store_true")
    cap(p)

    p = sub.add_parser("snf", help="print the schema in shape normal form")
    inputs(p, graph=False)

    p = sub.add_parser("compare", help="compare AFT-stable and ACORSS-stable models")
    inputs(p)
    p.add_argument("--json", action="store_true")
    cap(p)
    return parser


def _load(args):
    g = parse_graph(args.graph.read_text(), str(args.graph))
    schema = parse_schema(args.schema.read_text(), str(args.schema))
    return g, schema


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2))


def _validate(args) -> int:
    g, schema = _load(args)
    report = validate(schema, g, SemanticsKind(args.semantics), ValidationMode(args.mode),
                      args.max_candidates)
    if args.json:
        _dump(report_json(g, report))
    else:
        print(f"semantics: {args.semantics}, mode: {args.mode}")
        if report.models_inspected is not None:
            print(f"models inspected: {report.models_inspected}")
        for r in report.results:
            line = f"target {r.index + 1}: {format_shape(r.target.query)} <= " \
                   f"{r.target.target_shape}: {'PASS' if r.passed else 'FAIL'}"
            if r.witnesses:
                line += f" (witnesses: {', '.join(r.witnesses)})"
            print(line)
        print("result: " + ("PASS" if report.passed else "FAIL"))
    return 0 if report.passed else 1


def _models(args) -> int:
    g, schema = _load(args)
    kind = SemanticsKind(args.semantics)
    result = models(schema, g, kind, args.max_candidates)
    if isinstance(result, PartialInterpretation):
        if args.json:
            from .textio import partial_json
            _dump({"format": FORMAT_VERSION, "semantics": kind.value,
                   "model": partial_json(g, result)})
        else:
            print(f"{kind.value} model")
            for line in format_partial(g, result):
                print("  " + line)
        return 0
    if args.json:
        _dump({"format": FORMAT_VERSION, "semantics": kind.value, "count": len(result),
               "models": [assignment_json(g, m) for m in result]})
    else:
        print(f"{len(result)} {kind.value} model(s)")
        for k, m in enumerate(result, 1):
            print(f"model {k}")
            for line in format_assignment(g, m):
                print("  " + line)
    return 0


def _snf(args) -> int:
    schema = parse_schema(args.schema.read_text(), str(args.schema))
    sys.stdout.write(format_schema(to_snf(schema).schema))
    return 0


def _compare(args) -> int:
    g, schema = _load(args)
    record = compare_semantics(schema, g, args.max_candidates)
    if args.json:
        _dump(comparison_json(g, record))
        return 0
    print(f"AFT-stable: {len(record.aft_stable)}, ACORSS-stable: {len(record.acorss_stable)}")
    print(f"supported models: {len(record.models)}; shape normal form: "
          f"{'yes' if record.snf else 'no'}")
    for k, c in enumerate(record.models, 1):
        tags = [name for name, flag in (("AFT-stable", c.aft_stable),
                                        ("ACORSS-stable", c.acorss_stable)) if flag]
        print(f"model {k}: {', '.join(tags) if tags else 'supported only'}")
        for line in format_assignment(g, c.model):
            print("  " + line)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"validate": _validate, "models": _models, "snf": _snf,
               "compare": _compare}[args.command]
    try:
        return handler(args)
    except (OSError, SchemaError, EvaluationError, ResourceLimitError) as exc:
        print(f"recshacl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
