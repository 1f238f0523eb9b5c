"""Concrete syntax: graph files, the schema language, pretty-printing and JSON.

Graph files hold one statement per line::

    # comment
    a closeTo b        # triple: subject property object
    node Pfizer        # isolated node

Schema files::

    shape atRisk := not geq 1 (vaccinated, top)
                    and (geq 1 (hasSymptoms, top) or geq 1 (closeTo, atRisk));
    shape canWork := not atRisk;
    target top <= canWork;

``not`` binds tightest, then ``and``, then ``or``.  Paths use ``|`` (union),
``/`` (composition), postfix ``*`` and ``?``, and ``^p`` for an inverse
property.
"""

from __future__ import annotations

import re
from typing import Iterator, NamedTuple

from .core import Graph, PartialInterpretation, ShapeAssignment
from .schema import (SNF_PREFIX, And, Closed, Compose, Disj, Eq, Forall, GeqN, Inverse, Name,
                     Nominal, Not, Optional_, Or, PathExpr, Prop, Rule, Schema, SchemaError,
                     ShapeExpr, SourceSpan, Star, Target, Top, Union_)

FORMAT_VERSION = 1


class ParseError(SchemaError):
    pass


# -- graphs ----------------------------------------------------------------------

def parse_graph(text: str, filename: str = "<graph>") -> Graph:
    triples: list[tuple[str, str, str]] = []
    nodes: list[str] = []
    order: dict[str, None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        parts = line.split()
        if not parts:
            continue
        if len(parts) == 2 and parts[0] == "node":
            order.setdefault(parts[1])
            nodes.append(parts[1])
        elif len(parts) == 3:
            s, _, o = parts
            order.setdefault(s)
            order.setdefault(o)
            triples.append((parts[0], parts[1], parts[2]))
        else:
            col = len(raw) - len(raw.lstrip()) + 1
            raise ParseError("expected 'subject property object' or 'node name'",
                             SourceSpan(filename, lineno, col, len(raw.rstrip()) + 1))
    return Graph.from_triples(triples, nodes=order)


def format_graph(g: Graph) -> str:
    lines = [f"node {n}" for n in g.nodes]
    lines += [f"{s} {p} {o}" for s, p, o in g.triples()]
    return "\n".join(lines) + "\n" if lines else ""


# -- schema lexer ------------------------------------------------------------------

KEYWORDS = {"shape", "target", "top", "not", "and", "or", "geq", "forall", "eq", "disjoint",
            "closed"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<op>:=|<=|[{}(),;|/*?^])
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str      # "int", "name", "kw", "op", "eof"
    text: str
    span: SourceSpan


def tokenize(text: str, filename: str = "<schema>") -> Iterator[Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             SourceSpan(filename, line, col, col + 1))
        kind = m.lastgroup
        value = m.group()
        span = SourceSpan(filename, line, col, col + len(value))
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "name":
            yield Token("kw" if value in KEYWORDS else "name", value, span)
        elif kind != "ws":
            yield Token(kind, value, span)
        pos = m.end()
    col = pos - line_start + 1
    yield Token("eof", "", SourceSpan(filename, line, col, col))


# -- schema parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, filename: str):
        self.toks = list(tokenize(text, filename))
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("kw", "op") and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}",
                             self.tok.span)
        return self.advance()

    def name(self, what: str) -> Token:
        if self.tok.kind != "name":
            raise ParseError(f"expected {what}, found {self.tok.text or 'end of input'!r}",
                             self.tok.span)
        t = self.advance()
        if t.text.startswith(SNF_PREFIX):
            raise ParseError(f"names starting with {SNF_PREFIX!r} are reserved", t.span)
        return t

    def schema(self) -> Schema:
        rules: list[Rule] = []
        targets: list[Target] = []
        while self.tok.kind != "eof":
            start = self.tok.span
            if self.at("shape"):
                self.advance()
                head = self.name("shape name")
                self.expect(":=")
                body = self.shape()
                self.expect(";")
                rules.append(Rule(head.text, body, head.span))
            elif self.at("target"):
                self.advance()
                query = self.shape()
                self.expect("<=")
                s = self.name("shape name")
                self.expect(";")
                targets.append(Target(query, s.text, start))
            else:
                raise ParseError(f"expected 'shape' or 'target', found {self.tok.text!r}", start)
        return Schema(tuple(rules), tuple(targets))

    def shape(self) -> ShapeExpr:
        left = self.conj()
        while self.at("or"):
            span = self.advance().span
            left = Or(left, self.conj(), span)
        return left

    def conj(self) -> ShapeExpr:
        left = self.unary()
        while self.at("and"):
            span = self.advance().span
            left = And(left, self.unary(), span)
        return left

    def unary(self) -> ShapeExpr:
        if self.at("not"):
            span = self.advance().span
            return Not(self.unary(), span)
        return self.atom()

    def atom(self) -> ShapeExpr:
        t = self.tok
        if self.at("top"):
            self.advance()
            return Top(t.span)
        if self.at("{"):
            self.advance()
            c = self.name("node name")
            self.expect("}")
            return Nominal(c.text, t.span)
        if t.kind == "name":
            return Name(self.name("shape name").text, t.span)
        if self.at("("):
            self.advance()
            inner = self.shape()
            self.expect(")")
            return inner
        if self.at("geq"):
            self.advance()
            if self.tok.kind != "int":
                raise ParseError("expected a number after 'geq'", self.tok.span)
            n_tok = self.advance()
            n = int(n_tok.text)
            if n < 1:
                raise ParseError("geq needs a number >= 1", n_tok.span)
            self.expect("(")
            path = self.path()
            self.expect(",")
            arg = self.shape()
            self.expect(")")
            return GeqN(n, path, arg, t.span)
        if self.at("forall"):
            self.advance()
            self.expect("(")
            path = self.path()
            self.expect(",")
            arg = self.shape()
            self.expect(")")
            return Forall(path, arg, t.span)
        if self.at("eq") or self.at("disjoint"):
            cls = Eq if self.advance().text == "eq" else Disj
            self.expect("(")
            left = self.path()
            self.expect(",")
            right = self.path()
            self.expect(")")
            return cls(left, right, t.span)
        if self.at("closed"):
            self.advance()
            self.expect("(")
            props: list[str] = []
            if not self.at(")"):
                props.append(self.name("property name").text)
                while self.at(","):
                    self.advance()
                    props.append(self.name("property name").text)
            self.expect(")")
            return Closed(tuple(props), t.span)
        raise ParseError(f"expected a shape, found {t.text or 'end of input'!r}", t.span)

    def path(self) -> PathExpr:
        left = self.seq()
        while self.at("|"):
            span = self.advance().span
            left = Union_(left, self.seq(), span)
        return left

    def seq(self) -> PathExpr:
        left = self.postfix()
        while self.at("/"):
            span = self.advance().span
            left = Compose(left, self.postfix(), span)
        return left

    def postfix(self) -> PathExpr:
        p = self.base()
        while self.at("*") or self.at("?"):
            t = self.advance()
            p = Star(p, t.span) if t.text == "*" else Optional_(p, t.span)
        return p

    def base(self) -> PathExpr:
        t = self.tok
        if self.at("^"):
            self.advance()
            prop = self.name("property name")
            return Inverse(Prop(prop.text, prop.span), t.span)
        if t.kind == "name":
            self.advance()
            return Prop(t.text, t.span)
        if self.at("("):
            self.advance()
            inner = self.path()
            self.expect(")")
            return inner
        raise ParseError(f"expected a path, found {t.text or 'end of input'!r}", t.span)


def parse_schema(text: str, filename: str = "<schema>") -> Schema:
    return _Parser(text, filename).schema()


def parse_shape(text: str) -> ShapeExpr:
    p = _Parser(text, "<shape>")
    phi = p.shape()
    if p.tok.kind != "eof":
        raise ParseError(f"trailing input {p.tok.text!r}", p.tok.span)
    return phi


# -- pretty-printing -------------------------------------------------------------------

def _push_inverse(path: PathExpr) -> PathExpr:
    """Rewrite an inverse of a compound path into inverses of properties only."""
    if isinstance(path, Prop):
        return Inverse(path)
    if isinstance(path, Inverse):
        return path.path
    if isinstance(path, Union_):
        return Union_(_push_inverse(path.left), _push_inverse(path.right))
    if isinstance(path, Compose):
        return Compose(_push_inverse(path.right), _push_inverse(path.left))
    if isinstance(path, Star):
        return Star(_push_inverse(path.path))
    return Optional_(_push_inverse(path.path))


def format_path(path: PathExpr, prec: int = 0) -> str:
    # precedence: union 0 < composition 1 < postfix 2
    if isinstance(path, Prop):
        return path.name
    if isinstance(path, Inverse):
        if isinstance(path.path, Prop):
            return "^" + path.path.name
        return format_path(_push_inverse(path.path), prec)
    if isinstance(path, Union_):
        s = f"{format_path(path.left, 0)} | {format_path(path.right, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(path, Compose):
        s = f"{format_path(path.left, 1)} / {format_path(path.right, 2)}"
        return f"({s})" if prec > 1 else s
    op = "*" if isinstance(path, Star) else "?"
    return format_path(path.path, 2) + op


def format_shape(phi: ShapeExpr, prec: int = 0) -> str:
    # precedence: or 0 < and 1 < not/atoms 2
    if isinstance(phi, Top):
        return "top"
    if isinstance(phi, Name):
        return phi.name
    if isinstance(phi, Nominal):
        return "{" + phi.const + "}"
    if isinstance(phi, Or):
        s = f"{format_shape(phi.left, 0)} or {format_shape(phi.right, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(phi, And):
        s = f"{format_shape(phi.left, 1)} and {format_shape(phi.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(phi, Not):
        return "not " + format_shape(phi.arg, 2)
    if isinstance(phi, GeqN):
        return f"geq {phi.n} ({format_path(phi.path)}, {format_shape(phi.arg)})"
    if isinstance(phi, Forall):
        return f"forall ({format_path(phi.path)}, {format_shape(phi.arg)})"
    if isinstance(phi, Eq):
        return f"eq ({format_path(phi.left)}, {format_path(phi.right)})"
    if isinstance(phi, Disj):
        return f"disjoint ({format_path(phi.left)}, {format_path(phi.right)})"
    if isinstance(phi, Closed):
        return f"closed ({', '.join(phi.props)})"
    raise TypeError(f"not a shape expression: {phi!r}")


def format_schema(schema: Schema) -> str:
    lines = [f"shape {r.head} := {format_shape(r.body)};" for r in schema.rules]
    lines += [f"target {format_shape(t.query)} <= {t.target_shape};" for t in schema.targets]
    return "\n".join(lines) + "\n" if lines else ""


def format_assignment(g: Graph, a: ShapeAssignment) -> list[str]:
    return [f"{s} = {{{', '.join(g.names(m))}}}" for s, m in zip(a.vocabulary, a.masks)]


def format_partial(g: Graph, p: PartialInterpretation) -> list[str]:
    lines = []
    for s, lo, hi in zip(p.vocabulary, p.lower.masks, p.upper.masks):
        parts = [f"{v}: {{{', '.join(g.names(m))}}}"
                 for v, m in (("t", lo), ("u", hi & ~lo), ("f", g.full & ~hi))]
        lines.append(f"{s} = " + "; ".join(parts))
    return lines


# -- JSON --------------------------------------------------------------------------------

def assignment_json(g: Graph, a: ShapeAssignment) -> dict[str, list[str]]:
    return a.to_names(g)


def partial_json(g: Graph, p: PartialInterpretation) -> dict[str, dict[str, list[str]]]:
    return {s: {"t": g.names(lo), "u": g.names(hi & ~lo), "f": g.names(g.full & ~hi)}
            for s, lo, hi in zip(p.vocabulary, p.lower.masks, p.upper.masks)}


def report_json(g: Graph, report) -> dict:
    """Serialize a :class:`~recshacl.validate.ValidationReport`.

    Fields: ``format``, ``semantics``, ``mode``, ``passed``,
    ``models_inspected`` (null for KK/WF), ``targets`` (list of ``index``,
    ``target``, ``passed``, ``witnesses``) and ``model`` (KK/WF only).
    """
    out = {
        "format": FORMAT_VERSION,
        "semantics": report.semantics.value,
        "mode": report.mode.value,
        "passed": report.passed,
        "models_inspected": report.models_inspected,
        "targets": [
            {"index": r.index,
             "target": f"{format_shape(r.target.query)} <= {r.target.target_shape}",
             "passed": r.passed,
             "witnesses": list(r.witnesses)}
            for r in report.results
        ],
    }
    if isinstance(report.evidence, PartialInterpretation):
        out["model"] = partial_json(g, report.evidence)
    return out


def comparison_json(g: Graph, record) -> dict:
    """Serialize a :class:`~recshacl.acorss.ComparisonRecord`."""
    models = []
    for c in record.models:
        entry = {"model": assignment_json(g, c.model),
                 "aft_stable": c.aft_stable,
                 "acorss_stable": c.acorss_stable}
        if c.levels is not None:
            entry["levels"] = {s: {g.nodes[a]: lv for (s2, a), lv in sorted(
                c.levels.shape_levels.items(), key=lambda kv: kv[0][1]) if s2 == s}
                for s in c.model.vocabulary}
        if not c.aft_stable:
            entry["lower_lfp"] = assignment_json(g, c.lower_lfp)
        models.append(entry)
    return {"format": FORMAT_VERSION,
            "snf": record.snf,
            "supported": len(record.models),
            "aft_stable": len(record.aft_stable),
            "acorss_stable": len(record.acorss_stable),
            "aft_subset_of_acorss": record.containment,
            "equal": record.equal,
            "models": models}
