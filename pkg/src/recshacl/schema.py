"""Path expressions, shapes, schemas, shape dependencies and shape normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Union


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col_start: int
    col_end: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col_start}"


class SchemaError(ValueError):
    """A schema violates a well-formedness condition."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


def _span():
    return field(default=None, compare=False, repr=False)


# -- path expressions ---------------------------------------------------------

@dataclass(frozen=True)
class Prop:
    name: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Inverse:
    path: "PathExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Union_:
    left: "PathExpr"
    right: "PathExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Compose:
    left: "PathExpr"
    right: "PathExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Star:
    path: "PathExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Optional_:
    path: "PathExpr"
    span: SourceSpan | None = _span()


PathExpr = Union[Prop, Inverse, Union_, Compose, Star, Optional_]


# -- shapes --------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Name:
    name: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Nominal:
    const: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class And:
    left: "ShapeExpr"
    right: "ShapeExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Or:
    left: "ShapeExpr"
    right: "ShapeExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Not:
    arg: "ShapeExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Forall:
    path: PathExpr
    arg: "ShapeExpr"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class GeqN:
    n: int
    path: PathExpr
    arg: "ShapeExpr"
    span: SourceSpan | None = _span()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise SchemaError(f"qualified number restriction needs n >= 1, got {self.n}", self.span)


@dataclass(frozen=True)
class Eq:
    left: PathExpr
    right: PathExpr
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Disj:
    left: PathExpr
    right: PathExpr
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Closed:
    props: tuple[str, ...]
    span: SourceSpan | None = _span()


ShapeExpr = Union[Top, Name, Nominal, And, Or, Not, Forall, GeqN, Eq, Disj, Closed]

SHAPE_FREE = (Top, Nominal, Eq, Disj, Closed)


def exists(path: PathExpr, arg: ShapeExpr) -> GeqN:
    return GeqN(1, path, arg)


def at_most(n: int, path: PathExpr, arg: ShapeExpr) -> Not:
    """<=n E.phi, shorthand for not >=(n+1) E.phi."""
    return Not(GeqN(n + 1, path, arg))


def children(phi: ShapeExpr) -> tuple[ShapeExpr, ...]:
    if isinstance(phi, (And, Or)):
        return phi.left, phi.right
    if isinstance(phi, (Not, Forall, GeqN)):
        return (phi.arg,)
    return ()


def subformulas(phi: ShapeExpr) -> Iterator[ShapeExpr]:
    """Pre-order traversal of all subformula occurrences."""
    yield phi
    for c in children(phi):
        yield from subformulas(c)


def shape_names(phi: ShapeExpr) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Name)}


def constants(phi: ShapeExpr) -> set[str]:
    return {f.const for f in subformulas(phi) if isinstance(f, Nominal)}


def path_props(path: PathExpr) -> set[str]:
    if isinstance(path, Prop):
        return {path.name}
    if isinstance(path, (Inverse, Star, Optional_)):
        return path_props(path.path)
    return path_props(path.left) | path_props(path.right)


def shape_props(phi: ShapeExpr) -> set[str]:
    out: set[str] = set()
    for f in subformulas(phi):
        if isinstance(f, (Forall, GeqN)):
            out |= path_props(f.path)
        elif isinstance(f, (Eq, Disj)):
            out |= path_props(f.left) | path_props(f.right)
        elif isinstance(f, Closed):
            out |= set(f.props)
    return out


# -- schemas -------------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    head: str
    body: ShapeExpr
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Target:
    query: ShapeExpr
    target_shape: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Schema:
    """A rule set defining every shape name exactly once, plus target inclusions.

    Well-formedness is checked on construction.
    """

    rules: tuple[Rule, ...] = ()
    targets: tuple[Target, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "targets", tuple(self.targets))
        seen: dict[str, Rule] = {}
        for r in self.rules:
            if r.head in seen:
                raise SchemaError(f"shape {r.head!r} defined more than once", r.span)
            seen[r.head] = r
        for r in self.rules:
            for f in subformulas(r.body):
                if isinstance(f, Name) and f.name not in seen:
                    raise SchemaError(f"undefined shape name {f.name!r} in rule for {r.head!r}",
                                      f.span or r.span)
        for t in self.targets:
            for f in subformulas(t.query):
                if isinstance(f, Name):
                    raise SchemaError(f"target query mentions shape name {f.name!r}",
                                      f.span or t.span)
            if t.target_shape not in seen:
                raise SchemaError(f"target refers to undefined shape {t.target_shape!r}", t.span)

    @cached_property
    def vocabulary(self) -> tuple[str, ...]:
        return tuple(r.head for r in self.rules)

    @cached_property
    def _by_head(self) -> dict[str, Rule]:
        return {r.head: r for r in self.rules}

    def rule(self, head: str) -> Rule:
        try:
            return self._by_head[head]
        except KeyError:
            raise KeyError(f"unknown shape name {head!r}") from None

    def property_names(self) -> set[str]:
        out: set[str] = set()
        for r in self.rules:
            out |= shape_props(r.body)
        for t in self.targets:
            out |= shape_props(t.query)
        return out

    def constants(self) -> set[str]:
        out: set[str] = set()
        for r in self.rules:
            out |= constants(r.body)
        for t in self.targets:
            out |= constants(t.query)
        return out

    @cached_property
    def _hash(self) -> int:
        return hash((self.rules, self.targets))

    def __hash__(self) -> int:
        return self._hash


def _direct_deps(schema: Schema) -> dict[str, set[str]]:
    return {r.head: shape_names(r.body) for r in schema.rules}


def dependency_closure(schema: Schema) -> dict[str, set[str]]:
    """For every shape name, the set of shape names it depends on."""
    direct = _direct_deps(schema)
    closure: dict[str, set[str]] = {}
    for s in schema.vocabulary:
        seen: set[str] = set()
        stack = list(direct[s])
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(direct[x])
        closure[s] = seen
    return closure


def depends_on(schema: Schema, s1: str, s2: str) -> bool:
    for s in (s1, s2):
        schema.rule(s)
    return s2 in dependency_closure(schema)[s1]


def is_recursive(schema: Schema) -> bool:
    return any(s in deps for s, deps in dependency_closure(schema).items())


# -- shape normal form ---------------------------------------------------------

SNF_PREFIX = "_snf"


def is_snf_body(body: ShapeExpr) -> bool:
    if isinstance(body, SHAPE_FREE):
        return True
    if isinstance(body, Not):
        return isinstance(body.arg, Name)
    if isinstance(body, (And, Or)):
        return isinstance(body.left, Name) and isinstance(body.right, Name)
    if isinstance(body, (GeqN, Forall)):
        return isinstance(body.arg, Name)
    return False


def is_snf(schema: Schema) -> bool:
    return all(is_snf_body(r.body) for r in schema.rules)


class SnfResult(NamedTuple):
    schema: Schema
    original: tuple[str, ...]
    introduced: dict[str, ShapeExpr]  # fresh name -> subformula it stands for


def to_snf(schema: Schema) -> SnfResult:
    """Name every proper shape subformula so each body is a single connective over names.

    A body that is a bare shape name ``s'`` becomes ``s' and s'``.
    """
    taken = set(schema.vocabulary)
    introduced: dict[str, ShapeExpr] = {}
    counter = 0
    out: list = []

    def fresh() -> str:
        nonlocal counter
        while True:
            counter += 1
            name = f"{SNF_PREFIX}{counter}"
            if name not in taken:
                taken.add(name)
                return name

    def name_of(phi: ShapeExpr) -> Name:
        if isinstance(phi, Name):
            return phi
        q = fresh()
        introduced[q] = phi
        slot = len(out)
        out.append(None)  # reserve: parent rule precedes the rules of its subformulas
        out[slot] = Rule(q, flatten(phi))
        return Name(q)

    def flatten(body: ShapeExpr) -> ShapeExpr:
        if is_snf_body(body):
            return body
        if isinstance(body, Name):
            return And(body, body)
        if isinstance(body, Not):
            return Not(name_of(body.arg))
        if isinstance(body, And):
            return And(name_of(body.left), name_of(body.right))
        if isinstance(body, Or):
            return Or(name_of(body.left), name_of(body.right))
        if isinstance(body, GeqN):
            return GeqN(body.n, body.path, name_of(body.arg))
        if isinstance(body, Forall):
            return Forall(body.path, name_of(body.arg))
        raise TypeError(f"not a shape expression: {body!r}")

    for r in schema.rules:
        slot = len(out)
        out.append(None)
        out[slot] = Rule(r.head, flatten(r.body), r.span)
    return SnfResult(Schema(tuple(out), schema.targets), schema.vocabulary, introduced)
