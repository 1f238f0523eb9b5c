"""Random small graphs and schemas for property checks."""

from __future__ import annotations

import random

from .core import Graph
from .schema import (And, Closed, Compose, Disj, Eq, Forall, GeqN, Inverse, Name, Nominal, Not,
                     Optional_, Or, PathExpr, Prop, Rule, Schema, ShapeExpr, Star, Target, Top,
                     Union_)

PROPS = ("p", "q")
CONNECTIVES = ("top", "name", "nominal", "and", "or", "not", "forall", "geq", "eq", "disj",
               "closed")
PATHS = ("prop", "inverse", "union", "compose", "star", "optional")


def random_graph(rng: random.Random, n_nodes: int, density: float = 0.35) -> Graph:
    nodes = [f"n{i}" for i in range(n_nodes)]
    triples = [(a, p, b) for p in PROPS for a in nodes for b in nodes if rng.random() < density]
    return Graph.from_triples(triples, nodes=nodes)


def random_path(rng: random.Random, depth: int = 2) -> PathExpr:
    kind = rng.choice(PATHS) if depth > 0 else rng.choice(("prop", "inverse"))
    if kind == "prop":
        return Prop(rng.choice(PROPS))
    if kind == "inverse":
        return Inverse(Prop(rng.choice(PROPS)))
    if kind == "union":
        return Union_(random_path(rng, depth - 1), random_path(rng, depth - 1))
    if kind == "compose":
        return Compose(random_path(rng, depth - 1), random_path(rng, depth - 1))
    if kind == "star":
        return Star(random_path(rng, depth - 1))
    return Optional_(random_path(rng, depth - 1))


def random_shape(rng: random.Random, names: list[str], nodes: list[str],
                 depth: int = 3) -> ShapeExpr:
    leaves = ["top", "nominal", "eq", "disj", "closed"] + (["name"] * 3 if names else [])
    kinds = list(CONNECTIVES) if names else [k for k in CONNECTIVES if k != "name"]
    kind = rng.choice(kinds if depth > 0 else leaves)
    if kind == "top":
        return Top()
    if kind == "name":
        return Name(rng.choice(names))
    if kind == "nominal":
        return Nominal(rng.choice(nodes))
    if kind == "eq":
        return Eq(random_path(rng, 1), random_path(rng, 1))
    if kind == "disj":
        return Disj(random_path(rng, 1), random_path(rng, 1))
    if kind == "closed":
        return Closed(tuple(p for p in PROPS if rng.random() < 0.5))
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(random_shape(rng, names, nodes, depth - 1),
                   random_shape(rng, names, nodes, depth - 1))
    if kind == "not":
        return Not(random_shape(rng, names, nodes, depth - 1))
    if kind == "forall":
        return Forall(random_path(rng, 1), random_shape(rng, names, nodes, depth - 1))
    return GeqN(rng.randint(1, 2), random_path(rng, 1), random_shape(rng, names, nodes, depth - 1))


def random_schema(rng: random.Random, n_shapes: int, nodes: list[str], recursive: bool = True,
                  n_targets: int = 1, depth: int = 3) -> Schema:
    """Random rules over shapes ``s0..``; without recursion, ``s_i`` only mentions ``s_j``, j > i."""
    names = [f"s{i}" for i in range(n_shapes)]
    rules = []
    for i, s in enumerate(names):
        allowed = names if recursive else names[i + 1:]
        rules.append(Rule(s, random_shape(rng, allowed, nodes, depth)))
    targets = [Target(random_shape(rng, [], nodes, 2), rng.choice(names))
               for _ in range(n_targets if names else 0)]
    return Schema(tuple(rules), tuple(targets))


def random_instance(rng: random.Random, max_shapes: int = 3, max_nodes: int = 3,
                    recursive: bool = True) -> tuple[Schema, Graph]:
    n_nodes = rng.randint(1, max_nodes)
    g = random_graph(rng, n_nodes)
    schema = random_schema(rng, rng.randint(1, max_shapes), list(g.nodes), recursive)
    return schema, g


def connectives_used(schema: Schema) -> set[str]:
    from .schema import subformulas
    names = {Top: "top", Name: "name", Nominal: "nominal", And: "and", Or: "or", Not: "not",
             Forall: "forall", GeqN: "geq", Eq: "eq", Disj: "disj", Closed: "closed"}
    out = set()
    for r in schema.rules:
        for f in subformulas(r.body):
            out.add(names[type(f)])
    return out
