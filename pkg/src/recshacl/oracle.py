"""Brute-force reference semantics for tests.

Shares only the evaluators with the main engine; sweeps the whole
interpretation space with no pruning.
"""

from __future__ import annotations

import graphlib
import itertools

from .core import Graph, PartialInterpretation, ShapeAssignment, precision_leq
from .evaluate import compile_shape_3v, eval_shape_2v, property_universe
from .schema import Schema, shape_names

SUPPORTED_CAP = 20
PARTIAL_STABLE_CAP = 12


class OracleCapExceeded(RuntimeError):
    pass


def _atoms(schema: Schema, g: Graph) -> int:
    return len(schema.vocabulary) * g.size


def _two_valued_step(schema: Schema, g: Graph, props, a: ShapeAssignment) -> ShapeAssignment:
    return ShapeAssignment.from_sets(
        schema.vocabulary, {r.head: eval_shape_2v(r.body, g, a, props) for r in schema.rules},
        g.size)


def oracle_supported(schema: Schema, g: Graph) -> list[ShapeAssignment]:
    n = _atoms(schema, g)
    if n > SUPPORTED_CAP:
        raise OracleCapExceeded(f"{n} atoms > {SUPPORTED_CAP}")
    props = property_universe(g, schema.property_names())
    k = len(schema.vocabulary)
    out = []
    for masks in itertools.product(range(1 << g.size), repeat=k):
        a = ShapeAssignment(schema.vocabulary, masks, g.size)
        if _two_valued_step(schema, g, props, a) == a:
            out.append(a)
    return sorted(out, key=lambda m: m.masks)


def oracle_partial_stable(schema: Schema, g: Graph) -> list[PartialInterpretation]:
    """Every consistent pair (x, y) with x = lfp(psi(., y).lower) and y = lfp(psi(x, .).upper)."""
    n = _atoms(schema, g)
    if n > PARTIAL_STABLE_CAP:
        raise OracleCapExceeded(f"{n} atoms > {PARTIAL_STABLE_CAP}")
    props = property_universe(g, schema.property_names())
    bodies = [compile_shape_3v(r.body, g, schema.vocabulary, props) for r in schema.rules]
    k = len(schema.vocabulary)

    def psi(lo, hi):
        out = [f(lo, hi) for f in bodies]
        return tuple(x for x, _ in out), tuple(y for _, y in out)

    def lfp(step):
        z = (0,) * k
        while True:
            nxt = step(z)
            if nxt == z:
                return z
            z = nxt

    # each atom: 0 -> f, 1 -> u, 2 -> t
    found = []
    for values in itertools.product((0, 1, 2), repeat=n):
        lo = [0] * k
        hi = [0] * k
        for idx, v in enumerate(values):
            i, x = divmod(idx, g.size)
            if v >= 1:
                hi[i] |= 1 << x
            if v == 2:
                lo[i] |= 1 << x
        lo, hi = tuple(lo), tuple(hi)
        if lfp(lambda z: psi(z, hi)[0]) == lo and lfp(lambda z: psi(lo, z)[1]) == hi:
            found.append(PartialInterpretation(ShapeAssignment(schema.vocabulary, lo, g.size),
                                               ShapeAssignment(schema.vocabulary, hi, g.size)))
    return sorted(found, key=lambda p: (p.lower.masks, p.upper.masks))


def precision_minimum(pairs: list[PartialInterpretation]) -> PartialInterpretation | None:
    """The element below all others in the precision order, if there is one."""
    for p in pairs:
        if all(precision_leq(p, q) for q in pairs):
            return p
    return None


def unique_extension(schema: Schema, g: Graph) -> ShapeAssignment:
    """Evaluate a non-recursive schema bottom-up along its dependency order."""
    props = property_universe(g, schema.property_names())
    deps = {r.head: shape_names(r.body) for r in schema.rules}
    try:
        order = list(graphlib.TopologicalSorter(deps).static_order())
    except graphlib.CycleError as exc:
        raise ValueError("schema is recursive") from exc
    known: dict[str, frozenset[int]] = {}
    for s in order:
        # shapes not yet evaluated are never read: the body only mentions earlier ones
        partial = ShapeAssignment.from_sets(schema.vocabulary, known, g.size)
        known[s] = eval_shape_2v(schema.rule(s).body, g, partial, props)
    return ShapeAssignment.from_sets(schema.vocabulary, known, g.size)
