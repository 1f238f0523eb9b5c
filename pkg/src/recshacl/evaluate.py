"""Evaluation of path expressions and shapes.

Three evaluators live here:

* :func:`eval_shape_2v` -- node sets in a two-valued interpretation.
* :func:`eval_shape_3v` -- the Kleene value at one node of a partial interpretation.
* :func:`compile_shape_3v` -- a closure evaluating a shape at every node at
  once on (certainly-true, possibly-true) bitset pairs; the fixpoint engine
  runs on this.

For ``>=n E.phi`` the three-valued evaluator returns f when fewer than ``n``
E-successors are possibly true (value t or u).  Counting successors whose
value is at most u instead would disagree with the two-valued semantics on
exact interpretations.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .core import (BinaryRelation, Graph, PartialInterpretation, ShapeAssignment, TruthValue,
                   bits, mask_of)
from .schema import (And, Closed, Compose, Disj, Eq, Forall, GeqN, Inverse, Name, Nominal, Not,
                     Optional_, Or, PathExpr, Prop, ShapeExpr, Star, Top, Union_, shape_props)


class EvaluationError(LookupError):
    """A shape refers to a shape name or constant the interpretation does not know."""


# -- paths ---------------------------------------------------------------------

def _compose(r1: BinaryRelation, r2: BinaryRelation) -> BinaryRelation:
    rows = []
    for row in r1.rows:
        out = 0
        for c in bits(row):
            out |= r2.rows[c]
        rows.append(out)
    return BinaryRelation(rows)


def _inverse(r: BinaryRelation) -> BinaryRelation:
    rows = [0] * r.size
    for a, row in enumerate(r.rows):
        for b in bits(row):
            rows[b] |= 1 << a
    return BinaryRelation(rows)


def _star(r: BinaryRelation) -> BinaryRelation:
    rows = []
    for a in range(r.size):
        reach = 1 << a
        frontier = reach
        while frontier:
            nxt = 0
            for c in bits(frontier):
                nxt |= r.rows[c]
            frontier = nxt & ~reach
            reach |= nxt
        rows.append(reach)
    return BinaryRelation(rows)


@lru_cache(maxsize=4096)
def eval_path(path: PathExpr, g: Graph) -> BinaryRelation:
    """The binary relation denoted by ``path`` in ``g``."""
    if isinstance(path, Prop):
        return g.relation(path.name)
    if isinstance(path, Inverse):
        return _inverse(eval_path(path.path, g))
    if isinstance(path, Union_):
        r1, r2 = eval_path(path.left, g), eval_path(path.right, g)
        return BinaryRelation([x | y for x, y in zip(r1.rows, r2.rows)])
    if isinstance(path, Compose):
        return _compose(eval_path(path.left, g), eval_path(path.right, g))
    if isinstance(path, Star):
        return _star(eval_path(path.path, g))
    if isinstance(path, Optional_):
        r = eval_path(path.path, g)
        return BinaryRelation([row | 1 << a for a, row in enumerate(r.rows)])
    raise TypeError(f"not a path expression: {path!r}")


def property_universe(g: Graph, extra: Iterable[str] = ()) -> frozenset[str]:
    """The property names ``closed(Q)`` quantifies over: those of the graph plus ``extra``."""
    return frozenset(g.props) | frozenset(extra)


def _constant(g: Graph, name: str) -> int:
    try:
        return g.index[name]
    except KeyError:
        raise EvaluationError(f"constant {name!r} does not occur in the graph") from None


def _shape_free_mask(phi: ShapeExpr, g: Graph, props: frozenset[str]) -> int:
    """Node set of a shape that mentions no shape names and no boolean structure."""
    if isinstance(phi, Top):
        return g.full
    if isinstance(phi, Nominal):
        return 1 << _constant(g, phi.const)
    if isinstance(phi, Eq):
        r1, r2 = eval_path(phi.left, g).rows, eval_path(phi.right, g).rows
        return mask_of(a for a in range(g.size) if r1[a] == r2[a])
    if isinstance(phi, Disj):
        r1, r2 = eval_path(phi.left, g).rows, eval_path(phi.right, g).rows
        return mask_of(a for a in range(g.size) if not r1[a] & r2[a])
    if isinstance(phi, Closed):
        outside = sorted(props - set(phi.props))
        used = 0
        for p in outside:
            for a, row in enumerate(g.relation(p).rows):
                if row:
                    used |= 1 << a
        return g.full & ~used
    raise TypeError(f"{phi!r} is not shape-free")


def _universe(phi: ShapeExpr, g: Graph, props: Iterable[str] | None) -> frozenset[str]:
    return property_universe(g, shape_props(phi) if props is None else props)


# -- two-valued ----------------------------------------------------------------

def eval_shape_2v(phi: ShapeExpr, g: Graph, a: ShapeAssignment,
                  props: Iterable[str] | None = None) -> frozenset[int]:
    """The node set of ``phi`` when shape names are interpreted by ``a``.

    ``props`` extends the property names that ``closed`` ranges over; it
    defaults to the properties mentioned in ``phi``.
    """
    universe = _universe(phi, g, props)
    domain = frozenset(range(g.size))

    def ev(f: ShapeExpr) -> frozenset[int]:
        if isinstance(f, Name):
            if f.name not in a.vocabulary:
                raise EvaluationError(f"shape name {f.name!r} is not assigned")
            return a.nodes(f.name)
        if isinstance(f, And):
            return ev(f.left) & ev(f.right)
        if isinstance(f, Or):
            return ev(f.left) | ev(f.right)
        if isinstance(f, Not):
            return domain - ev(f.arg)
        if isinstance(f, GeqN):
            inner = ev(f.arg)
            rel = eval_path(f.path, g)
            return frozenset(x for x in domain if len(inner & rel.image(x)) >= f.n)
        if isinstance(f, Forall):
            inner = ev(f.arg)
            rel = eval_path(f.path, g)
            return frozenset(x for x in domain if rel.image(x) <= inner)
        return frozenset(bits(_shape_free_mask(f, g, universe)))

    return ev(phi)


# -- three-valued, one node at a time -----------------------------------------

def eval_shape_3v(phi: ShapeExpr, g: Graph, p: PartialInterpretation, node: int,
                  props: Iterable[str] | None = None) -> TruthValue:
    """Kleene value of ``phi`` at ``node`` in the partial interpretation ``p``."""
    universe = _universe(phi, g, props)

    def ev(f: ShapeExpr, x: int) -> TruthValue:
        if isinstance(f, Name):
            if f.name not in p.vocabulary:
                raise EvaluationError(f"shape name {f.name!r} is not assigned")
            return p.value(f.name, x)
        if isinstance(f, Not):
            return ~ev(f.arg, x)
        if isinstance(f, And):
            return min(ev(f.left, x), ev(f.right, x))
        if isinstance(f, Or):
            return max(ev(f.left, x), ev(f.right, x))
        if isinstance(f, GeqN):
            values = [ev(f.arg, b) for b in eval_path(f.path, g).image(x)]
            if sum(v is TruthValue.T for v in values) >= f.n:
                return TruthValue.T
            if sum(v >= TruthValue.U for v in values) < f.n:
                return TruthValue.F
            return TruthValue.U
        if isinstance(f, Forall):
            values = [ev(f.arg, b) for b in eval_path(f.path, g).image(x)]
            return min(values, default=TruthValue.T)
        return TruthValue.of(bool(_shape_free_mask(f, g, universe) >> x & 1))

    return ev(phi, node)


# -- three-valued, all nodes at once ------------------------------------------

Masks = Sequence[int]
Compiled = Callable[[Masks, Masks], "tuple[int, int]"]


def compile_shape_3v(phi: ShapeExpr, g: Graph, vocabulary: Sequence[str],
                     props: Iterable[str] | None = None) -> Compiled:
    """Compile ``phi`` to ``f(lower, upper) -> (certainly_true, possibly_true)``.

    ``lower``/``upper`` hold one bitset per shape name of ``vocabulary``.  The
    pair need not be consistent: on inconsistent input the closure computes
    the four-valued (Belnap) extension, which the stable revision relies on.
    """
    universe = _universe(phi, g, props)
    index = {s: i for i, s in enumerate(vocabulary)}
    full = g.full

    def comp(f: ShapeExpr) -> Compiled:
        if isinstance(f, Name):
            try:
                i = index[f.name]
            except KeyError:
                raise EvaluationError(f"shape name {f.name!r} is not assigned") from None
            return lambda lo, hi: (lo[i], hi[i])
        if isinstance(f, Not):
            inner = comp(f.arg)

            def neg(lo, hi):
                l, h = inner(lo, hi)
                return full & ~h, full & ~l
            return neg
        if isinstance(f, (And, Or)):
            left, right = comp(f.left), comp(f.right)
            if isinstance(f, And):
                def conj(lo, hi):
                    l1, h1 = left(lo, hi)
                    l2, h2 = right(lo, hi)
                    return l1 & l2, h1 & h2
                return conj

            def disj(lo, hi):
                l1, h1 = left(lo, hi)
                l2, h2 = right(lo, hi)
                return l1 | l2, h1 | h2
            return disj
        if isinstance(f, GeqN):
            inner = comp(f.arg)
            rows = tuple(enumerate(eval_path(f.path, g).rows))
            n = f.n

            def geq(lo, hi):
                l, h = inner(lo, hi)
                rl = rh = 0
                for x, row in rows:
                    if (row & l).bit_count() >= n:
                        rl |= 1 << x
                    if (row & h).bit_count() >= n:
                        rh |= 1 << x
                return rl, rh
            return geq
        if isinstance(f, Forall):
            inner = comp(f.arg)
            rows = tuple(enumerate(eval_path(f.path, g).rows))

            def every(lo, hi):
                l, h = inner(lo, hi)
                rl = rh = 0
                for x, row in rows:
                    if not row & ~l:
                        rl |= 1 << x
                    if not row & ~h:
                        rh |= 1 << x
                return rl, rh
            return every
        m = _shape_free_mask(f, g, universe)
        return lambda lo, hi: (m, m)

    return comp(phi)
