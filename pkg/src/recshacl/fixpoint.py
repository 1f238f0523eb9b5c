"""The shape operator, its three-valued approximator and the fixpoints they induce."""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Callable, Sequence

from .core import Graph, PartialInterpretation, ShapeAssignment, bits
from .evaluate import compile_shape_3v, eval_shape_2v, property_universe
from .schema import Schema

DEFAULT_MAX_CANDIDATES = 1 << 22


class SemanticsKind(enum.Enum):
    SUPPORTED = "supported"
    STABLE = "stable"
    WELL_FOUNDED = "wf"
    KRIPKE_KLEENE = "kk"


class ResourceLimitError(RuntimeError):
    """Model enumeration would exceed the configured candidate cap."""

    def __init__(self, needed: int, cap: int, what: str = "candidates"):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what}: {needed} exceeds the cap max_candidates={cap}")


class NonMonotoneError(RuntimeError):
    pass


class Program:
    """A schema bound to a graph, with every rule body compiled to bitset form."""

    def __init__(self, schema: Schema, g: Graph):
        self.schema = schema
        self.graph = g
        self.vocabulary = schema.vocabulary
        self.size = g.size
        self.props = property_universe(g, schema.property_names())
        self.bodies = [compile_shape_3v(r.body, g, self.vocabulary, self.props)
                       for r in schema.rules]
        self.bottom = (0,) * len(self.vocabulary)
        self.top = (g.full,) * len(self.vocabulary)

    @property
    def height(self) -> int:
        return len(self.vocabulary) * self.size

    def psi(self, lo: Sequence[int], hi: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        out = [f(lo, hi) for f in self.bodies]
        return tuple(l for l, _ in out), tuple(h for _, h in out)

    def lower_lfp(self, hi: Sequence[int]) -> tuple[int, ...]:
        """Least fixpoint of z -> psi(z, hi).lower."""
        return _iterate(lambda z: self.psi(z, hi)[0], self.bottom, self.height)

    def upper_lfp(self, lo: Sequence[int]) -> tuple[int, ...]:
        """Least fixpoint of z -> psi(lo, z).upper."""
        return _iterate(lambda z: self.psi(lo, z)[1], self.bottom, self.height)

    def assignment(self, masks: Sequence[int]) -> ShapeAssignment:
        return ShapeAssignment(self.vocabulary, masks, self.size)

    def pair(self, lo: Sequence[int], hi: Sequence[int]) -> PartialInterpretation:
        return PartialInterpretation(self.assignment(lo), self.assignment(hi))


@lru_cache(maxsize=64)
def program(schema: Schema, g: Graph) -> Program:
    return Program(schema, g)


def _iterate(f, start, height: int):
    x = start
    for _ in range(height + 2):
        y = f(x)
        if y == x:
            return x
        x = y
    raise NonMonotoneError(f"no fixpoint after {height + 2} steps; operator is not monotone")


def _check_vocabulary(schema: Schema, g: Graph, vocabulary, size) -> None:
    if tuple(vocabulary) != schema.vocabulary or size != g.size:
        raise ValueError("interpretation does not match the schema vocabulary and graph domain")


# -- operators -----------------------------------------------------------------

def t_op(schema: Schema, g: Graph, a: ShapeAssignment) -> ShapeAssignment:
    """Two-valued operator: every shape becomes the node set of its body, simultaneously."""
    _check_vocabulary(schema, g, a.vocabulary, a.size)
    props = property_universe(g, schema.property_names())
    return ShapeAssignment.from_sets(
        schema.vocabulary, {r.head: eval_shape_2v(r.body, g, a, props) for r in schema.rules},
        g.size)


def psi_op(schema: Schema, g: Graph, p: PartialInterpretation) -> PartialInterpretation:
    """Three-valued approximator of :func:`t_op`."""
    _check_vocabulary(schema, g, p.vocabulary, p.size)
    prog = program(schema, g)
    return prog.pair(*prog.psi(p.lower.masks, p.upper.masks))


def lfp_monotone(f: Callable[[ShapeAssignment], ShapeAssignment],
                 bottom: ShapeAssignment) -> ShapeAssignment:
    """Least fixpoint of a monotone operator by iteration from ``bottom``."""
    return _iterate(f, bottom, len(bottom.vocabulary) * bottom.size)


# -- three-valued models -------------------------------------------------------

def kripke_kleene(schema: Schema, g: Graph) -> PartialInterpretation:
    """The precision-least fixpoint of the approximator."""
    prog = program(schema, g)
    lo, hi = _iterate(lambda p: prog.psi(*p), (prog.bottom, prog.top), 2 * prog.height)
    return prog.pair(lo, hi)


def stable_revision(schema: Schema, g: Graph, p: PartialInterpretation) -> PartialInterpretation:
    _check_vocabulary(schema, g, p.vocabulary, p.size)
    prog = program(schema, g)
    return prog.pair(prog.lower_lfp(p.upper.masks), prog.upper_lfp(p.lower.masks))


def _well_founded_masks(prog: Program) -> tuple[tuple[int, ...], tuple[int, ...]]:
    def revise(p):
        lo, hi = p
        return prog.lower_lfp(hi), prog.upper_lfp(lo)
    return _iterate(revise, (prog.bottom, prog.top), 2 * prog.height)


def well_founded(schema: Schema, g: Graph) -> PartialInterpretation:
    """The precision-least partial stable fixpoint, by iterating the stable revision."""
    prog = program(schema, g)
    return prog.pair(*_well_founded_masks(prog))


def is_supported(schema: Schema, g: Graph, a: ShapeAssignment) -> bool:
    return t_op(schema, g, a) == a


def is_stable(schema: Schema, g: Graph, a: ShapeAssignment) -> bool:
    if not is_supported(schema, g, a):
        return False
    return program(schema, g).lower_lfp(a.masks) == a.masks


def is_partial_stable(schema: Schema, g: Graph, p: PartialInterpretation) -> bool:
    return stable_revision(schema, g, p) == p


# -- enumeration ---------------------------------------------------------------

def _branch(prog: Program, lo: Sequence[int], hi: Sequence[int]):
    """Undecided atoms of the pair (lo, hi) as (shape index, node) in vocabulary-then-domain order."""
    return [(i, x) for i in range(len(prog.vocabulary)) for x in bits(hi[i] & ~lo[i])]


def enumerate_supported(schema: Schema, g: Graph,
                        max_candidates: int = DEFAULT_MAX_CANDIDATES) -> list[ShapeAssignment]:
    """All fixpoints of :func:`t_op`, sorted.

    Candidates agree with the Kripke-Kleene model wherever it is decided; only
    its unknown atoms are branched on.
    """
    prog = program(schema, g)
    kk = kripke_kleene(schema, g)
    free = _branch(prog, kk.lower.masks, kk.upper.masks)
    if 1 << len(free) > max_candidates:
        raise ResourceLimitError(1 << len(free), max_candidates)
    models = []
    for choice in itertools.product((0, 1), repeat=len(free)):
        masks = list(kk.lower.masks)
        for (i, x), bit in zip(free, choice):
            if bit:
                masks[i] |= 1 << x
        a = prog.assignment(masks)
        if is_supported(schema, g, a):
            models.append(a)
    return sorted(models, key=lambda m: m.masks)


def enumerate_stable(schema: Schema, g: Graph,
                     max_candidates: int = DEFAULT_MAX_CANDIDATES) -> list[ShapeAssignment]:
    prog = program(schema, g)
    return [a for a in enumerate_supported(schema, g, max_candidates)
            if prog.lower_lfp(a.masks) == a.masks]


def enumerate_partial_stable(schema: Schema, g: Graph,
                             max_candidates: int = DEFAULT_MAX_CANDIDATES
                             ) -> list[PartialInterpretation]:
    """All consistent pairs fixed by the stable revision.

    Every partial stable fixpoint is at least as precise as the well-founded
    model, so only atoms it leaves unknown are branched on (three ways each).
    """
    prog = program(schema, g)
    wlo, whi = _well_founded_masks(prog)
    free = _branch(prog, wlo, whi)
    if 3 ** len(free) > max_candidates:
        raise ResourceLimitError(3 ** len(free), max_candidates)
    found = []
    for choice in itertools.product((0, 1, 2), repeat=len(free)):
        lo, hi = list(wlo), list(whi)
        for (i, x), v in zip(free, choice):
            if v == 0:      # f
                hi[i] &= ~(1 << x)
            elif v == 2:    # t
                lo[i] |= 1 << x
        lo, hi = tuple(lo), tuple(hi)
        if prog.psi(lo, hi) != (lo, hi):
            continue
        if prog.lower_lfp(hi) == lo and prog.upper_lfp(lo) == hi:
            found.append(prog.pair(lo, hi))
    return sorted(found, key=lambda p: (p.lower.masks, p.upper.masks))


def models(schema: Schema, g: Graph, semantics: SemanticsKind,
           max_candidates: int = DEFAULT_MAX_CANDIDATES):
    """The sigma-model (KK, WF) or the list of sigma-models (stable, supported)."""
    if semantics is SemanticsKind.KRIPKE_KLEENE:
        return kripke_kleene(schema, g)
    if semantics is SemanticsKind.WELL_FOUNDED:
        return well_founded(schema, g)
    if semantics is SemanticsKind.STABLE:
        return enumerate_stable(schema, g, max_candidates)
    return enumerate_supported(schema, g, max_candidates)

