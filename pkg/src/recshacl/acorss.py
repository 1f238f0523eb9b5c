"""Level-mapping stable models and their comparison with the approximator-based ones.

A level assignment ranks every (subformula occurrence, node) that is true in
a supported model.  Connective levels follow from their children:

* ``and``: max of both sides; ``or``: min over the true disjuncts;
* ``>=n E.phi``: the n-th smallest level among true E-successors;
* ``forall E.phi``: max over true E-successors (0 if none);
* ``top``, nominals, ``eq``, ``disjoint``, ``closed`` and any true negation: 0.

The only free choice is the level of each true shape atom (s, a), which must
exceed the level of its rule body at ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Graph, ShapeAssignment, bits
from .evaluate import eval_path, eval_shape_2v, property_universe
from .fixpoint import DEFAULT_MAX_CANDIDATES, enumerate_supported, is_supported, program
from .schema import And, Forall, GeqN, Name, Or, Schema, ShapeExpr, children, is_snf

Occurrence = tuple[str, tuple[int, ...]]  # (rule head, child positions from the body root)


class NotSupportedError(ValueError):
    pass


@dataclass
class LevelAssignment:
    shape_levels: dict[tuple[str, int], int]
    occurrence_levels: dict[tuple[Occurrence, int], int]

    def level(self, shape: str, node: int) -> int:
        return self.shape_levels[shape, node]


class _Context:
    """Truth sets of every body occurrence in a fixed two-valued model."""

    def __init__(self, schema: Schema, g: Graph, m: ShapeAssignment):
        self.schema, self.g, self.m = schema, g, m
        self.props = property_universe(g, schema.property_names())
        self.truth: dict[Occurrence, frozenset[int]] = {}
        self.formula: dict[Occurrence, ShapeExpr] = {}
        for r in schema.rules:
            self._index(r.head, (), r.body)

    def _index(self, head: str, pos: tuple[int, ...], phi: ShapeExpr) -> None:
        occ = (head, pos)
        self.formula[occ] = phi
        self.truth[occ] = eval_shape_2v(phi, self.g, self.m, self.props)
        for k, c in enumerate(children(phi)):
            self._index(head, pos + (k,), c)

    def true_atoms(self) -> list[tuple[str, int]]:
        return [(s, a) for s in self.schema.vocabulary for a in sorted(self.m.nodes(s))]

    def level(self, occ: Occurrence, a: int, atoms: dict[tuple[str, int], int],
              record: dict | None = None) -> int:
        """Level of a true occurrence at ``a`` given the shape-atom levels."""
        phi = self.formula[occ]
        head, pos = occ
        sub = [(head, pos + (k,)) for k in range(len(children(phi)))]
        if isinstance(phi, Name):
            v = atoms[phi.name, a]
        elif isinstance(phi, And):
            v = max(self.level(c, a, atoms, record) for c in sub)
        elif isinstance(phi, Or):
            v = min(self.level(c, a, atoms, record) for c in sub if a in self.truth[c])
        elif isinstance(phi, GeqN):
            (c,) = sub
            succ = sorted(self.level(c, b, atoms, record)
                          for b in bits(eval_path(phi.path, self.g).rows[a]) if b in self.truth[c])
            v = succ[phi.n - 1]
        elif isinstance(phi, Forall):
            (c,) = sub
            v = max((self.level(c, b, atoms, record)
                     for b in bits(eval_path(phi.path, self.g).rows[a]) if b in self.truth[c]),
                    default=0)
        else:
            # top, nominal, eq, disjoint, closed, and true negations
            v = 0
        if record is not None:
            record[occ, a] = v
        return v


def minimal_levels(schema: Schema, g: Graph, m: ShapeAssignment) -> LevelAssignment | None:
    """The pointwise-least level assignment for the supported model ``m``, or None.

    Shape-atom levels start at 0 and are raised to one above their body's
    level until stable.  In a least solution every level is one more than
    another atom's level or than 0, so no level exceeds the number of true
    atoms; crossing that bound proves that no assignment exists.
    """
    if not is_supported(schema, g, m):
        raise NotSupportedError("level assignments are defined for supported models only")
    ctx = _Context(schema, g, m)
    true_atoms = ctx.true_atoms()
    bound = len(true_atoms)
    atoms = {t: 0 for t in true_atoms}
    while True:
        new = {(s, a): ctx.level((s, ()), a, atoms) + 1 for s, a in true_atoms}
        if new == atoms:
            break
        if any(v > bound for v in new.values()):
            return None
        atoms = new
    record: dict = {}
    for r in schema.rules:
        for a in sorted(ctx.truth[r.head, ()]):
            ctx.level((r.head, ()), a, atoms, record)
    _fill_occurrences(ctx, atoms, record)
    return LevelAssignment(atoms, record)


def _fill_occurrences(ctx: _Context, atoms: dict, record: dict) -> None:
    """Give every true (occurrence, node) a level, including those under negations."""
    for occ in ctx.formula:
        for a in sorted(ctx.truth[occ]):
            if (occ, a) not in record:
                ctx.level(occ, a, atoms, record)


def check_levels(schema: Schema, g: Graph, m: ShapeAssignment, levels: LevelAssignment) -> bool:
    """Re-verify every clause and the strict rule condition from scratch."""
    ctx = _Context(schema, g, m)
    occ_levels = levels.occurrence_levels
    for occ, phi in ctx.formula.items():
        head, pos = occ
        sub = [(head, pos + (k,)) for k in range(len(children(phi)))]
        for a in ctx.truth[occ]:
            v = occ_levels.get((occ, a))
            if v is None or v < 0:
                return False
            if isinstance(phi, Name):
                ok = v == levels.shape_levels.get((phi.name, a))
            elif isinstance(phi, And):
                ok = v == max(occ_levels[c, a] for c in sub)
            elif isinstance(phi, Or):
                ok = v == min(occ_levels[c, a] for c in sub if a in ctx.truth[c])
            elif isinstance(phi, GeqN):
                (c,) = sub
                succ = [b for b in bits(eval_path(phi.path, g).rows[a]) if b in ctx.truth[c]]
                k = 0
                while sum(occ_levels[c, b] <= k for b in succ) < phi.n:
                    k += 1
                ok = v == k
            elif isinstance(phi, Forall):
                (c,) = sub
                ok = v == max((occ_levels[c, b] for b in bits(eval_path(phi.path, g).rows[a])
                               if b in ctx.truth[c]), default=0)
            else:
                ok = v == 0
            if not ok:
                return False
    for s, a in ctx.true_atoms():
        if not levels.shape_levels[s, a] > occ_levels[(s, ()), a]:
            return False
    return True


def is_acorss_stable(schema: Schema, g: Graph, m: ShapeAssignment) -> bool:
    return is_supported(schema, g, m) and minimal_levels(schema, g, m) is not None


@dataclass
class ModelComparison:
    model: ShapeAssignment
    aft_stable: bool
    acorss_stable: bool
    levels: LevelAssignment | None
    lower_lfp: ShapeAssignment  # least fixpoint of z -> psi(z, model).lower


@dataclass
class ComparisonRecord:
    snf: bool
    models: list[ModelComparison] = field(default_factory=list)

    @property
    def aft_stable(self) -> list[ShapeAssignment]:
        return [c.model for c in self.models if c.aft_stable]

    @property
    def acorss_stable(self) -> list[ShapeAssignment]:
        return [c.model for c in self.models if c.acorss_stable]

    @property
    def containment(self) -> bool:
        return all(c.acorss_stable for c in self.models if c.aft_stable)

    @property
    def equal(self) -> bool:
        return all(c.acorss_stable == c.aft_stable for c in self.models)


class SemanticsMismatch(AssertionError):
    pass


def compare_semantics(schema: Schema, g: Graph,
                      max_candidates: int = DEFAULT_MAX_CANDIDATES) -> ComparisonRecord:
    """Classify every supported model as AFT-stable and/or ACORSS-stable.

    Raises :class:`SemanticsMismatch` if an AFT-stable model is not
    ACORSS-stable, or if the schema is in shape normal form and the two
    notions differ on some model.
    """
    prog = program(schema, g)
    record = ComparisonRecord(snf=is_snf(schema))
    for m in enumerate_supported(schema, g, max_candidates):
        lower = prog.lower_lfp(m.masks)
        levels = minimal_levels(schema, g, m)
        record.models.append(ModelComparison(m, lower == m.masks, levels is not None, levels,
                                             prog.assignment(lower)))
    if not record.containment:
        raise SemanticsMismatch("an AFT-stable model has no level assignment")
    if record.snf and not record.equal:
        raise SemanticsMismatch("in shape normal form the two stable semantics must coincide")
    return record
