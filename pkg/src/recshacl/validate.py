"""Brave and cautious validation of target inclusions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import Graph, PartialInterpretation, ShapeAssignment, TruthValue
from .evaluate import compile_shape_3v, eval_shape_2v, property_universe
from .fixpoint import DEFAULT_MAX_CANDIDATES, SemanticsKind, models
from .schema import And, Name, Not, Schema, Target


class ValidationMode(enum.Enum):
    BRAVE = "brave"
    CAUTIOUS = "cautious"


@dataclass(frozen=True)
class TargetResult:
    index: int
    target: Target
    passed: bool
    witnesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    semantics: SemanticsKind
    mode: ValidationMode
    results: tuple[TargetResult, ...]
    models_inspected: int | None = None
    evidence: object = field(default=None, compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def violation(target: Target) -> And:
    """The shape ``query and not s`` whose satisfaction witnesses a failed inclusion."""
    return And(target.query, Not(Name(target.target_shape)))


def _three_valued(schema: Schema, g: Graph, model: PartialInterpretation,
                  mode: ValidationMode) -> list[TargetResult]:
    props = property_universe(g, schema.property_names())
    out = []
    for k, t in enumerate(schema.targets):
        lo, hi = compile_shape_3v(violation(t), g, schema.vocabulary, props)(
            model.lower.masks, model.upper.masks)
        # cautious: the violation must be f everywhere; brave: never t
        bad = hi if mode is ValidationMode.CAUTIOUS else lo
        out.append(TargetResult(k, t, not bad, tuple(g.names(bad))))
    return out


def _model_set(schema: Schema, g: Graph, ms: list[ShapeAssignment],
               mode: ValidationMode) -> list[TargetResult]:
    props = property_universe(g, schema.property_names())
    out = []
    for k, t in enumerate(schema.targets):
        phi = violation(t)
        violators = [eval_shape_2v(phi, g, m, props) for m in ms]
        if mode is ValidationMode.CAUTIOUS:
            bad = frozenset().union(*violators)
            passed = not bad
        else:
            passed = any(not v for v in violators)
            bad = frozenset() if passed or not violators else frozenset.intersection(*violators)
        out.append(TargetResult(k, t, passed, tuple(g.nodes[i] for i in sorted(bad))))
    return out


def validate(schema: Schema, g: Graph, semantics: SemanticsKind, mode: ValidationMode,
             max_candidates: int = DEFAULT_MAX_CANDIDATES) -> ValidationReport:
    """Check every target of ``schema`` on ``g`` under ``semantics`` in ``mode``.

    Witnesses of a failing target are, for KK/WF, the nodes where the
    violation is not f (cautious) or is t (brave); for model sets, the nodes
    violating in some model (cautious) or in every model (brave).  An empty
    model set passes cautiously and fails bravely.
    """
    evidence = models(schema, g, semantics, max_candidates)
    if isinstance(evidence, PartialInterpretation):
        return ValidationReport(semantics, mode, tuple(_three_valued(schema, g, evidence, mode)),
                                None, evidence)
    return ValidationReport(semantics, mode, tuple(_model_set(schema, g, evidence, mode)),
                            len(evidence), evidence)


def validates_unique(schema: Schema, g: Graph, extension: ShapeAssignment) -> bool:
    """Two-valued check that every target query is contained in its shape."""
    props = property_universe(g, schema.property_names())
    return all(eval_shape_2v(t.query, g, extension, props) <= extension.nodes(t.target_shape)
               for t in schema.targets)


def target_values(schema: Schema, g: Graph, model: PartialInterpretation,
                  target: Target) -> list[TruthValue]:
    """Kleene value of the violation shape at every node, in domain order."""
    props = property_universe(g, schema.property_names())
    lo, hi = compile_shape_3v(violation(target), g, schema.vocabulary, props)(
        model.lower.masks, model.upper.masks)
    return [TruthValue.T if lo >> x & 1 else TruthValue.U if hi >> x & 1 else TruthValue.F
            for x in range(g.size)]

