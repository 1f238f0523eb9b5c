"""Recursive SHACL validation over finite graphs.

Shapes are evaluated in two- and three-valued logic; the shape operator and
its Kleene approximator yield supported, stable, well-founded and
Kripke-Kleene models, against which target inclusions are validated bravely
or cautiously.
"""

from importlib import resources

from .acorss import compare_semantics, is_acorss_stable, minimal_levels
from .core import (BinaryRelation, Graph, PartialInterpretation, ShapeAssignment, TruthValue,
                   assignment_leq_t, exactify, is_exact, precision_leq, truth_leq_t)
from .evaluate import eval_path, eval_shape_2v, eval_shape_3v
from .fixpoint import (SemanticsKind, enumerate_partial_stable, enumerate_stable,
                       enumerate_supported, is_stable, kripke_kleene, lfp_monotone, psi_op,
                       stable_revision, t_op, well_founded)
from .schema import Schema, depends_on, is_recursive, is_snf, to_snf
from .textio import parse_graph, parse_schema
from .validate import ValidationMode, ValidationReport, validate


def load_example(name: str) -> str:
    """Text of a bundled fixture: ``covid.graph``, ``at_risk.shacl`` or ``safe.shacl``."""
    return resources.files(__name__).joinpath("data", name).read_text()


__all__ = [
    "BinaryRelation", "Graph", "PartialInterpretation", "Schema", "SemanticsKind",
    "ShapeAssignment", "TruthValue", "ValidationMode", "ValidationReport", "assignment_leq_t",
    "compare_semantics", "depends_on", "enumerate_partial_stable", "enumerate_stable",
    "enumerate_supported", "eval_path", "eval_shape_2v", "eval_shape_3v", "exactify",
    "is_acorss_stable", "is_exact", "is_recursive", "is_snf", "is_stable", "kripke_kleene",
    "lfp_monotone", "load_example", "minimal_levels", "parse_graph", "parse_schema",
    "precision_leq", "psi_op", "stable_revision", "t_op", "to_snf", "truth_leq_t", "validate",
    "well_founded",
]
