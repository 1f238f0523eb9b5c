"""Who may go to work?  Contact tracing under four semantics.

The graph records who is close to whom, who is vaccinated and who has
symptoms.  ``atRisk`` is recursive: being close to someone at risk is
enough.  The three-clique a, b, c is where the semantics disagree.
"""

from recshacl import (SemanticsKind, ValidationMode, enumerate_supported, kripke_kleene,
                      load_example, parse_graph, parse_schema, validate, well_founded)
from recshacl.textio import format_assignment, format_partial

g = parse_graph(load_example("covid.graph"))
schema = parse_schema(load_example("at_risk.shacl"))

print("Kripke-Kleene model (a and b stay undecided):")
for line in format_partial(g, kripke_kleene(schema, g)):
    print("   ", line)

print("\nWell-founded model (the unfounded loop through a and b is dropped):")
for line in format_partial(g, well_founded(schema, g)):
    print("   ", line)

print("\nSupported models:")
for m in enumerate_supported(schema, g):
    print("   ", "; ".join(format_assignment(g, m)))

print("\nTarget 'everyone can work':")
for sem in SemanticsKind:
    for mode in ValidationMode:
        report = validate(schema, g, sem, mode)
        witnesses = sorted({w for r in report.results for w in r.witnesses})
        print(f"    {sem.value:>9} {mode.value:<8} {'PASS' if report.passed else 'FAIL'}",
              ", ".join(witnesses))
