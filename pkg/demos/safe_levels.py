"""Two notions of stable model, and why shape normal form matters.

``Safe`` holds for vaccinated nodes and for nodes with fewer than two
unsafe neighbours.  Level mappings accept a self-supporting "everyone is
safe" model that the approximator-based definition rejects.  Naming every
subformula closes the gap.
"""

from recshacl import (compare_semantics, load_example, minimal_levels, parse_graph, parse_schema,
                      to_snf)
from recshacl.textio import format_assignment, format_schema

g = parse_graph(load_example("covid.graph"))
schema = parse_schema(load_example("safe.shacl"))

record = compare_semantics(schema, g)
print(f"AFT-stable: {len(record.aft_stable)}, ACORSS-stable: {len(record.acorss_stable)}")
for c in record.models:
    tags = [name for name, flag in (("AFT", c.aft_stable), ("ACORSS", c.acorss_stable)) if flag]
    print("  ", "; ".join(format_assignment(g, c.model)), "|", ", ".join(tags))

everyone = record.acorss_stable[-1]
levels = minimal_levels(schema, g, everyone)
print("\nlevels certifying the 'everyone safe' model:")
for (shape, node), level in sorted(levels.shape_levels.items()):
    print(f"    {shape}({g.nodes[node]}) = {level}")

snf = to_snf(schema)
print("\nshape normal form:")
print(format_schema(snf.schema), end="")
after = compare_semantics(snf.schema, g)
print(f"after normalisation: AFT-stable {len(after.aft_stable)}, "
      f"ACORSS-stable {len(after.acorss_stable)}")
