"""Regular path expressions and the schema language, round trip."""

from recshacl import eval_path, parse_graph
from recshacl.textio import format_schema, format_shape, parse_schema, parse_shape

g = parse_graph("""
    alice manages bob
    bob manages carol
    carol manages dave
    node eve
""")

for text in ["geq 1 (manages*, {dave})", "forall (manages/manages,top) and not {eve}"]:
    print(text, "->", format_shape(parse_shape(text)))

for expr in ["manages", "^manages", "manages*", "manages / manages", "manages?"]:
    path = parse_shape(f"geq 1 ({expr}, top)").path
    pairs = sorted((g.nodes[x], g.nodes[y]) for x, y in eval_path(path, g).pairs())
    print(f"{expr:>18}: {pairs}")

schema = parse_schema("""
    # a boss manages someone who is either a boss or a worker
    shape Boss := geq 1 (manages, Boss or Worker);
    shape Worker := not geq 1 (manages, top);
    target {alice} <= Boss;
""")
print()
print(format_schema(schema), end="")
assert parse_schema(format_schema(schema)) == schema
