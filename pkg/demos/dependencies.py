"""
Dependencies between requirements
=================================

"""

from reqcause import And, CausalRelation, find_dependencies, lit, merge_same_effect, render

c1, c2, e1, e2 = lit("c1"), lit("c2"), lit("e1"), lit("e2")

relations = [
    CausalRelation("contra-1", c1, e1),
    CausalRelation("contra-2", c1, lit("e1", positive=False)),
    CausalRelation("chain-1", lit("c3"), lit("e3")),
    CausalRelation("chain-2", lit("e3"), lit("e4")),
    CausalRelation("twin-1", lit("c5"), lit("e5")),
    CausalRelation("twin-2", lit("c5"), lit("e5")),
    CausalRelation("broad", lit("c7"), lit("e7")),
    CausalRelation("narrow", And(lit("c7"), lit("c8")), lit("e7")),
]

# a finding reads "left <kind> right"
for f in find_dependencies(relations):
    print(f.left, f.kind.value, f.right, f.witness or "")

# two requirements with one effect become one disjunctive relation
merged = merge_same_effect([CausalRelation("req1", c1, e1), CausalRelation("req2", c2, e1)])
print(merged.id, ":", render(merged.cause), "<=>", render(merged.effect))
