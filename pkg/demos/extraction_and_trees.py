"""
Extracting full causal relations
================================

"""

from reqcause import extract_relations, relation_to_tree, render, serialize_annotation

sentences = [
    "If A is true and B is false, the system shall show an error message.",
    "If the system detects an error, an error message shall be shown.",
    "If the customer is older than 23 years and shows a valid driving license, "
    "the system does not charge an increased fee.",
    "The pump starts when the water level rises or the operator presses start.",
]

# each conjunct stays a whole phrase; negation moves into the literal polarity
for s in sentences:
    (r,) = extract_relations(s)
    print(render(r.cause), "<=>", render(r.effect))

    # the same relation as a bracketed annotation tree
    print("   ", serialize_annotation(relation_to_tree(r)))

# sentences without a cue give nothing
print(extract_relations("The database stores records."))
