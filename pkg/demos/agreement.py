"""
Annotator agreement and extractor scoring
=========================================

"""

from reqcause import (
    RatingMatrix,
    evaluate_extraction,
    extract_relations,
    fleiss_agreement,
    parse_annotation,
    relation_to_tree,
)

# three annotators label ten sentences as causal (c) or not (nc)
ratings = [
    ["c", "c", "c"], ["c", "c", "nc"], ["nc", "nc", "nc"], ["c", "c", "c"], ["c", "nc", "nc"],
    ["c", "c", "c"], ["nc", "nc", "nc"], ["c", "c", "nc"], ["c", "c", "c"], ["nc", "c", "nc"],
]
print(fleiss_agreement(RatingMatrix.from_labels(ratings)).to_dict())

# gold trees double as the benchmark for the extractor
sentence = "If the pump runs, the light is on."
gold = parse_annotation("[S [c] [CR [C the pump runs] [E the light is on]]]", sentence)
predicted = relation_to_tree(extract_relations(sentence)[0])
for label, score in evaluate_extraction([predicted], [gold]).items():
    print(label, score.to_dict())
