"""
Deriving test cases from a causal relation
==========================================

"""

import warnings

from reqcause import (
    And,
    CausalRelation,
    Or,
    conjoin,
    enumerate_tests,
    extract_relations,
    heuristic_suite,
    lit,
    suite_coverage,
    suite_to_csv,
)

(r,) = extract_relations(
    "If the customer is older than 23 years and shows a valid driving license, "
    "the system does not charge an increased fee."
)

# every combination of the two causes: 2**2 cases
print(suite_to_csv(enumerate_tests(r)))

# with more causes the exhaustive suite doubles per cause, while the
# heuristic suite grows linearly: one toggle pair per cause
wide = CausalRelation("wide", conjoin(lit(f"c{i}") for i in range(8)), lit("e"))
print(len(enumerate_tests(wide)), "exhaustive cases")
suite = heuristic_suite(wide)
print(len(suite), "heuristic cases")
print(suite_coverage(suite, wide).to_dict())

# an atom that cannot change the outcome is reported, not silently dropped
masked = CausalRelation("masked", Or(lit("a"), And(lit("a"), lit("b"))), lit("e"))
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    print(heuristic_suite(masked).uninfluential, [str(w.message) for w in caught])
