"""Causal relation extraction from requirement sentences, and what to do with them.

The main entry points, by stage:

- :func:`preprocess_document` turns raw document lines into sentence records
- :func:`detect_cues` / :func:`corpus_stats` find causal cue phrases
- :func:`extract_relations` builds full cause ⟺ effect formulas
- :func:`find_dependencies` relates requirements to each other
- :func:`enumerate_tests` / :func:`heuristic_suite` derive test cases
- :func:`parse_annotation` / :func:`fleiss_kappa` support corpus annotation
"""

from .annotation import (
    AnnotationTree,
    Label,
    RatingMatrix,
    evaluate_extraction,
    fleiss_agreement,
    fleiss_kappa,
    parse_annotation,
    serialize_annotation,
    tree_to_relation,
)
from .corpus import RawDocument, SentenceRecord, preprocess_document
from .cues import DEFAULT_LEXICON, CueEntry, classify_sentence, corpus_stats, detect_cues
from .extract import canonicalize_atom, extract_relations, parse_condition_side, relation_to_tree
from .formula import (
    And,
    Atom,
    CausalRelation,
    Literal,
    Not,
    Or,
    RelationKind,
    conjoin,
    disjoin,
    lit,
    render,
)
from .logic import (
    eval_formula,
    find_dependencies,
    is_contradictory,
    is_redundant,
    merge_same_effect,
    refines,
    relation_semantics,
    requires,
)
from .testgen import (
    enumerate_tests,
    expected_effects,
    heuristic_suite,
    suite_coverage,
    suite_to_csv,
)

__version__ = "0.1.0"
