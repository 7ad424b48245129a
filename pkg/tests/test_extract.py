import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from reqcause.annotation import Label, parse_annotation, serialize_annotation, tree_to_relation
from reqcause.corpus import SentenceRecord
from reqcause.errors import EmptyClause, MalformedClause
from reqcause.extract import canonicalize_atom, extract_relations, parse_condition_side, parse_effect_side, relation_to_tree
from reqcause.formula import And, Literal, Or, Polarity, RelationKind, iter_literals, lit

CONJUNCTION = "If A is true and B is false, the system shall show an error message."
ERROR_SENTENCE = "If the system detects an error, an error message shall be shown."
LICENSE = (
    "If the customer is older than 23 years and shows a valid driving license, "
    "the system does not charge an increased fee."
)


def shape(f):
    """Formula as nested tuples of (atom id, positive) leaves."""
    if isinstance(f, Literal):
        return (f.atom.id, f.atom.positive)
    return (type(f).__name__, shape(f.left), shape(f.right))


class TestCanonicalize:
    @pytest.mark.parametrize(
        "surface, atom_id, polarity",
        [
            ("does not charge an increased fee", "charge increased fee", Polarity.NEGATIVE),
            ("The System Detects an Error", "system detects error", Polarity.POSITIVE),
            ("error", "error", Polarity.POSITIVE),
            ("the door shall not open", "door shall open", Polarity.NEGATIVE),
            ("the valve cannot close", "valve can close", Polarity.NEGATIVE),
            ("no error is never reported", "error is reported", Polarity.POSITIVE),
            ("A is true", "a is true", Polarity.POSITIVE),
            ("the  pump   runs.", "pump runs", Polarity.POSITIVE),
        ],
    )
    def test_examples(self, surface, atom_id, polarity):
        atom = canonicalize_atom(surface)
        assert (atom.id, atom.polarity) == (atom_id, polarity)
        assert atom.surface == surface.strip()

    def test_deterministic(self):
        assert canonicalize_atom("The pump runs") == canonicalize_atom("The pump runs")

    def test_negated_and_plain_share_an_id(self):
        assert canonicalize_atom("the system charges a fee").id != ""
        assert canonicalize_atom("the door is not open").id == canonicalize_atom("the door is open").id


class TestParseConditionSide:
    def test_two_conditions(self):
        f = parse_condition_side("A is true and B is false")
        assert shape(f) == ("And", ("a is true", True), ("b is false", True))

    def test_single(self):
        f = parse_condition_side("the user enters a wrong password")
        assert isinstance(f, Literal)
        assert f.atom.surface == "the user enters a wrong password"

    def test_precedence_oracle(self):
        f = parse_condition_side("x or y and z")
        x, y, z = lit("x"), lit("y"), lit("z")
        and_first, or_first = Or(x, And(y, z)), And(Or(x, y), z)
        tables = {
            name: [oracles.value(g, env) for env in oracles.assignments({"x", "y", "z"})]
            for name, g in (("and_first", and_first), ("or_first", or_first), ("got", f))
        }
        assert tables["and_first"] != tables["or_first"]
        assert tables["got"] == tables["and_first"]
        assert f == and_first

    def test_left_associative(self):
        f = parse_condition_side("a or b or c")
        assert shape(f) == ("Or", ("Or", ("a", True), ("b", True)), ("c", True))

    def test_comparative_phrase_kept_whole(self):
        f = parse_condition_side("the temperature is between 10 and 20 degrees")
        assert isinstance(f, Literal)

    def test_noun_coordination_kept_whole(self):
        f = parse_condition_side("the user enters name and password")
        assert isinstance(f, Literal)

    @pytest.mark.parametrize("text", ["", "   ", "and", "x and"])
    def test_empty(self, text):
        with pytest.raises(EmptyClause):
            parse_condition_side(text)

    def test_spans_point_into_sentence(self):
        sentence = "If x is set or y is set, go."
        f = parse_condition_side("x is set or y is set", sentence=sentence, offset=3)
        for literal in iter_literals(f):
            s, e = literal.atom.span
            assert sentence[s:e] == literal.atom.surface

    def test_effect_side_ignores_or(self):
        f = parse_effect_side("the lamp is red or green")
        assert isinstance(f, Literal)


class TestExtract:
    def test_conjunction(self):
        (r,) = extract_relations(CONJUNCTION)
        assert r.kind is RelationKind.EQUIVALENCE
        assert shape(r.cause) == ("And", ("a is true", True), ("b is false", True))
        assert shape(r.effect) == ("system shall show error message", True)
        assert [l.atom.surface for l in iter_literals(r.cause)] == ["A is true", "B is false"]

    def test_single_condition(self):
        (r,) = extract_relations(ERROR_SENTENCE)
        assert shape(r.cause) == ("system detects error", True)
        assert shape(r.effect) == ("error message shall be shown", True)

    def test_driving_license(self):
        (r,) = extract_relations(LICENSE)
        assert shape(r.cause) == (
            "And",
            ("customer is older than 23 years", True),
            ("shows valid driving license", True),
        )
        assert shape(r.effect) == ("system charge increased fee", False)

    @pytest.mark.parametrize("sentence", ["The database stores records.", "", "Drive slowly."])
    def test_no_cue(self, sentence):
        assert extract_relations(sentence) == []

    def test_cue_without_clause_boundary(self):
        with pytest.raises(MalformedClause):
            extract_relations("Since 2010 the protocol is deprecated.")

    def test_clause_initial_cue_mid_sentence_ignored(self):
        assert extract_relations("The sensor is checked since it may fail.") == []

    def test_effect_first(self):
        (r,) = extract_relations("The pump starts when the water level rises.")
        assert shape(r.cause) == ("water level rises", True)
        assert shape(r.effect) == ("pump starts", True)

    def test_then(self):
        (r,) = extract_relations("If the door opens then the light turns on.")
        assert shape(r.effect) == ("light turns on", True)
        (r2,) = extract_relations("When the door opens, then the light turns on.")
        assert r2.effect == r.effect

    def test_because(self):
        (r,) = extract_relations("Because the battery is low, the device enters power saving mode.")
        assert shape(r.cause) == ("battery is low", True)

    def test_effect_conjunction(self):
        (r,) = extract_relations("If the alarm sounds, the door locks and the light flashes.")
        assert shape(r.effect) == ("And", ("door locks", True), ("light flashes", True))

    def test_record_ids_and_source(self):
        record = SentenceRecord("doc", 2, 1, ERROR_SENTENCE)
        (r,) = extract_relations(record)
        assert r.id == "doc:2:1:0"
        assert r.source is record

    def test_spans_cover_disjoint_substrings(self):
        (r,) = extract_relations(LICENSE)
        spans = sorted(l.atom.span for l in itertools.chain(iter_literals(r.cause), iter_literals(r.effect)))
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            assert e1 <= s2
        for l in itertools.chain(iter_literals(r.cause), iter_literals(r.effect)):
            assert LICENSE[l.atom.span[0] : l.atom.span[1]] == l.atom.surface

    def test_deterministic(self):
        assert extract_relations(LICENSE) == extract_relations(LICENSE)
        assert extract_relations(LICENSE)[0].id == extract_relations(LICENSE)[0].id


class TestRelationToTree:
    def test_conjunction_tree(self):
        (r,) = extract_relations(CONJUNCTION)
        tree = relation_to_tree(r)
        assert serialize_annotation(tree) == (
            "[S [c] [CR [CON [C A is true] [C B is false]] [E the system shall show an error message]]]"
        )

    def test_single_cause(self):
        (r,) = extract_relations(ERROR_SENTENCE)
        tree = relation_to_tree(r)
        leaves = [(t.label, t.text) for t in tree.leaves() if t.text]
        assert leaves == [(Label.C, "the system detects an error"), (Label.E, "an error message shall be shown")]

    def test_three_cause_conjunction_nests_left(self):
        (r,) = extract_relations("If the pump runs and the valve opens and the tank fills, the alarm stops.")
        cr = relation_to_tree(r).children[1]
        con = cr.children[0]
        assert con.label is Label.CON
        assert con.children[0].label is Label.CON
        assert con.children[1].label is Label.C
        # structural oracle from the cause parser
        assert shape(r.cause)[0] == "And" and shape(r.cause)[1][0] == "And"

    def test_requires_source(self):
        with pytest.raises(ValueError):
            relation_to_tree(type(extract_relations(ERROR_SENTENCE)[0])("r", lit("a"), lit("b")))

    def test_round_trip_through_parser(self):
        for sentence in (CONJUNCTION, ERROR_SENTENCE, LICENSE, "The pump starts when the water level rises."):
            (r,) = extract_relations(sentence)
            tree = relation_to_tree(r)
            assert parse_annotation(serialize_annotation(tree), sentence) == tree
            assert tree_to_relation(tree, relation_id=r.id) == r


# generated sentences with a hand-labelled clause pool: (text, atom id, positive)
CLAUSES = [
    ("the sensor reports a fault", "sensor reports fault", True),
    ("the door is open", "door is open", True),
    ("the user presses the button", "user presses button", True),
    ("the timer expires", "timer expires", True),
    ("the battery is not charged", "battery is charged", False),
    ("the network is unavailable", "network is unavailable", True),
    ("the operator confirms the request", "operator confirms request", True),
]
EFFECTS = [
    "the system shall stop the motor",
    "an alarm shall be raised",
    "the display shows a warning",
]


@st.composite
def generated_sentences(draw):
    n = draw(st.integers(1, 4))
    chosen = draw(st.permutations(CLAUSES))[:n]
    ops = [draw(st.sampled_from(["and", "or"])) for _ in range(n - 1)]
    cue = draw(st.sampled_from(["If", "When", "In case"]))
    then = draw(st.sampled_from([", ", ", then "]))
    effect = draw(st.sampled_from(EFFECTS))
    cause = chosen[0][0]
    for op, clause in zip(ops, chosen[1:]):
        cause += f" {op} {clause[0]}"
    return f"{cue} {cause}{then}{effect}.", chosen, ops


def grouping_oracle(chosen, ops, env):
    """Evaluate the clause list with and-before-or, left to right."""
    values = [env[cid] == positive for _, cid, positive in chosen]
    disjuncts, current = [], values[0]
    for op, value in zip(ops, values[1:]):
        if op == "and":
            current = current and value
        else:
            disjuncts.append(current)
            current = value
    disjuncts.append(current)
    return any(disjuncts)


class TestProperties:
    @given(generated_sentences())
    @settings(max_examples=200)
    def test_combinatorics_preserved(self, generated):
        sentence, chosen, ops = generated
        (r,) = extract_relations(sentence)
        ids = {cid for _, cid, _ in chosen}
        assert set(r.cause_atoms) == ids
        for env in oracles.assignments(ids):
            assert oracles.value(r.cause, env) == grouping_oracle(chosen, ops, env)

    @given(generated_sentences())
    @settings(max_examples=200)
    def test_no_word_level_degradation(self, generated):
        sentence, chosen, _ = generated
        (r,) = extract_relations(sentence)
        surfaces = [l.atom.surface for l in itertools.chain(iter_literals(r.cause), iter_literals(r.effect))]
        assert sorted(s for s in surfaces[: len(chosen)]) == sorted(text for text, _, _ in chosen)
        for surface in surfaces:
            assert surface in sentence
            assert len(surface.split()) > 1

    @given(generated_sentences())
    @settings(max_examples=100)
    def test_deterministic_and_round_trips(self, generated):
        sentence, _, _ = generated
        (r,) = extract_relations(sentence)
        assert extract_relations(sentence) == [r]
        assert tree_to_relation(relation_to_tree(r), relation_id=r.id) == r


def test_random_pool_sentences_never_crash():
    rng = random.Random(7)
    for _ in range(200):
        words = rng.choices(["if", "the", "pump", "runs", "and", "or", ",", "when", "stops", "since"], k=rng.randint(1, 12))
        sentence = " ".join(words) + "."
        try:
            extract_relations(sentence)
        except MalformedClause:
            pass
