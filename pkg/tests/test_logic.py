import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from generators import formulas, random_relation, rel, relations
from reqcause.errors import AtomLimitExceeded, EffectMismatch, UnboundAtom
from reqcause.formula import And, Not, Or, RelationKind, conjoin, disjoin, lit
from reqcause.logic import (
    DependencyKind,
    TruthTable,
    eval_formula,
    find_dependencies,
    is_contradictory,
    is_redundant,
    merge_by_effect,
    merge_same_effect,
    refines,
    relation_semantics,
    requires,
    scan_dependencies,
)

c1, c2, c3 = lit("c1"), lit("c2"), lit("c3")
e1, e2 = lit("e1"), lit("e2")
not_e1 = lit("e1", positive=False)
IMPL, EQ = RelationKind.IMPLICATION, RelationKind.EQUIVALENCE


class TestSemantics:
    @pytest.mark.parametrize(
        "kind, c, e, expected",
        [
            (IMPL, True, False, False),
            (IMPL, False, True, True),
            (IMPL, False, False, True),
            (IMPL, True, True, True),
            (EQ, False, False, True),
            (EQ, False, True, False),
            (EQ, True, False, False),
            (EQ, True, True, True),
        ],
    )
    def test_single_cause(self, kind, c, e, expected):
        f = relation_semantics(rel("r", c1, e1, kind))
        assert eval_formula(f, {"c1": c, "e1": e}) is expected

    @pytest.mark.parametrize("n", range(1, 11))
    def test_equivalence_true_exactly_where_sides_agree(self, n):
        names = [f"x{i}" for i in range(n)]
        rng = random.Random(n)
        cause_names, effect_names = names[: max(1, n - 1)], names[max(1, n - 1):] or ["y"]
        cause = conjoin(lit(x, rng.random() < 0.5) for x in cause_names)
        if n > 2:
            cause = Or(cause, lit(cause_names[0], False))
        effect = conjoin(lit(x) for x in effect_names)
        r = rel("r", cause, effect)
        sem = relation_semantics(r)
        for env in oracles.assignments(set(cause_names) | set(effect_names)):
            assert eval_formula(sem, env) == (oracles.value(cause, env) == oracles.value(effect, env))


class TestEval:
    def test_literal(self):
        assert eval_formula(lit("x"), {"x": True}) is True

    def test_contradiction_false_everywhere(self):
        f = And(lit("x"), Not(lit("x")))
        assert not eval_formula(f, {"x": True})
        assert not eval_formula(f, {"x": False})

    def test_table_one_cause(self):
        f = And(lit("a is true"), lit("b is false"))
        assert eval_formula(f, {"a is true": True, "b is false": True})

    def test_unbound(self):
        with pytest.raises(UnboundAtom):
            eval_formula(And(lit("x"), lit("y")), {"x": True})

    @given(formulas(names=("a", "b", "c", "d", "e")))
    def test_truth_table_matches_pointwise_eval(self, f):
        tt = TruthTable(oracles.atoms(f))
        table = tt.table(f)
        for index in range(tt.size):
            assert bool(table >> index & 1) == oracles.value(f, tt.assignment(index))


class TestMerge:
    def test_two_requirements(self):
        r1 = rel("detects", lit("system detects error"), lit("error message shall be shown"))
        r2 = rel("password", lit("user enters wrong password"), lit("error message shall be shown"))
        merged = merge_same_effect([r1, r2])
        assert merged.cause == Or(r1.cause, r2.cause)
        assert merged.effect == r1.effect
        assert merged.kind is EQ

    def test_single_is_identity(self):
        r = rel("r", c1, e1)
        assert merge_same_effect([r]) is r

    def test_three_left_associated(self):
        rs = [rel(f"r{i}", c, e1) for i, c in enumerate((c1, c2, c3))]
        merged = merge_same_effect(rs)
        assert merged.cause == Or(Or(c1, c2), c3)
        for env in oracles.assignments({"c1", "c2", "c3"}):
            assert oracles.value(merged.cause, env) == (env["c1"] or env["c2"] or env["c3"])

    def test_effect_mismatch(self):
        with pytest.raises(EffectMismatch):
            merge_same_effect([rel("a", c1, e1), rel("b", c2, not_e1)])

    def test_implication_rejected(self):
        with pytest.raises(EffectMismatch):
            merge_same_effect([rel("a", c1, e1), rel("b", c2, e1, IMPL)])

    def test_merge_by_effect_groups(self):
        rs = [rel("a", c1, e1), rel("b", c2, e2), rel("c", c3, e1)]
        merged = merge_by_effect(rs)
        assert [r.id for r in merged] == ["a+c", "b"]

    @given(st.lists(formulas(names=("a", "b", "c"), negation=False), min_size=1, max_size=4))
    def test_merged_semantics_is_disjunction(self, causes):
        rs = [rel(f"r{i}", c, lit("e")) for i, c in enumerate(causes)]
        sem = relation_semantics(merge_same_effect(rs))
        for env in oracles.assignments({"a", "b", "c", "e"}):
            any_cause = any(oracles.value(c, env) for c in causes)
            assert eval_formula(sem, env) == (any_cause == env["e"])


class TestContradictory:
    def test_basic_example(self):
        found = is_contradictory(rel("r1", c1, e1), rel("r2", c1, not_e1))
        assert found is not None
        assert found.clashing == ("e1",)
        # witness satisfies r1 and therefore breaks r2
        assert oracles.holds(rel("r1", c1, e1), found.witness)
        assert not oracles.holds(rel("r2", c1, not_e1), found.witness)

    def test_disjoint_atoms(self):
        assert is_contradictory(rel("r1", c1, e1), rel("r2", c2, e2)) is None

    def test_conjunction_vs_negated(self):
        r1, r2 = rel("r1", And(c1, c2), e1), rel("r2", c1, not_e1)
        # brute force: c1=T, c2=F, e1=F satisfies both, so no contradiction
        assert oracles.contradictory(r1, r2) is False
        assert is_contradictory(r1, r2) is None

    def test_atom_cap(self):
        big = rel("big", conjoin(lit(f"c{i}") for i in range(20)), e1)
        with pytest.raises(AtomLimitExceeded):
            is_contradictory(big, rel("r", c1, e2))
        assert is_contradictory(big, rel("r", c1, e2), atom_cap=22) is None


class TestRequires:
    def test_basic_example(self):
        assert requires(rel("r1", c1, e1), rel("r2", e1, e2)) == "e1"

    def test_disjoint(self):
        assert requires(rel("r1", c1, e1), rel("r2", c2, e2)) is None

    def test_polarity_insensitive(self):
        assert requires(rel("r1", c1, not_e1), rel("r2", e1, e2)) == "e1"

    def test_direction(self):
        assert requires(rel("r2", e1, e2), rel("r1", c1, e1)) is None


class TestRedundant:
    def test_identical(self):
        assert is_redundant(rel("r1", c1, e1), rel("r2", c1, e1))

    def test_commutative(self):
        assert is_redundant(rel("r1", And(c1, c2), e1), rel("r2", And(c2, c1), e1))

    def test_idempotent_or(self):
        r1, r2 = rel("r1", c1, e1), rel("r2", Or(c1, c1), e1)
        assert oracles.redundant(r1, r2)
        assert is_redundant(r1, r2)

    def test_not_redundant(self):
        assert not is_redundant(rel("r1", c1, e1), rel("r2", And(c1, c2), e1))


class TestRefines:
    def test_basic_example(self):
        r1, r2 = rel("r1", c1, e1), rel("r2", And(c1, c2), e1)
        assert refines(r1, r2)
        assert not refines(r2, r1)

    def test_identical_is_strictly_excluded(self):
        assert not refines(rel("r1", c1, e1), rel("r2", c1, e1))

    def test_disjunction_refines_single(self):
        r1, r2 = rel("r1", Or(c1, c2), e1), rel("r2", c1, e1)
        assert oracles.refines(r1, r2)
        assert refines(r1, r2)

    def test_effect_must_match(self):
        assert not refines(rel("r1", c1, e1), rel("r2", And(c1, c2), not_e1))


PAIRS = {
    "a": (rel("ra1", c1, e1), rel("ra2", c1, not_e1)),
    "b": (rel("rb1", c1, e1), rel("rb2", e1, e2)),
    "c": (rel("rc1", c1, e1), rel("rc2", c1, e1)),
    "d": (rel("rd1", c1, e1), rel("rd2", And(c1, c2), e1)),
}


class TestFindDependencies:
    @pytest.mark.parametrize(
        "pair, expected",
        [
            ("a", (DependencyKind.CONTRADICTORY, "ra1", "ra2")),
            ("b", (DependencyKind.REQUIRES, "rb2", "rb1")),
            ("c", (DependencyKind.REDUNDANT, "rc1", "rc2")),
            ("d", (DependencyKind.REFINES, "rd1", "rd2")),
        ],
    )
    def test_example_pairs(self, pair, expected):
        findings = find_dependencies(PAIRS[pair])
        assert [(f.kind, f.left, f.right) for f in findings] == [expected]

    def test_requires_witness_is_atom(self):
        (finding,) = find_dependencies(PAIRS["b"])
        assert finding.witness == "e1"

    def test_single(self):
        assert find_dependencies([rel("r", c1, e1)]) == []

    def test_over_cap_reported_not_fatal(self):
        big = rel("big", conjoin(lit(f"c{i}") for i in range(25)), e1)
        findings, skipped = scan_dependencies([big, rel("r", lit("c0"), e2)])
        assert [(s.left, s.right) for s in skipped] == [("big", "r")]
        assert findings == []

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            find_dependencies([rel("r", c1, e1), rel("r", c2, e2)])

    @pytest.mark.parametrize("seed", range(20))
    def test_random_suites_match_pairwise_oracle(self, seed):
        rng = random.Random(seed)
        rs = [random_relation(rng, f"r{i}", ["a", "b", "c", "d", "e"]) for i in range(5)]
        expected = []
        for a, b in itertools.combinations(rs, 2):
            for left, right in ((a, b), (b, a)):
                via = oracles.requires(right, left)
                if via:
                    expected.append(("requires", left.id, right.id))
            if oracles.contradictory(a, b):
                expected.append(("contradictory", a.id, b.id))
            if oracles.redundant(a, b):
                expected.append(("redundant", a.id, b.id))
                continue
            for left, right in ((a, b), (b, a)):
                if oracles.refines(left, right):
                    expected.append(("refines", left.id, right.id))
        got = [(f.kind.value, f.left, f.right) for f in find_dependencies(rs)]
        assert got == sorted(expected)


pairs = st.tuples(relations(rid="p", implication_rate=0.2), relations(rid="q", implication_rate=0.2))


class TestProperties:
    @given(pairs)
    @settings(max_examples=300)
    def test_checks_agree_with_oracle(self, pair):
        r1, r2 = pair
        assert (is_contradictory(r1, r2) is not None) == oracles.contradictory(r1, r2)
        assert is_redundant(r1, r2) == oracles.redundant(r1, r2)
        assert refines(r1, r2) == oracles.refines(r1, r2)
        assert requires(r1, r2) == oracles.requires(r1, r2)

    @given(relations())
    def test_never_self_contradictory(self, r):
        assert is_contradictory(r, r) is None

    @given(pairs)
    def test_contradiction_symmetric(self, pair):
        r1, r2 = pair
        assert (is_contradictory(r1, r2) is None) == (is_contradictory(r2, r1) is None)

    @given(st.lists(relations(pool=("a", "b", "c", "d")), min_size=3, max_size=3))
    def test_redundancy_is_an_equivalence(self, rs):
        a, b, c = rs
        assert is_redundant(a, a)
        assert is_redundant(a, b) == is_redundant(b, a)
        if is_redundant(a, b) and is_redundant(b, c):
            assert is_redundant(a, c)

    @given(pairs)
    def test_refines_irreflexive_antisymmetric_and_not_redundant(self, pair):
        r1, r2 = pair
        assert not refines(r1, r1)
        assert not (refines(r1, r2) and refines(r2, r1))
        if r1.kind is r2.kind is EQ:
            assert not (refines(r1, r2) and is_redundant(r1, r2))
