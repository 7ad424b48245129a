"""Derive test cases from a causal equivalence.

A case fixes every cause atom and predicts every effect atom. When the cause
formula holds, each effect atom takes the value its literal asks for;
otherwise every effect literal is negated. Assignments are ordered as binary
numbers over the sorted cause atoms, first atom most significant.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import NoTogglePair, TooManyCauses, UnsupportedKind
from .formula import And, CausalRelation, Formula, Literal, Not, RelationKind, effect_literals
from .logic import Assignment, TruthTable, eval_formula

DEFAULT_CAUSE_CAP = 12
# heuristic search falls back to structural sensitization above this size
SEARCH_CAP = 20


class Scenario(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Strategy(str, Enum):
    EXHAUSTIVE = "exhaustive"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    cause_values: dict[str, bool]
    expected_effects: dict[str, bool]
    scenario: Scenario

    def key(self) -> tuple[bool, ...]:
        return tuple(self.cause_values[a] for a in sorted(self.cause_values))


@dataclass(frozen=True)
class TestSuite:
    __test__ = False

    relation_id: str
    cases: tuple[TestCase, ...]
    strategy: Strategy
    uninfluential: tuple[str, ...] = field(default=())

    def __post_init__(self):
        keys = [c.key() for c in self.cases]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate cause assignments in suite")

    def __len__(self) -> int:
        return len(self.cases)


def _check_relation(r: CausalRelation) -> list[tuple[str, bool]]:
    if r.kind is not RelationKind.EQUIVALENCE:
        raise UnsupportedKind("implications leave the negative scenario unspecified")
    return effect_literals(r.effect)


def expected_effects(r: CausalRelation, cause_values: Assignment) -> dict[str, bool]:
    literals = _check_relation(r)
    holds = eval_formula(r.cause, cause_values)
    return {atom: (wanted if holds else not wanted) for atom, wanted in sorted(literals)}


def make_case(r: CausalRelation, cause_values: Assignment) -> TestCase:
    values = {a: bool(cause_values[a]) for a in r.cause_atoms}
    holds = eval_formula(r.cause, values)
    return TestCase(
        values,
        expected_effects(r, values),
        Scenario.POSITIVE if holds else Scenario.NEGATIVE,
    )


def enumerate_tests(r: CausalRelation, cap: int = DEFAULT_CAUSE_CAP) -> TestSuite:
    """All ``2**n`` cause assignments in ascending binary order."""
    _check_relation(r)
    atoms = r.cause_atoms
    if len(atoms) > cap:
        raise TooManyCauses(len(atoms), cap)
    tt = TruthTable(atoms)
    cases = tuple(make_case(r, tt.assignment(i)) for i in range(tt.size))
    return TestSuite(r.id, cases, Strategy.EXHAUSTIVE)


def _sensitize(f: Formula, atom: str) -> dict[str, bool] | None:
    """Values for the other atoms that make ``f`` depend on ``atom``.

    Exact for read-once formulas; callers verify the result.
    """

    def force(g: Formula, value: bool) -> dict[str, bool] | None:
        if isinstance(g, Literal):
            return {g.atom.id: value if g.atom.positive else not value}
        if isinstance(g, Not):
            return force(g.child, not value)
        # value needed from both sides: And→true, Or→false; otherwise either side
        both = value if isinstance(g, And) else not value
        if both:
            left, right = force(g.left, value), force(g.right, value)
            if left is None or right is None:
                return None
            if any(left.get(k, v) != v for k, v in right.items()):
                return None
            return {**left, **right}
        return force(g.left, value)

    def path(g: Formula) -> dict[str, bool] | None:
        if isinstance(g, Literal):
            return {} if g.atom.id == atom else None
        if isinstance(g, Not):
            return path(g.child)
        neutral = isinstance(g, And)
        for here, other in ((g.left, g.right), (g.right, g.left)):
            inner = path(here)
            if inner is None:
                continue
            side = force(other, neutral)
            if side is None or atom in side:
                continue
            if any(inner.get(k, v) != v for k, v in side.items()):
                continue
            return {**inner, **side}
        return None

    return path(f)


def heuristic_suite(r: CausalRelation, search_cap: int = SEARCH_CAP) -> TestSuite:
    """All-true, all-false, and one toggle pair per influential cause atom.

    Toggle partners are taken from cases already in the suite when possible,
    which keeps the suite small; otherwise the first pair in binary order is
    added. Atoms without a toggle pair are listed in ``uninfluential`` and
    reported through a :class:`NoTogglePair` warning.
    """
    _check_relation(r)
    atoms = r.cause_atoms
    n = len(atoms)
    tt = TruthTable(atoms) if n <= search_cap else None
    table = tt.table(r.cause) if tt is not None else None

    def value(bits: tuple[bool, ...]) -> bool:
        return eval_formula(r.cause, dict(zip(atoms, bits)))

    chosen: list[tuple[bool, ...]] = []

    def add(bits: tuple[bool, ...]) -> None:
        if bits not in chosen:
            chosen.append(bits)

    add((True,) * n)
    add((False,) * n)
    uninfluential = []
    for i, atom in enumerate(atoms):
        pair = None
        for bits in list(chosen):
            flipped = bits[:i] + (not bits[i],) + bits[i + 1 :]
            if value(bits) != value(flipped):
                pair = (bits, flipped)
                break
        if pair is None and tt is not None:
            bit = n - 1 - i
            diff = (table ^ (table >> (1 << bit))) & ~tt.variable(i) & tt.mask
            if diff:
                low = (diff & -diff).bit_length() - 1
                a = tt.assignment(low)
                bits = tuple(a[x] for x in atoms)
                pair = (bits, bits[:i] + (True,) + bits[i + 1 :])
        elif pair is None:
            side = _sensitize(r.cause, atom)
            if side is not None:
                bits = tuple(side.get(x, False) for x in atoms)
                flipped = bits[:i] + (not bits[i],) + bits[i + 1 :]
                if value(bits) != value(flipped):
                    pair = (bits, flipped)
        if pair is None:
            uninfluential.append(atom)
            warnings.warn(NoTogglePair(atom), stacklevel=2)
            continue
        add(pair[0])
        add(pair[1])
    chosen.sort()
    cases = tuple(make_case(r, dict(zip(atoms, bits))) for bits in chosen)
    return TestSuite(r.id, cases, Strategy.HEURISTIC, tuple(uninfluential))


@dataclass(frozen=True)
class CoverageReport:
    has_positive: bool
    has_negative: bool
    toggled: tuple[str, ...]
    influential: tuple[str, ...] | None
    covered: int
    space: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.covered, self.space)

    @property
    def gaps(self) -> list[str]:
        out = []
        if not self.has_positive:
            out.append("no positive scenario")
        if not self.has_negative:
            out.append("no negative scenario")
        if self.influential is not None:
            out.extend(f"atom {a!r} never toggled" for a in self.influential if a not in self.toggled)
        return out

    @property
    def complete(self) -> bool:
        return not self.gaps

    def to_dict(self) -> dict:
        return {
            "has_positive": self.has_positive,
            "has_negative": self.has_negative,
            "toggled": list(self.toggled),
            "influential": list(self.influential) if self.influential is not None else None,
            "covered": self.covered,
            "space": self.space,
            "fraction": float(self.fraction),
            "gaps": self.gaps,
        }


def suite_coverage(suite: TestSuite, r: CausalRelation, search_cap: int = SEARCH_CAP) -> CoverageReport:
    atoms = r.cause_atoms
    values = {c.key(): eval_formula(r.cause, c.cause_values) for c in suite.cases}
    toggled = []
    for i, atom in enumerate(atoms):
        for key, v in values.items():
            partner = key[:i] + (not key[i],) + key[i + 1 :]
            if partner in values and values[partner] != v:
                toggled.append(atom)
                break
    influential = None
    if len(atoms) <= search_cap:
        tt = TruthTable(atoms)
        table = tt.table(r.cause)
        influential = tuple(
            atom
            for i, atom in enumerate(atoms)
            if (table ^ (table >> (1 << (len(atoms) - 1 - i)))) & ~tt.variable(i) & tt.mask
        )
    return CoverageReport(
        has_positive=any(v for v in values.values()),
        has_negative=any(not v for v in values.values()),
        toggled=tuple(toggled),
        influential=influential,
        covered=len(values),
        space=1 << len(atoms),
    )


def _tf(value: bool) -> str:
    return "T" if value else "F"


def suite_to_csv(suite: TestSuite) -> str:
    """CSV with ``case_id``, one column per cause then effect atom, ``scenario``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    causes = sorted(suite.cases[0].cause_values) if suite.cases else []
    effects = sorted(suite.cases[0].expected_effects) if suite.cases else []
    writer.writerow(["case_id", *causes, *effects, "scenario"])
    for i, case in enumerate(suite.cases, 1):
        writer.writerow(
            [
                i,
                *(_tf(case.cause_values[a]) for a in causes),
                *(_tf(case.expected_effects[a]) for a in effects),
                case.scenario.value,
            ]
        )
    return buf.getvalue()


def suite_to_dict(suite: TestSuite) -> dict:
    return {
        "relation_id": suite.relation_id,
        "strategy": suite.strategy.value,
        "uninfluential": list(suite.uninfluential),
        "cases": [
            {
                "case_id": i,
                "causes": {a: _tf(v) for a, v in sorted(case.cause_values.items())},
                "effects": {a: _tf(v) for a, v in sorted(case.expected_effects.items())},
                "scenario": case.scenario.value,
            }
            for i, case in enumerate(suite.cases, 1)
        ],
    }
