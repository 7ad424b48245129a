"""Boolean semantics of causal relations and pairwise dependency checks.

All checks decide by exhaustive truth tables. A table over ``n`` atoms is
stored as a Python int with ``2**n`` bits: bit ``a`` holds the formula value
under assignment ``a``, where atoms are sorted by id and the first atom is the
most significant bit of ``a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

from .errors import AtomLimitExceeded, EffectMismatch, UnboundAtom
from .formula import (
    And,
    CausalRelation,
    Formula,
    Literal,
    Not,
    Or,
    RelationKind,
    atom_ids,
    disjoin,
    effect_literals,
    negate,
)

Assignment = Mapping[str, bool]

DEFAULT_ATOM_CAP = 20


def eval_formula(f: Formula, a: Assignment) -> bool:
    if isinstance(f, Literal):
        try:
            value = a[f.atom.id]
        except KeyError:
            raise UnboundAtom(f.atom.id) from None
        return bool(value) if f.atom.positive else not value
    if isinstance(f, Not):
        return not eval_formula(f.child, a)
    if isinstance(f, And):
        return eval_formula(f.left, a) and eval_formula(f.right, a)
    return eval_formula(f.left, a) or eval_formula(f.right, a)


def relation_semantics(r: CausalRelation) -> Formula:
    """``¬cause ∨ effect`` for implications, ``(c ∧ e) ∨ (¬c ∧ ¬e)`` for equivalences."""
    if r.kind is RelationKind.IMPLICATION:
        return Or(negate(r.cause), r.effect)
    return Or(And(r.cause, r.effect), And(negate(r.cause), negate(r.effect)))


# truth tables


class TruthTable:
    """Bitset truth tables over a fixed, sorted atom universe."""

    def __init__(self, atoms: Sequence[str]):
        self.atoms = tuple(sorted(set(atoms)))
        self.n = len(self.atoms)
        self.size = 1 << self.n
        self.mask = (1 << self.size) - 1
        self._vars = {atom: self.variable(i) for i, atom in enumerate(self.atoms)}

    def variable(self, index: int) -> int:
        bit = self.n - 1 - index
        width = 1 << bit
        table = ((1 << width) - 1) << width
        period = width << 1
        while period < self.size:
            table |= table << period
            period <<= 1
        return table

    def table(self, f: Formula) -> int:
        if isinstance(f, Literal):
            try:
                t = self._vars[f.atom.id]
            except KeyError:
                raise UnboundAtom(f.atom.id) from None
            return t if f.atom.positive else ~t & self.mask
        if isinstance(f, Not):
            return ~self.table(f.child) & self.mask
        if isinstance(f, And):
            return self.table(f.left) & self.table(f.right)
        return self.table(f.left) | self.table(f.right)

    def assignment(self, index: int) -> dict[str, bool]:
        return {atom: bool(index >> (self.n - 1 - i) & 1) for i, atom in enumerate(self.atoms)}

    def first(self, table: int) -> dict[str, bool] | None:
        if not table:
            return None
        return self.assignment((table & -table).bit_length() - 1)


def _universe(*formulas: Formula, cap: int) -> TruthTable:
    atoms = set().union(*(atom_ids(f) for f in formulas))
    if len(atoms) > cap:
        raise AtomLimitExceeded(len(atoms), cap)
    return TruthTable(atoms)


def is_satisfiable(f: Formula, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    return _universe(f, cap=atom_cap).table(f) != 0


def is_valid(f: Formula, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    tt = _universe(f, cap=atom_cap)
    return tt.table(f) == tt.mask


# dependency checks


@dataclass(frozen=True)
class Contradiction:
    """Two relations cannot hold together.

    ``witness`` is the first assignment satisfying the left relation, which
    therefore violates the right one. ``clashing`` lists effect atoms the two
    relations both constrain.
    """

    witness: dict[str, bool] | None
    clashing: tuple[str, ...]


def is_contradictory(
    r1: CausalRelation, r2: CausalRelation, atom_cap: int = DEFAULT_ATOM_CAP
) -> Contradiction | None:
    """A contradiction when the conjunction of both semantics is unsatisfiable."""
    s1, s2 = relation_semantics(r1), relation_semantics(r2)
    tt = _universe(s1, s2, cap=atom_cap)
    t1, t2 = tt.table(s1), tt.table(s2)
    if t1 & t2:
        return None
    clashing = tuple(sorted(atom_ids(r1.effect) & atom_ids(r2.effect)))
    return Contradiction(tt.first(t1), clashing)


def requires(r1: CausalRelation, r2: CausalRelation) -> str | None:
    """Atom through which ``r2`` requires ``r1``: an effect of ``r1`` used as
    a cause of ``r2``, in either polarity."""
    shared = atom_ids(r1.effect) & atom_ids(r2.cause)
    return min(shared) if shared else None


def is_redundant(r1: CausalRelation, r2: CausalRelation, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    s1, s2 = relation_semantics(r1), relation_semantics(r2)
    tt = _universe(s1, s2, cap=atom_cap)
    return tt.table(s1) == tt.table(s2)


def effect_signature(r: CausalRelation) -> frozenset[tuple[str, bool]]:
    return frozenset(effect_literals(r.effect))


def refines(r1: CausalRelation, r2: CausalRelation, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    """``r1`` refines ``r2``: same effect, and ``r2``'s cause strictly implies ``r1``'s."""
    tt = _universe(r1.cause, r2.cause, r1.effect, r2.effect, cap=atom_cap)
    if effect_signature(r1) != effect_signature(r2):
        return False
    c1, c2 = tt.table(r1.cause), tt.table(r2.cause)
    forward = c2 & ~c1 & tt.mask == 0
    backward = c1 & ~c2 & tt.mask == 0
    return forward and not backward


def merge_same_effect(
    relations: Sequence[CausalRelation], relation_id: str | None = None
) -> CausalRelation:
    """Join same-effect equivalences into one: ``c1 ∨ c2 ∨ … ⟺ e``."""
    if not relations:
        raise ValueError("nothing to merge")
    first = relations[0]
    signature = effect_signature(first)
    for r in relations:
        if r.kind is not RelationKind.EQUIVALENCE:
            raise EffectMismatch(f"relation {r.id} is not an equivalence")
        if effect_signature(r) != signature:
            raise EffectMismatch(f"relation {r.id} has a different effect than {first.id}")
    if len(relations) == 1:
        return first
    return CausalRelation(
        relation_id or "+".join(r.id for r in relations),
        disjoin(r.cause for r in relations),
        first.effect,
        RelationKind.EQUIVALENCE,
    )


def merge_by_effect(relations: Sequence[CausalRelation]) -> list[CausalRelation]:
    """Merge every group of equivalences sharing an effect, keeping first-seen order."""
    groups: dict[Any, list[CausalRelation]] = {}
    passthrough: list[tuple[int, CausalRelation]] = []
    order: dict[Any, int] = {}
    for i, r in enumerate(relations):
        if r.kind is not RelationKind.EQUIVALENCE:
            passthrough.append((i, r))
            continue
        key = effect_signature(r)
        order.setdefault(key, i)
        groups.setdefault(key, []).append(r)
    merged = [(order[k], merge_same_effect(g)) for k, g in groups.items()]
    return [r for _, r in sorted(merged + passthrough, key=lambda pair: pair[0])]


class DependencyKind(str, Enum):
    CONTRADICTORY = "contradictory"
    REFINES = "refines"
    REDUNDANT = "redundant"
    REQUIRES = "requires"


@dataclass(frozen=True)
class DependencyFinding:
    """``left <kind> right``, e.g. ``left requires right``."""

    kind: DependencyKind
    left: str
    right: str
    witness: dict[str, bool] | str | None = None

    def __post_init__(self):
        if self.left == self.right:
            raise ValueError("a finding needs two distinct relations")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "left": self.left, "right": self.right, "witness": self.witness}


@dataclass(frozen=True)
class UnevaluatedPair:
    left: str
    right: str
    reason: str


def scan_dependencies(
    relations: Sequence[CausalRelation], atom_cap: int = DEFAULT_ATOM_CAP
) -> tuple[list[DependencyFinding], list[UnevaluatedPair]]:
    """All pairwise findings, plus the pairs too large to decide by truth table."""
    ids = [r.id for r in relations]
    if len(set(ids)) != len(ids):
        raise ValueError("relation ids must be unique")
    findings: list[DependencyFinding] = []
    skipped: list[UnevaluatedPair] = []
    for a, b in itertools.combinations(sorted(relations, key=lambda r: r.id), 2):
        for left, right in ((a, b), (b, a)):
            via = requires(right, left)
            if via is not None:
                findings.append(DependencyFinding(DependencyKind.REQUIRES, left.id, right.id, via))
        try:
            contradiction = is_contradictory(a, b, atom_cap)
            if contradiction is not None:
                findings.append(
                    DependencyFinding(DependencyKind.CONTRADICTORY, a.id, b.id, contradiction.witness)
                )
            if is_redundant(a, b, atom_cap):
                findings.append(DependencyFinding(DependencyKind.REDUNDANT, a.id, b.id))
                continue
            for left, right in ((a, b), (b, a)):
                if refines(left, right, atom_cap):
                    findings.append(DependencyFinding(DependencyKind.REFINES, left.id, right.id))
        except AtomLimitExceeded as exc:
            skipped.append(UnevaluatedPair(a.id, b.id, str(exc)))
    findings.sort(key=lambda f: (f.kind.value, f.left, f.right))
    return findings, skipped


def find_dependencies(
    relations: Sequence[CausalRelation], atom_cap: int = DEFAULT_ATOM_CAP
) -> list[DependencyFinding]:
    return scan_dependencies(relations, atom_cap)[0]
