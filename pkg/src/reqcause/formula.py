"""Boolean formulas over textual atoms, and the causal relations built from them.

Formulas are immutable binary trees::

    Literal(Atom) | And(left, right) | Or(left, right) | Not(child)

An :class:`Atom` carries its own polarity, so ``does not charge a fee`` is a
single negative literal rather than ``Not(Literal(...))``. ``Not`` nodes appear
when formulas are combined (implication semantics, negated causes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import TYPE_CHECKING, Any, Iterable, Iterator, Union

from .errors import InvalidRelation

if TYPE_CHECKING:
    from .corpus import SentenceRecord


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class RelationKind(str, Enum):
    IMPLICATION = "implication"
    EQUIVALENCE = "equivalence"


@dataclass(frozen=True)
class Atom:
    id: str
    surface: str
    polarity: Polarity = Polarity.POSITIVE
    # character offsets into the source sentence; bookkeeping only
    span: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.id:
            raise ValueError("atom id must be non-empty")

    @property
    def positive(self) -> bool:
        return self.polarity is Polarity.POSITIVE


@dataclass(frozen=True)
class Literal:
    atom: Atom


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not:
    child: Formula

    def __post_init__(self):
        if isinstance(self.child, Not):
            raise ValueError("Not directly above Not; use negate()")


Formula = Union[Literal, And, Or, Not]


def lit(atom_id: str, positive: bool = True, surface: str | None = None) -> Literal:
    """Shorthand literal constructor, mostly for tests and notebooks."""
    polarity = Polarity.POSITIVE if positive else Polarity.NEGATIVE
    return Literal(Atom(atom_id, surface if surface is not None else atom_id, polarity))


def negate(f: Formula) -> Formula:
    return f.child if isinstance(f, Not) else Not(f)


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-associated conjunction: ``And(And(a, b), c)``."""
    return reduce(And, formulas)


def disjoin(formulas: Iterable[Formula]) -> Formula:
    return reduce(Or, formulas)


def iter_literals(f: Formula) -> Iterator[Literal]:
    if isinstance(f, Literal):
        yield f
    elif isinstance(f, Not):
        yield from iter_literals(f.child)
    else:
        yield from iter_literals(f.left)
        yield from iter_literals(f.right)


def atom_ids(f: Formula) -> set[str]:
    return {node.atom.id for node in iter_literals(f)}


def contains_or(f: Formula) -> bool:
    if isinstance(f, Or):
        return True
    if isinstance(f, Literal):
        return False
    if isinstance(f, Not):
        return contains_or(f.child)
    return contains_or(f.left) or contains_or(f.right)


def effect_literals(f: Formula) -> list[tuple[str, bool]]:
    """Flatten a literal conjunction into ``(atom_id, required_value)`` pairs.

    ``Not`` over a literal flips its polarity. Disjunctions, and negations of
    anything but a literal, are rejected.
    """
    if isinstance(f, Literal):
        return [(f.atom.id, f.atom.positive)]
    if isinstance(f, Not) and isinstance(f.child, Literal):
        return [(f.child.atom.id, not f.child.atom.positive)]
    if isinstance(f, And):
        return effect_literals(f.left) + effect_literals(f.right)
    raise InvalidRelation("effect must be a conjunction of literals")


def render(f: Formula) -> str:
    """Human-readable infix form using atom ids, e.g. ``(a ∧ ¬b) ∨ c``."""
    if isinstance(f, Literal):
        return f.atom.id if f.atom.positive else f"¬{f.atom.id}"
    if isinstance(f, Not):
        inner = render(f.child)
        return f"¬{inner}" if isinstance(f.child, Literal) else f"¬({inner})"
    op = " ∧ " if isinstance(f, And) else " ∨ "
    parts = []
    for side in (f.left, f.right):
        text = render(side)
        if isinstance(side, (And, Or)) and type(side) is not type(f):
            text = f"({text})"
        parts.append(text)
    return op.join(parts)


@dataclass(frozen=True)
class CausalRelation:
    id: str
    cause: Formula
    effect: Formula
    kind: RelationKind = RelationKind.EQUIVALENCE
    source: SentenceRecord | None = field(default=None, compare=False)

    def __post_init__(self):
        shared = atom_ids(self.cause) & atom_ids(self.effect)
        if shared:
            raise InvalidRelation(f"cause and effect share atoms: {sorted(shared)}")
        if contains_or(self.effect):
            raise InvalidRelation("effect side may not contain disjunctions")

    @property
    def cause_atoms(self) -> list[str]:
        return sorted(atom_ids(self.cause))

    @property
    def effect_atoms(self) -> list[str]:
        return sorted(atom_ids(self.effect))

    def __str__(self) -> str:
        arrow = " ⟺ " if self.kind is RelationKind.EQUIVALENCE else " ⟹ "
        return render(self.cause) + arrow + render(self.effect)


# JSON encoding. Tags follow the external relation format: lit|and|or|not.


def formula_to_dict(f: Formula) -> dict[str, Any]:
    if isinstance(f, Literal):
        out: dict[str, Any] = {
            "tag": "lit",
            "id": f.atom.id,
            "surface": f.atom.surface,
            "polarity": f.atom.polarity.value,
        }
        if f.atom.span is not None:
            out["span"] = list(f.atom.span)
        return out
    if isinstance(f, Not):
        return {"tag": "not", "child": formula_to_dict(f.child)}
    tag = "and" if isinstance(f, And) else "or"
    return {"tag": tag, "left": formula_to_dict(f.left), "right": formula_to_dict(f.right)}


def formula_from_dict(data: dict[str, Any]) -> Formula:
    tag = data.get("tag")
    if tag == "lit":
        span = data.get("span")
        atom = Atom(
            id=data["id"],
            surface=data.get("surface", data["id"]),
            polarity=Polarity(data.get("polarity", "positive")),
            span=tuple(span) if span is not None else None,
        )
        return Literal(atom)
    if tag == "not":
        return negate(formula_from_dict(data["child"]))
    if tag in ("and", "or"):
        node = And if tag == "and" else Or
        return node(formula_from_dict(data["left"]), formula_from_dict(data["right"]))
    raise ValueError(f"unknown formula tag {tag!r}")


def relation_to_dict(r: CausalRelation) -> dict[str, Any]:
    return {
        "id": r.id,
        "kind": r.kind.value,
        "cause": formula_to_dict(r.cause),
        "effect": formula_to_dict(r.effect),
        "source": r.source.to_dict() if r.source is not None else None,
    }


def relation_from_dict(data: dict[str, Any]) -> CausalRelation:
    from .corpus import SentenceRecord

    source = data.get("source")
    return CausalRelation(
        id=str(data["id"]),
        cause=formula_from_dict(data["cause"]),
        effect=formula_from_dict(data["effect"]),
        kind=RelationKind(data.get("kind", "equivalence")),
        source=SentenceRecord.from_dict(source) if source else None,
    )
