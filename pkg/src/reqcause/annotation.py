"""Bracketed causal annotations, agreement statistics and extraction scoring.

An annotation is a labeled binary tree written as nested brackets::

    [S [c] [CR [C the system detects an error] [E an error message shall be shown]]]

Labels:

==== ============================================================
S    sentence root
c/nc sentence-level flag: causal / non-causal
CR   causal relation
C, E cause segment, effect segment
CON  conjunction of its two children
DIS  disjunction of its two children
V    variable (entity) part of a C or E segment
CD   condition part of a C or E segment
P    non-causal filler
==== ============================================================

Leaf text may contain ``\\[``, ``\\]`` and ``\\\\`` escapes. Spans are
character offsets into the sentence; when no sentence is supplied the parser
uses the leaf texts joined by single spaces.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .corpus import SentenceRecord
from .errors import (
    AnnotationError,
    DegenerateAgreement,
    InvalidRatings,
    MisalignedInputs,
    MissingCause,
    MissingEffect,
    NonBinaryNode,
    OverlappingSpans,
    UnbalancedBrackets,
    UnknownLabel,
)
from .extract import canonicalize_atom
from .formula import And, CausalRelation, Formula, Literal, Or, RelationKind


class Label(str, Enum):
    S = "S"
    CR = "CR"
    C = "C"
    E = "E"
    CON = "CON"
    DIS = "DIS"
    V = "V"
    CD = "CD"
    P = "P"
    c = "c"
    nc = "nc"

    def __str__(self) -> str:
        return self.value


_MAY_BE_UNARY = frozenset({Label.S, Label.c, Label.nc})


@dataclass(frozen=True)
class AnnotationTree:
    label: Label
    span: tuple[int, int]
    children: tuple[AnnotationTree, ...] = ()
    text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "label", Label(self.label))
        object.__setattr__(self, "children", tuple(self.children))
        start, end = self.span
        if not 0 <= start <= end:
            raise OverlappingSpans(f"invalid span {self.span} on {self.label}")
        if self.children:
            if self.text:
                raise AnnotationError(f"{self.label} node has both text and children")
            if len(self.children) > 2 or (len(self.children) == 1 and self.label not in _MAY_BE_UNARY):
                raise NonBinaryNode(f"{self.label} node has {len(self.children)} children")
            prev_end = start
            for child in self.children:
                if child.span[0] < prev_end or child.span[1] > end:
                    raise OverlappingSpans(f"child span {child.span} escapes or overlaps in {self.label}")
                prev_end = child.span[1]

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator[AnnotationTree]:
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self) -> Iterator[AnnotationTree]:
        return (node for node in self.walk() if node.is_leaf)

    def covered_text(self, sentence: str | None = None) -> str:
        if sentence is not None:
            return sentence[self.span[0] : self.span[1]]
        if self.is_leaf:
            return self.text
        return " ".join(t for t in (leaf.text for leaf in self.leaves()) if t)


# parsing


@dataclass
class _RawNode:
    label: Label
    offset: int
    children: list[_RawNode]
    text: str


class _Parser:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def node(self) -> _RawNode:
        opening = self.pos
        if self.pos >= len(self.src) or self.src[self.pos] != "[":
            raise UnbalancedBrackets("expected '['", self.pos)
        self.pos += 1
        start = self.pos
        while self.pos < len(self.src) and not self.src[self.pos].isspace() and self.src[self.pos] not in "[]":
            self.pos += 1
        name = self.src[start : self.pos]
        try:
            label = Label(name)
        except ValueError:
            raise UnknownLabel(f"unknown label {name!r}", start) from None
        self.skip_ws()
        children: list[_RawNode] = []
        text = ""
        if self.pos < len(self.src) and self.src[self.pos] == "[":
            while True:
                self.skip_ws()
                if self.pos >= len(self.src):
                    raise UnbalancedBrackets("unclosed '['", opening)
                ch = self.src[self.pos]
                if ch == "]":
                    break
                if ch != "[":
                    raise AnnotationError("text mixed with child segments", self.pos)
                children.append(self.node())
        else:
            text = self.text()
        if self.pos >= len(self.src):
            raise UnbalancedBrackets("unclosed '['", opening)
        self.pos += 1
        return _RawNode(label, opening, children, text)

    def text(self) -> str:
        out = []
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.src) and self.src[self.pos + 1] in "[]\\":
                out.append(self.src[self.pos + 1])
                self.pos += 2
                continue
            if ch == "]":
                break
            if ch == "[":
                raise AnnotationError("unescaped '[' inside segment text", self.pos)
            out.append(ch)
            self.pos += 1
        return "".join(out).rstrip()


def _collapse(node: _RawNode) -> _RawNode:
    node.children = [_collapse(c) for c in node.children]
    if len(node.children) == 1 and node.label not in _MAY_BE_UNARY:
        return node.children[0]
    if len(node.children) > 2:
        raise NonBinaryNode(f"{node.label} node has {len(node.children)} children", node.offset)
    return node


def _place(node: _RawNode, sentence: str, cursor: int, root: bool) -> tuple[AnnotationTree, int]:
    if not node.children:
        if not node.text:
            return AnnotationTree(node.label, (cursor, cursor)), cursor
        idx = sentence.find(node.text, cursor)
        if idx < 0:
            raise OverlappingSpans(f"segment {node.text!r} cannot be placed after offset {cursor}", node.offset)
        end = idx + len(node.text)
        return AnnotationTree(node.label, (idx, end), (), node.text), end
    children = []
    for child in node.children:
        tree, cursor = _place(child, sentence, cursor, False)
        children.append(tree)
    if root:
        span = (0, len(sentence))
    else:
        span = (children[0].span[0], children[-1].span[1])
    try:
        return AnnotationTree(node.label, span, tuple(children)), cursor
    except AnnotationError as exc:
        raise type(exc)(str(exc), node.offset) from None


def parse_annotation(text: str, sentence: str | None = None) -> AnnotationTree:
    """Parse one bracket expression into a validated tree rooted at S.

    If ``sentence`` is given, leaf segments are located in it left to right
    and spans index into it.
    """
    parser = _Parser(text)
    parser.skip_ws()
    raw = parser.node()
    parser.skip_ws()
    if parser.pos != len(text):
        raise UnbalancedBrackets("unexpected text after the root segment", parser.pos)
    raw = _collapse(raw)
    if raw.label is not Label.S:
        raise AnnotationError(f"root label must be S, got {raw.label}", raw.offset)
    if sentence is None:
        sentence = " ".join(t for t in (n.text for n in _raw_leaves(raw)) if t)
    tree, _ = _place(raw, sentence, 0, True)
    return tree


def _raw_leaves(node: _RawNode) -> Iterator[_RawNode]:
    if not node.children:
        yield node
    for child in node.children:
        yield from _raw_leaves(child)


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("[", "\\[").replace("]", "\\]")


def serialize_annotation(tree: AnnotationTree) -> str:
    if tree.children:
        inner = " ".join(serialize_annotation(c) for c in tree.children)
        return f"[{tree.label} {inner}]"
    if tree.text:
        return f"[{tree.label} {_escape(tree.text)}]"
    return f"[{tree.label}]"


def read_annotations(path: str | Path, sentences: Sequence[str] | None = None) -> list[AnnotationTree]:
    """One bracket expression per line, optionally aligned to sentences by line."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if sentences is not None and len(sentences) != len(lines):
        raise MisalignedInputs(f"{len(lines)} annotations but {len(sentences)} sentences")
    trees = []
    for i, line in enumerate(lines):
        try:
            trees.append(parse_annotation(line, sentences[i] if sentences is not None else None))
        except AnnotationError as exc:
            raise type(exc)(f"line {i + 1}: {exc}") from None
    return trees


# gold trees to relations


def _side_label(node: AnnotationTree) -> Label | None:
    for n in node.walk():
        if n.label in (Label.C, Label.E):
            return n.label
    return None


def _side_formula(node: AnnotationTree, leaf: Label, sentence: str | None) -> Formula:
    if node.label is leaf:
        return Literal(canonicalize_atom(node.covered_text(sentence), node.span))
    if node.label in (Label.CON, Label.DIS) and len(node.children) == 2:
        left = _side_formula(node.children[0], leaf, sentence)
        right = _side_formula(node.children[1], leaf, sentence)
        if node.label is Label.DIS and leaf is Label.E:
            raise AnnotationError("effects may only be combined by CON")
        return And(left, right) if node.label is Label.CON else Or(left, right)
    raise AnnotationError(f"unexpected {node.label} node inside a {leaf} subtree")


def tree_to_relation(
    tree: AnnotationTree,
    *,
    relation_id: str = "r0",
    source: SentenceRecord | str | None = None,
) -> CausalRelation | None:
    """Assemble the gold relation of a tree; ``None`` for non-causal sentences.

    ``source`` is the sentence the spans index into. Without it, segment text
    comes from the leaves.
    """
    if any(child.label is Label.nc for child in tree.children):
        return None
    cr = next((n for n in tree.walk() if n.label is Label.CR), None)
    if cr is None:
        raise MissingCause("no CR segment in a causal sentence")
    record = SentenceRecord("", 0, 0, source) if isinstance(source, str) else source
    sentence = record.text if record is not None else None
    sides = {_side_label(child): child for child in cr.children}
    if Label.C not in sides:
        raise MissingCause("CR segment lacks a C descendant")
    if Label.E not in sides:
        raise MissingEffect("CR segment lacks an E descendant")
    cause = _side_formula(sides[Label.C], Label.C, sentence)
    effect = _side_formula(sides[Label.E], Label.E, sentence)
    return CausalRelation(relation_id, cause, effect, RelationKind.EQUIVALENCE, source=record)


# Fleiss kappa


@dataclass(frozen=True)
class RatingMatrix:
    counts: tuple[tuple[int, ...], ...]
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        counts = tuple(tuple(int(v) for v in row) for row in self.counts)
        object.__setattr__(self, "counts", counts)
        if not counts:
            raise InvalidRatings("rating matrix has no items")
        k = len(counts[0])
        if k < 2:
            raise InvalidRatings("at least two categories are required")
        if any(len(row) != k for row in counts):
            raise InvalidRatings("rows have differing category counts")
        if any(v < 0 for row in counts for v in row):
            raise InvalidRatings("counts must be non-negative")
        raters = {sum(row) for row in counts}
        if len(raters) != 1:
            raise InvalidRatings("every item needs the same number of ratings")
        if raters.pop() < 2:
            raise InvalidRatings("at least two raters are required")
        if not self.categories:
            object.__setattr__(self, "categories", tuple(str(j) for j in range(k)))
        elif len(self.categories) != k:
            raise InvalidRatings("category names do not match the matrix width")

    @property
    def items(self) -> int:
        return len(self.counts)

    @property
    def raters(self) -> int:
        return sum(self.counts[0])

    @property
    def k(self) -> int:
        return len(self.counts[0])

    @classmethod
    def from_labels(
        cls, rows: Sequence[Sequence[str]], categories: Sequence[str] | None = None
    ) -> RatingMatrix:
        """Build from one list of per-rater category names per item."""
        if categories is None:
            categories = sorted({label for row in rows for label in row})
        index = {c: j for j, c in enumerate(categories)}
        counts = []
        for i, row in enumerate(rows):
            tally = [0] * len(categories)
            for label in row:
                if label not in index:
                    raise InvalidRatings(f"item {i}: unknown category {label!r}")
                tally[index[label]] += 1
            counts.append(tally)
        return cls(tuple(map(tuple, counts)), tuple(categories))


def read_ratings_csv(path: str | Path, categories: Sequence[str] | None = None) -> RatingMatrix:
    """Header row of rater names, then one row per item with category names."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise InvalidRatings("ratings CSV needs a header row and at least one item")
    header, body = rows[0], rows[1:]
    for i, row in enumerate(body, 2):
        if len(row) != len(header) or not all(cell.strip() for cell in row):
            raise InvalidRatings(f"row {i}: expected {len(header)} non-empty ratings")
    return RatingMatrix.from_labels([[c.strip() for c in row] for row in body], categories)


@dataclass(frozen=True)
class KappaResult:
    kappa: float
    observed: float
    expected: float
    items: int
    raters: int
    categories: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_agreement": self.observed,
            "expected_agreement": self.expected,
            "items": self.items,
            "raters": self.raters,
            "categories": list(self.categories),
        }


def fleiss_agreement(m: RatingMatrix) -> KappaResult:
    n, N = m.raters, m.items
    per_item = [Fraction(sum(v * v for v in row) - n, n * (n - 1)) for row in m.counts]
    observed = sum(per_item, Fraction(0)) / N
    shares = [Fraction(sum(row[j] for row in m.counts), N * n) for j in range(m.k)]
    expected = sum((p * p for p in shares), Fraction(0))
    if expected == 1:
        raise DegenerateAgreement("all ratings fall into one category; kappa is undefined")
    kappa = (observed - expected) / (1 - expected)
    return KappaResult(float(kappa), float(observed), float(expected), N, n, m.categories)


def fleiss_kappa(m: RatingMatrix) -> float:
    """Fleiss' kappa, computed in exact rational arithmetic."""
    return fleiss_agreement(m).kappa


# extraction scoring


@dataclass(frozen=True)
class LabelScore:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float | None:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else None

    @property
    def recall(self) -> float | None:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else None

    @property
    def f1(self) -> float | None:
        p, r = self.precision, self.recall
        if p is None or r is None:
            return None
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def _segments(tree: AnnotationTree) -> Counter[tuple[Label, tuple[int, int]]]:
    return Counter((node.label, node.span) for node in tree.walk())


def evaluate_extraction(
    predicted: Sequence[AnnotationTree], gold: Sequence[AnnotationTree]
) -> dict[str, LabelScore]:
    """Exact (label, span) segment matching, per label plus ``"micro"``.

    Undefined ratios (no predictions, or no gold segments for a label) are
    ``None``.
    """
    if len(predicted) != len(gold):
        raise MisalignedInputs(f"{len(predicted)} predicted trees vs {len(gold)} gold trees")
    tp: Counter[str] = Counter()
    fp: Counter[str] = Counter()
    fn: Counter[str] = Counter()
    for p_tree, g_tree in zip(predicted, gold):
        p_segs = _segments(p_tree) if p_tree is not None else Counter()
        g_segs = _segments(g_tree)
        for (label, _), hits in (p_segs & g_segs).items():
            tp[label.value] += hits
        for (label, _), extra in (p_segs - g_segs).items():
            fp[label.value] += extra
        for (label, _), missed in (g_segs - p_segs).items():
            fn[label.value] += missed
    labels = sorted(set(tp) | set(fp) | set(fn))
    scores = {label: LabelScore(tp[label], fp[label], fn[label]) for label in labels}
    scores["micro"] = LabelScore(sum(tp.values()), sum(fp.values()), sum(fn.values()))
    return scores


def iter_flags(trees: Iterable[AnnotationTree]) -> Iterator[str | None]:
    """Sentence-level c/nc flag of each tree (``None`` if absent)."""
    for tree in trees:
        flag = next((c.label.value for c in tree.children if c.label in (Label.c, Label.nc)), None)
        yield flag
