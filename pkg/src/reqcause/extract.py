"""Rule-based extraction of complete causal relations from single sentences.

Supported shapes (cue phrases come from the lexicon)::

    If/When/In case <cause>, [then] <effect>
    Because/Since <cause>, <effect>
    <effect> if/when/because <cause>

Cause clauses keep their full Boolean structure: ``and``/``or`` split the
clause into literals (``and`` binds tighter, both left-associative), and each
literal keeps the whole phrase rather than a single head word. The effect side
is a conjunction of literals.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Sequence

from .corpus import SentenceRecord, normalize_line
from .cues import DEFAULT_LEXICON, CueEntry, PositionClass, detect_cues
from .errors import EmptyClause, InvalidRelation, MalformedClause
from .formula import (
    And,
    Atom,
    CausalRelation,
    Formula,
    Literal,
    Not,
    Or,
    Polarity,
    RelationKind,
    conjoin,
    disjoin,
)

ARTICLES = frozenset({"the", "a", "an"})
# single-token negators
_NEGATORS = frozenset({"not", "no", "never"})
# contracted or fused negations, rewritten to the positive form
_FUSED_NEGATIONS = {
    "cannot": "can",
    "can't": "can",
    "won't": "will",
    "shan't": "shall",
    "mustn't": "must",
    "shouldn't": "should",
    "wouldn't": "would",
    "couldn't": "could",
    "isn't": "is",
    "aren't": "are",
    "wasn't": "was",
    "weren't": "were",
    "doesn't": "",
    "don't": "",
    "didn't": "",
}
# do-support auxiliaries vanish together with the negator
_DO_SUPPORT = frozenset({"does", "do", "did"})

_EDGE_PUNCT = ".,;:!?\"'()[]"


def _tokens(text: str) -> list[str]:
    out = []
    for raw in text.lower().split():
        token = raw.strip(_EDGE_PUNCT)
        if token:
            out.append(token)
    return out


def canonicalize_atom(surface: str, span: tuple[int, int] | None = None) -> Atom:
    """Canonical identity for a cause or effect phrase.

    Lowercases, drops articles (unless one stands alone as a name, as in
    ``A is true``), and removes negation markers while counting
    them: an odd count makes the atom negative. ``does not``/``do not`` lose
    the auxiliary too; modal negations keep the modal (``shall not`` becomes
    ``shall``) so that both forms of a requirement share one atom.
    """
    tokens = _tokens(surface)
    kept: list[str] = []
    negations = 0
    for i, token in enumerate(tokens):
        if token in _NEGATORS:
            negations += 1
            if kept and kept[-1] in _DO_SUPPORT:
                kept.pop()
            continue
        if token in _FUSED_NEGATIONS:
            negations += 1
            if _FUSED_NEGATIONS[token]:
                kept.append(_FUSED_NEGATIONS[token])
            continue
        # an article directly before a verb is a name ("A is true")
        if token in ARTICLES and i + 1 < len(tokens) and tokens[i + 1] not in _AUXILIARIES:
            continue
        kept.append(token)
    atom_id = " ".join(kept) or " ".join(tokens) or surface.strip().lower()
    polarity = Polarity.NEGATIVE if negations % 2 else Polarity.POSITIVE
    return Atom(atom_id, surface.strip(), polarity, span)


# connective splitting

_AUXILIARIES = frozenset(
    """is are was were be been being am has have had does do did shall should
    must will would can could may might cannot""".split()
)
_NON_VERB_PRECEDERS = ARTICLES | frozenset(
    """this that these those all some any each every no its their his her our
    your my valid invalid new old other several many few more most""".split()
)
_NON_VERB_S = ("ss", "us", "is", "'s")
_WORD = re.compile(r"\S+")
_CONNECTIVES = frozenset({"and", "or"})
_LEADING_FILLERS = frozenset({"either", "both", "then"})


def _has_verb(words: Sequence[str]) -> bool:
    """Crude finite-verb detector over lowercased, punctuation-stripped words."""
    for i, word in enumerate(words):
        if word in _AUXILIARIES:
            return True
        prev = words[i - 1] if i else ""
        if prev in _NON_VERB_PRECEDERS or prev.isdigit():
            continue
        if len(word) > 3 and word.isalpha():
            if word.endswith("s") and not word.endswith(_NON_VERB_S):
                return True
            if word.endswith("ed"):
                return True
    return False


@dataclass
class _Segment:
    start: int
    end: int
    words: list[str]


def _split_segments(text: str, base: int, connectives: frozenset[str]):
    """Cut ``text`` at connective words into (segments, connectives-between)."""
    segments: list[_Segment] = []
    joins: list[str] = []
    start = None
    words: list[str] = []
    end = 0
    for m in _WORD.finditer(text):
        token = m.group().lower().strip(_EDGE_PUNCT)
        if token in connectives:
            if start is None:
                raise EmptyClause(f"clause {text!r} is empty around a connective")
            segments.append(_Segment(start, end, words))
            joins.append(token)
            start, words = None, []
            continue
        if start is None:
            start = m.start()
        end = m.end()
        if token:
            words.append(token)
    if start is None:
        raise EmptyClause(f"clause {text!r} is empty around a connective")
    segments.append(_Segment(start, end, words))
    for seg in segments:
        seg.start += base
        seg.end += base
    return segments, joins


def _literal(sentence: str, start: int, end: int) -> Literal:
    raw = sentence[start:end]
    # trim fillers and punctuation from the edges, tracking offsets
    while True:
        stripped = raw.lstrip(" " + _EDGE_PUNCT)
        start += len(raw) - len(stripped)
        raw = stripped
        first = raw.split(" ", 1)[0].lower()
        if first in _LEADING_FILLERS and " " in raw:
            cut = len(first) + 1
            raw, start = raw[cut:], start + cut
            continue
        break
    stripped = raw.rstrip(" " + _EDGE_PUNCT)
    end = start + len(stripped)
    raw = stripped
    if not raw:
        raise EmptyClause("literal reduces to nothing")
    return Literal(canonicalize_atom(raw, (start, end)))


def _group(sentence: str, text: str, base: int, connectives: frozenset[str]) -> Formula:
    segments, joins = _split_segments(text, base, connectives)
    # merge split points that would cut a noun phrase out of its clause
    units: list[tuple[int, int, list[str]]] = []
    ops: list[str] = []
    cur = segments[0]
    cur_start, cur_end, cur_words = cur.start, cur.end, list(cur.words)
    for join, seg in zip(joins, segments[1:]):
        if _has_verb(cur_words) and not _has_verb(seg.words):
            cur_end = seg.end
            cur_words += [join] + seg.words
            continue
        units.append((cur_start, cur_end, cur_words))
        ops.append(join)
        cur_start, cur_end, cur_words = seg.start, seg.end, list(seg.words)
    units.append((cur_start, cur_end, cur_words))

    literals = [_literal(sentence, s, e) for s, e, _ in units]
    disjuncts: list[list[Formula]] = [[literals[0]]]
    for op, lit_ in zip(ops, literals[1:]):
        if op == "or":
            disjuncts.append([lit_])
        else:
            disjuncts[-1].append(lit_)
    return disjoin(conjoin(group) for group in disjuncts)


def parse_condition_side(text: str, *, sentence: str | None = None, offset: int = 0) -> Formula:
    """Parse a cause clause into a binary formula.

    ``sentence``/``offset`` let atom spans index into the enclosing sentence;
    by default spans index into ``text`` itself.
    """
    if not text or not text.strip():
        raise EmptyClause("empty clause")
    if sentence is None:
        sentence, offset = text, 0
    return _group(sentence, text, offset, _CONNECTIVES)


def parse_effect_side(text: str, *, sentence: str | None = None, offset: int = 0) -> Formula:
    """Parse an effect clause into a conjunction of literals.

    Only ``and`` splits an effect; an ``or`` stays inside its literal.
    """
    if not text or not text.strip():
        raise EmptyClause("empty clause")
    if sentence is None:
        sentence, offset = text, 0
    return _group(sentence, text, offset, frozenset({"and"}))


_THEN = re.compile(r",?\s+then\s+", re.IGNORECASE)
_TRAILING = " .!?;:"


def _clause_bounds(sentence: str, start: int, end: int) -> tuple[int, int]:
    while start < end and sentence[start] in " ,":
        start += 1
    while end > start and sentence[end - 1] in _TRAILING + ",":
        end -= 1
    return start, end


def _split_initial(sentence: str, cue_end: int) -> tuple[tuple[int, int], tuple[int, int]]:
    rest = sentence[cue_end:]
    then = _THEN.search(rest)
    comma = rest.find(",")
    if then and (comma < 0 or then.start() <= comma):
        cut_start, cut_end = then.start(), then.end()
    elif comma >= 0:
        cut_start, cut_end = comma, comma + 1
        then_after = re.match(r"\s*then\s+", rest[cut_end:], re.IGNORECASE)
        if then_after:
            cut_end += then_after.end()
    else:
        raise MalformedClause(f"no boundary between cause and effect in {sentence!r}")
    cause = _clause_bounds(sentence, cue_end, cue_end + cut_start)
    effect = _clause_bounds(sentence, cue_end + cut_end, len(sentence))
    return cause, effect


def _default_id(text: str) -> str:
    return "r-" + hashlib.sha1(text.encode("utf-8")).hexdigest()[:10]


def record_relation_id(record: SentenceRecord, k: int = 0) -> str:
    return f"{record.doc_id}:{record.paragraph_index}:{record.sentence_index}:{k}"


def extract_relations(
    sentence: str | SentenceRecord,
    lexicon: Sequence[CueEntry] = DEFAULT_LEXICON,
    *,
    relation_id: str | None = None,
) -> list[CausalRelation]:
    """Extract the causal relation marked by the first applicable cue.

    Returns ``[]`` for sentences without an applicable cue. Raises
    :class:`MalformedClause` when a cue is present but the sentence cannot be
    cut into a cause and an effect.
    """
    if isinstance(sentence, SentenceRecord):
        record = sentence
    else:
        text = normalize_line(sentence)
        if not text:
            return []
        record = SentenceRecord("", 0, 0, text)
    text = record.text
    if relation_id is None:
        relation_id = record_relation_id(record) if record.doc_id else _default_id(text)

    for match in detect_cues(text, lexicon):
        if not text[: match.start].strip(" \"'("):
            cause_span, effect_span = _split_initial(text, match.end)
        elif match.cue.position_class is PositionClass.ANY:
            effect_span = _clause_bounds(text, 0, match.start)
            cause_span = _clause_bounds(text, match.end, len(text))
        else:
            continue
        if cause_span[0] >= cause_span[1] or effect_span[0] >= effect_span[1]:
            raise MalformedClause(f"cue {match.cue.phrase!r} leaves an empty clause in {text!r}")
        try:
            cause = parse_condition_side(
                text[cause_span[0] : cause_span[1]], sentence=text, offset=cause_span[0]
            )
            effect = parse_effect_side(
                text[effect_span[0] : effect_span[1]], sentence=text, offset=effect_span[0]
            )
            relation = CausalRelation(
                relation_id, cause, effect, RelationKind.EQUIVALENCE, source=record
            )
        except (EmptyClause, InvalidRelation) as exc:
            raise MalformedClause(str(exc)) from exc
        return [relation]
    return []


def relation_to_tree(relation: CausalRelation):
    """Annotation tree for an extracted relation: S over a c flag and a CR node."""
    from .annotation import AnnotationTree, Label

    if relation.source is None:
        raise ValueError("relation has no source sentence")
    sentence = relation.source.text
    used: list[tuple[int, int]] = []

    def locate(atom: Atom) -> tuple[int, int]:
        if atom.span is not None and sentence[atom.span[0] : atom.span[1]] == atom.surface:
            return atom.span
        pos = 0
        while True:
            idx = sentence.find(atom.surface, pos)
            if idx < 0:
                raise ValueError(f"atom surface {atom.surface!r} not found in source")
            span = (idx, idx + len(atom.surface))
            if not any(s < span[1] and span[0] < e for s, e in used):
                return span
            pos = idx + 1

    def build(f: Formula, leaf: Label) -> AnnotationTree:
        if isinstance(f, Literal):
            span = locate(f.atom)
            used.append(span)
            return AnnotationTree(leaf, span, (), sentence[span[0] : span[1]])
        if isinstance(f, Not):
            raise ValueError("negated sub-formulas have no annotation form")
        label = Label.CON if isinstance(f, And) else Label.DIS
        left, right = build(f.left, leaf), build(f.right, leaf)
        children = tuple(sorted((left, right), key=lambda t: t.span))
        return AnnotationTree(label, (children[0].span[0], children[1].span[1]), children)

    sides = sorted((build(relation.cause, Label.C), build(relation.effect, Label.E)), key=lambda t: t.span)
    cr = AnnotationTree(Label.CR, (sides[0].span[0], sides[1].span[1]), tuple(sides))
    flag = AnnotationTree(Label.c, (0, 0))
    return AnnotationTree(Label.S, (0, len(sentence)), (flag, cr))
