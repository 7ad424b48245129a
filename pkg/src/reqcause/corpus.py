"""Turn raw text lines of a requirements document into clean sentence records.

Pipeline, applied in this order:

1. ``normalize_line``     trim and collapse whitespace
2. ``filter_line``        drop figure/table captions, page furniture, short
                          fragments and table-of-contents leaders
3. ``strip_enumeration``  remove a leading list marker
4. ``build_paragraphs``   join consecutive lines; blank lines separate
5. ``split_sentences``    split at terminators, then rejoin e.g./i.e. splits
6. ``strip_note_prefix``  drop a leading "Note" unless "Note that"

Text extraction from PDF happens upstream; a :class:`RawDocument` is simply
an id plus its lines.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence


@dataclass(frozen=True)
class RawDocument:
    id: str
    lines: tuple[str, ...]

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        object.__setattr__(self, "lines", tuple(self.lines))

    @classmethod
    def from_text(cls, doc_id: str, text: str) -> RawDocument:
        return cls(doc_id, tuple(text.splitlines()))

    @classmethod
    def from_path(cls, path: str | Path) -> RawDocument:
        path = Path(path)
        return cls.from_text(path.stem, path.read_text(encoding="utf-8"))


class CausalLabel(str, Enum):
    CAUSAL = "causal"
    NON_CAUSAL = "non_causal"


@dataclass(frozen=True)
class SentenceRecord:
    doc_id: str
    paragraph_index: int
    sentence_index: int
    text: str
    causal_label: CausalLabel | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("sentence text must be non-empty")
        if self.text != self.text.strip() or "  " in self.text:
            raise ValueError(f"sentence text is not normalized: {self.text!r}")
        if self.paragraph_index < 0 or self.sentence_index < 0:
            raise ValueError("indices must be non-negative")

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "paragraph_index": self.paragraph_index,
            "sentence_index": self.sentence_index,
            "text": self.text,
            "causal_label": self.causal_label.value if self.causal_label else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SentenceRecord:
        label = data.get("causal_label")
        return cls(
            doc_id=str(data["doc_id"]),
            paragraph_index=int(data["paragraph_index"]),
            sentence_index=int(data["sentence_index"]),
            text=data["text"],
            causal_label=CausalLabel(label) if label else None,
        )


class FilterReason(str, Enum):
    FIGURE_TABLE = "figure_table"
    PAGE_OR_CHAPTER = "page_or_chapter"
    TOO_SHORT = "too_short"
    DOT_LEADER = "dot_leader"
    KEPT = "kept"


@dataclass(frozen=True)
class FilterVerdict:
    keep: bool
    reason: FilterReason

    def __post_init__(self):
        if self.keep != (self.reason is FilterReason.KEPT):
            raise ValueError("reason must be 'kept' exactly when keep is true")


KEPT = FilterVerdict(True, FilterReason.KEPT)

MIN_LINE_LENGTH = 50
SHORT_LINE_TERMINATORS = frozenset(":?!")

_WHITESPACE = re.compile(r"\s+")
_FIGURE_TABLE = re.compile(r"^(?:Figure|Table)\b")
DEFAULT_PAGE_PATTERN = re.compile(
    r"^(?:Chapter\b|\d+$|Page\s+\d+(?:\s+of\s+\d+)?$|\d+\s+of\s+\d+$)",
    re.IGNORECASE,
)
_DOT_LEADER = re.compile(r"\.{4,}")

_ROMAN = r"(?=[ivxlcdm]+\b)m{0,3}(?:cm|cd|d?c{0,3})(?:xc|xl|l?x{0,3})(?:ix|iv|v?i{0,3})"
_ENUM_TOKEN = rf"(?:[a-z]|\d+(?:\.\d+)*|{_ROMAN})"
_ENUMERATOR = re.compile(
    rf"^(?:\({_ENUM_TOKEN}\)|{_ENUM_TOKEN}[.)]|[•‣▪●◦■□○·*–—-])\s+(?=\S)",
    re.IGNORECASE,
)

_TERMINATOR = re.compile(r"[.?!](?=\s+[A-Z0-9])")
# abbreviations that end in "." without ending the sentence; e.g./i.e. are
# deliberately absent, they are repaired by rejoin_abbreviation_splits
_GUARDED_ABBREVIATIONS = frozenset(
    {"etc.", "fig.", "no.", "vs.", "cf.", "approx.", "resp.", "mr.", "mrs.", "dr.", "sec."}
)
_REJOIN_SUFFIXES = ("e.g.", "i.e.")
_NOTE_PREFIX = re.compile(r"^note\b\s*[:\-–]?\s*", re.IGNORECASE)


def normalize_line(line: str) -> str:
    return _WHITESPACE.sub(" ", line).strip()


def filter_line(
    line: str,
    *,
    lenient_short: bool = False,
    page_pattern: re.Pattern[str] = DEFAULT_PAGE_PATTERN,
) -> FilterVerdict:
    """Decide whether a normalized, non-empty line carries content.

    The length rule fires for any line under 50 characters that does not end
    in ":", "?" or "!" (``lenient_short`` also accepts "."). When several
    rules fire, the content rules (caption, page marker, dot leader) name the
    reason ahead of the generic length rule.
    """
    if _FIGURE_TABLE.match(line):
        return FilterVerdict(False, FilterReason.FIGURE_TABLE)
    if page_pattern.match(line):
        return FilterVerdict(False, FilterReason.PAGE_OR_CHAPTER)
    if _DOT_LEADER.search(line):
        return FilterVerdict(False, FilterReason.DOT_LEADER)
    terminators = SHORT_LINE_TERMINATORS | {"."} if lenient_short else SHORT_LINE_TERMINATORS
    if len(line) < MIN_LINE_LENGTH and line[-1:] not in terminators:
        return FilterVerdict(False, FilterReason.TOO_SHORT)
    return KEPT


def strip_enumeration(line: str) -> str:
    return _ENUMERATOR.sub("", line, count=1)


def build_paragraphs(lines: Iterable[str]) -> list[str]:
    paragraphs: list[str] = []
    current: list[str] = []
    for line in lines:
        if line:
            current.append(line)
        elif current:
            paragraphs.append(" ".join(current))
            current = []
    if current:
        paragraphs.append(" ".join(current))
    return paragraphs


def _ends_with_guarded_abbreviation(fragment: str) -> bool:
    last = fragment.rsplit(" ", 1)[-1].lower()
    if last in _GUARDED_ABBREVIATIONS:
        return True
    # initials such as "J." in "J. Smith"
    return len(last) == 2 and last[0].isalpha() and fragment.rsplit(" ", 1)[-1][0].isupper()


def split_raw(paragraph: str) -> list[str]:
    """Split at ".", "?" or "!" followed by whitespace and an uppercase letter
    or digit, except after a guarded abbreviation."""
    sentences: list[str] = []
    start = 0
    for match in _TERMINATOR.finditer(paragraph):
        end = match.end()
        fragment = paragraph[start:end].strip()
        if match.group() == "." and _ends_with_guarded_abbreviation(fragment):
            continue
        sentences.append(fragment)
        start = end
    tail = paragraph[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def rejoin_abbreviation_splits(sentences: Sequence[str]) -> list[str]:
    merged: list[str] = []
    for sentence in sentences:
        if merged and merged[-1].lower().endswith(_REJOIN_SUFFIXES):
            merged[-1] = f"{merged[-1]} {sentence}"
        else:
            merged.append(sentence)
    return merged


def split_sentences(paragraph: str) -> list[str]:
    return rejoin_abbreviation_splits(split_raw(paragraph))


def strip_note_prefix(sentence: str) -> str:
    match = _NOTE_PREFIX.match(sentence)
    if not match:
        return sentence
    rest = sentence[match.end():]
    if re.match(r"that\b", rest, re.IGNORECASE):
        return sentence
    return normalize_line(rest)


def clean_lines(
    lines: Iterable[str],
    *,
    lenient_short: bool = False,
    page_pattern: re.Pattern[str] = DEFAULT_PAGE_PATTERN,
) -> list[str]:
    """Normalize, filter and de-enumerate lines.

    Blank lines are kept as paragraph delimiters. Filtered lines vanish
    without leaving a delimiter, so a sentence interrupted by a page number
    is rejoined.
    """
    out: list[str] = []
    for raw in lines:
        line = normalize_line(raw)
        if not line:
            out.append("")
            continue
        if filter_line(line, lenient_short=lenient_short, page_pattern=page_pattern).keep:
            out.append(strip_enumeration(line))
    return out


def preprocess_document(
    doc: RawDocument,
    *,
    lenient_short: bool = False,
    page_pattern: re.Pattern[str] = DEFAULT_PAGE_PATTERN,
) -> list[SentenceRecord]:
    lines = clean_lines(doc.lines, lenient_short=lenient_short, page_pattern=page_pattern)
    records: list[SentenceRecord] = []
    paragraph_index = 0
    for paragraph in build_paragraphs(lines):
        texts = [strip_note_prefix(s) for s in split_sentences(paragraph)]
        texts = [t for t in texts if t]
        if not texts:
            continue
        for sentence_index, text in enumerate(texts):
            records.append(SentenceRecord(doc.id, paragraph_index, sentence_index, text))
        paragraph_index += 1
    return records


def serialize_records(records: Iterable[SentenceRecord]) -> str:
    """JSON-lines text, one record per line, LF endings."""
    return "".join(json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in records)


def read_records(path: str | Path) -> list[SentenceRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(SentenceRecord.from_dict(json.loads(line)))
    return records


def records_to_lines(records: Sequence[SentenceRecord]) -> list[str]:
    """Re-serialize records as raw lines: one paragraph per line, blank lines
    between paragraphs."""
    lines: list[str] = []
    for i, record in enumerate(records):
        if i and record.paragraph_index != records[i - 1].paragraph_index:
            lines.append("")
        if lines and lines[-1] and record.sentence_index:
            lines[-1] = f"{lines[-1]} {record.text}"
        else:
            lines.append(record.text)
    return lines
