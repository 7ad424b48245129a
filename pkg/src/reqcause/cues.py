"""Causal cue phrases: lexicon, detection, sentence pre-labels and corpus counts."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import SentenceRecord


class Ambiguity(str, Enum):
    AMBIGUOUS = "ambiguous"
    UNAMBIGUOUS = "unambiguous"


class PositionClass(str, Enum):
    ANY = "any"
    CLAUSE_INITIAL = "clause_initial"


class SentenceClass(str, Enum):
    MARKED_CAUSAL_CANDIDATE = "marked_causal_candidate"
    NO_MARKER = "no_marker"


@dataclass(frozen=True)
class CueEntry:
    phrase: str
    ambiguity: Ambiguity
    position_class: PositionClass = PositionClass.ANY

    def __post_init__(self):
        phrase = " ".join(self.phrase.lower().split())
        if not phrase:
            raise ValueError("cue phrase must be non-empty")
        object.__setattr__(self, "phrase", phrase)


@dataclass(frozen=True)
class CueMatch:
    cue: CueEntry
    char_span: tuple[int, int]
    markedness: str = "marked"

    @property
    def start(self) -> int:
        return self.char_span[0]

    @property
    def end(self) -> int:
        return self.char_span[1]


A, U = Ambiguity.AMBIGUOUS, Ambiguity.UNAMBIGUOUS

DEFAULT_LEXICON: tuple[CueEntry, ...] = (
    CueEntry("if", U),
    CueEntry("when", A),
    CueEntry("because", U),
    CueEntry("because of", U),
    CueEntry("since", A, PositionClass.CLAUSE_INITIAL),
    CueEntry("in case", U),
    CueEntry("due to", A),
    CueEntry("as soon as", A),
)


def validate_lexicon(lexicon: Sequence[CueEntry]) -> tuple[CueEntry, ...]:
    seen: set[str] = set()
    for entry in lexicon:
        if entry.phrase in seen:
            raise ValueError(f"duplicate cue phrase {entry.phrase!r}")
        seen.add(entry.phrase)
    return tuple(lexicon)


def parse_lexicon(text: str) -> tuple[CueEntry, ...]:
    """Parse ``phrase<TAB>ambiguous|unambiguous[<TAB>any|clause_initial]`` lines.

    Blank lines and ``#`` comments are skipped.
    """
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) not in (2, 3):
            raise ValueError(f"lexicon line {lineno}: expected 2 or 3 tab-separated fields")
        try:
            entry = CueEntry(
                parts[0],
                Ambiguity(parts[1].strip()),
                PositionClass(parts[2].strip()) if len(parts) == 3 else PositionClass.ANY,
            )
        except ValueError as exc:
            raise ValueError(f"lexicon line {lineno}: {exc}") from None
        entries.append(entry)
    return validate_lexicon(entries)


def load_lexicon(path: str | Path) -> tuple[CueEntry, ...]:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def format_lexicon(lexicon: Iterable[CueEntry]) -> str:
    return "".join(
        f"{e.phrase}\t{e.ambiguity.value}\t{e.position_class.value}\n" for e in lexicon
    )


@lru_cache(maxsize=32)
def _compile(lexicon: tuple[CueEntry, ...]) -> tuple[re.Pattern[str], dict[str, CueEntry]]:
    by_phrase = {e.phrase: e for e in lexicon}
    # longer phrases first so alternation prefers "because of" over "because"
    ordered = sorted(by_phrase, key=lambda p: (-len(p), p))
    alternatives = "|".join(r"\s+".join(map(re.escape, p.split())) for p in ordered)
    pattern = re.compile(rf"(?<!\w)(?:{alternatives})(?!\w)", re.IGNORECASE)
    return pattern, by_phrase


def detect_cues(sentence: str, lexicon: Sequence[CueEntry] = DEFAULT_LEXICON) -> list[CueMatch]:
    lexicon = tuple(lexicon)
    if not sentence or not lexicon:
        return []
    pattern, by_phrase = _compile(lexicon)
    matches = []
    for m in pattern.finditer(sentence):
        phrase = " ".join(m.group().lower().split())
        matches.append(CueMatch(by_phrase[phrase], (m.start(), m.end())))
    return matches


def classify_sentence(
    sentence: str, lexicon: Sequence[CueEntry] = DEFAULT_LEXICON
) -> SentenceClass:
    if detect_cues(sentence, lexicon):
        return SentenceClass.MARKED_CAUSAL_CANDIDATE
    return SentenceClass.NO_MARKER


@dataclass
class CueStats:
    counts: dict[str, int] = field(default_factory=dict)
    candidates: int = 0
    sentences: int = 0

    def to_dict(self) -> dict:
        return {
            "sentences": self.sentences,
            "candidates": self.candidates,
            "counts": dict(sorted(self.counts.items())),
        }


def corpus_stats(
    records: Iterable[SentenceRecord | str], lexicon: Sequence[CueEntry] = DEFAULT_LEXICON
) -> CueStats:
    """Count, per cue phrase, the sentences containing it at least once.

    Each phrase is counted on its own, so a sentence with "because of" also
    counts toward "because". Dropping an entry therefore leaves every other
    count unchanged.
    """
    lexicon = tuple(lexicon)
    counts: Counter[str] = Counter({e.phrase: 0 for e in lexicon})
    single = [(e.phrase, _compile((e,))[0]) for e in lexicon]
    stats = CueStats()
    for record in records:
        text = record.text if isinstance(record, SentenceRecord) else record
        stats.sentences += 1
        phrases = {phrase for phrase, pattern in single if pattern.search(text)}
        counts.update(phrases)
        if phrases:
            stats.candidates += 1
    stats.counts = dict(counts)
    return stats
