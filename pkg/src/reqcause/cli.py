"""Command line entry point.

Stages talk through files::

    reqcause preprocess docs/ -o sentences.jsonl
    reqcause extract sentences.jsonl -o relations.json
    reqcause deps relations.json
    reqcause testgen relations.json --strategy heuristic

Exit codes: 0 success, 1 unreadable or missing input, 2 invalid content.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import warnings
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Sequence

from . import annotation, corpus, cues, extract, logic, testgen
from .errors import MalformedClause, ReqCauseError
from .formula import relation_from_dict, relation_to_dict

log = logging.getLogger("reqcause")

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION = 0, 1, 2


class InputError(Exception):
    """Input that cannot be read at all (missing, unreadable, not JSON)."""


@dataclass
class PipelineConfig:
    lexicon: str | None = None
    atom_cap: int = logic.DEFAULT_ATOM_CAP
    cause_cap: int = testgen.DEFAULT_CAUSE_CAP
    lenient_short: bool = False
    merge_before_deps: bool = False

    def __post_init__(self):
        if self.atom_cap < 1 or self.cause_cap < 1:
            raise ValueError("caps must be positive")

    @classmethod
    def load(cls, path: str | Path) -> PipelineConfig:
        data = _read_json(path)
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_json(path: str | Path) -> Any:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _read_records(path: str | Path) -> list[corpus.SentenceRecord]:
    records = []
    for lineno, line in enumerate(_read_text(path).splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append(corpus.SentenceRecord.from_dict(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad sentence record: {exc}") from exc
    return records


def _read_relations(path: str | Path):
    data = _read_json(path)
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a JSON array of relations")
    return [relation_from_dict(item) for item in data]


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _lexicon(config: PipelineConfig):
    if config.lexicon is None:
        return cues.DEFAULT_LEXICON
    return cues.parse_lexicon(_read_text(config.lexicon))


# commands


def cmd_preprocess(args, config: PipelineConfig) -> int:
    paths: list[Path] = []
    for item in args.inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(q for q in p.iterdir() if q.is_file() and q.suffix == ".txt"))
        else:
            paths.append(p)
    status = EXIT_OK
    chunks = []
    for path in paths:
        try:
            doc = corpus.RawDocument.from_text(path.stem, _read_text(path))
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = EXIT_INPUT
            continue
        records = corpus.preprocess_document(doc, lenient_short=config.lenient_short)
        chunks.append(corpus.serialize_records(records))
    _emit("".join(chunks), args.output)
    return status


def cmd_cues(args, config: PipelineConfig) -> int:
    lexicon = _lexicon(config)
    stats = cues.corpus_stats(_read_records(args.records), lexicon)
    _emit(_dump(stats.to_dict()), args.output)
    return EXIT_OK


def cmd_extract(args, config: PipelineConfig) -> int:
    lexicon = _lexicon(config)
    relations = []
    for record in _read_records(args.records):
        try:
            relations.extend(extract.extract_relations(record, lexicon))
        except MalformedClause as exc:
            where = f"{record.doc_id}:{record.paragraph_index}:{record.sentence_index}"
            print(f"warning: skipped {where}: {exc}", file=sys.stderr)
    _emit(_dump([relation_to_dict(r) for r in relations]), args.output)
    return EXIT_OK


def cmd_deps(args, config: PipelineConfig) -> int:
    relations = _read_relations(args.relations)
    if config.merge_before_deps:
        relations = logic.merge_by_effect(relations)
    findings, skipped = logic.scan_dependencies(relations, config.atom_cap)
    for pair in skipped:
        print(f"notice: {pair.left} / {pair.right} unevaluated: {pair.reason}", file=sys.stderr)
    _emit(_dump([f.to_dict() for f in findings]), args.output)
    return EXIT_OK


def _safe_name(relation_id: str) -> str:
    return re.sub(r"[^\w.-]", "_", relation_id) or "relation"


def cmd_testgen(args, config: PipelineConfig) -> int:
    relations = _read_relations(args.relations)
    suites = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for r in relations:
            if args.strategy == "exhaustive":
                suites.append(testgen.enumerate_tests(r, config.cause_cap))
            else:
                suites.append(testgen.heuristic_suite(r))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "json":
        _emit(_dump([testgen.suite_to_dict(s) for s in suites]), args.output)
    elif args.output and len(suites) != 1:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for s in suites:
            (out / f"{_safe_name(s.relation_id)}.csv").write_text(
                testgen.suite_to_csv(s), encoding="utf-8", newline="\n"
            )
    elif len(suites) == 1:
        _emit(testgen.suite_to_csv(suites[0]), args.output)
    else:
        _emit("\n".join(f"# {s.relation_id}\n{testgen.suite_to_csv(s)}" for s in suites), None)
    return EXIT_OK


def cmd_kappa(args, config: PipelineConfig) -> int:
    categories = args.categories.split(",") if args.categories else None
    if not Path(args.ratings).is_file():
        raise InputError(f"{args.ratings}: no such file")
    matrix = annotation.read_ratings_csv(args.ratings, categories)
    result = annotation.fleiss_agreement(matrix)
    _emit(_dump(result.to_dict()), args.output)
    return EXIT_OK


def cmd_eval(args, config: PipelineConfig) -> int:
    sentences = None
    if args.sentences:
        sentences = [r.text for r in _read_records(args.sentences)]
    for path in (args.predicted, args.gold):
        if not Path(path).is_file():
            raise InputError(f"{path}: no such file")
    predicted = annotation.read_annotations(args.predicted, sentences)
    gold = annotation.read_annotations(args.gold, sentences)
    scores = annotation.evaluate_extraction(predicted, gold)
    _emit(_dump({label: s.to_dict() for label, s in scores.items()}), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reqcause", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="JSON file with pipeline settings")
    parser.add_argument("--lexicon", help="cue lexicon: phrase<TAB>ambiguous|unambiguous per line")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="raw text documents to sentence JSONL")
    p.add_argument("inputs", nargs="+", help="text files or directories of .txt files")
    p.add_argument("-o", "--output")
    p.add_argument("--lenient-short", action="store_true", default=None,
                   help="keep short lines ending in '.'")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("cues", help="cue phrase statistics over sentence JSONL")
    p.add_argument("records")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_cues)

    p = sub.add_parser("extract", help="causal relations from sentence JSONL")
    p.add_argument("records")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("deps", help="dependency findings between relations")
    p.add_argument("relations")
    p.add_argument("-o", "--output")
    p.add_argument("--merge", action="store_true", default=None, dest="merge_before_deps",
                   help="merge same-effect relations first")
    p.add_argument("--atom-cap", type=int)
    p.set_defaults(func=cmd_deps)

    p = sub.add_parser("testgen", help="test suites for relations")
    p.add_argument("relations")
    p.add_argument("--strategy", choices=["exhaustive", "heuristic"], default="exhaustive")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", help="file, or directory for several CSV suites")
    p.add_argument("--cause-cap", type=int)
    p.set_defaults(func=cmd_testgen)

    p = sub.add_parser("kappa", help="Fleiss kappa from a ratings CSV")
    p.add_argument("ratings")
    p.add_argument("--categories", help="comma-separated category names")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("eval", help="score predicted against gold annotations")
    p.add_argument("predicted")
    p.add_argument("gold")
    p.add_argument("--sentences", help="sentence JSONL aligned with both files")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)
    return parser


def _config(args) -> PipelineConfig:
    config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    overrides = {
        "lexicon": args.lexicon,
        "atom_cap": getattr(args, "atom_cap", None),
        "cause_cap": getattr(args, "cause_cap", None),
        "lenient_short": getattr(args, "lenient_short", None),
        "merge_before_deps": getattr(args, "merge_before_deps", None),
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    config.__post_init__()
    return config


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        return args.func(args, config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ReqCauseError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
