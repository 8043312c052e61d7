"""Token-level evaluation: accuracy, confusion matrix, decision sources.

The protocol keeps the tagger honest by handing it word lengths only; gold
tags and surfaces never reach the tagging path. Percentages are computed on
exact rationals and formatted round-half-up to two decimals.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import corpus
from .corpus import ConversionReport, Sentence, TagsetMapping
from .kb import KnowledgeBase
from .tagger import (SOURCE_FALLBACK_GLOBAL, SOURCE_FALLBACK_LENGTH,
                     SOURCE_MATCHED, TagDecision, TaggingConfig, tag_sentence)
from .tags import COARSE_TAGS


class EvalError(Exception):
    """Evaluation cannot run (empty test set, overlapping genre split, ...)."""


def _empty_sources() -> dict[str, int]:
    return {SOURCE_MATCHED: 0, SOURCE_FALLBACK_LENGTH: 0,
            SOURCE_FALLBACK_GLOBAL: 0}


@dataclass
class EvalReport:
    total: int = 0
    correct: int = 0
    confusion: dict[str, dict[str, int]] = field(default_factory=dict)
    sources: dict[str, int] = field(default_factory=_empty_sources)

    def record(self, gold: str, decision: TagDecision) -> None:
        self.total += 1
        if decision.tag == gold:
            self.correct += 1
        row = self.confusion.setdefault(gold, {})
        row[decision.tag] = row.get(decision.tag, 0) + 1
        self.sources[decision.source] += 1

    @property
    def accuracy(self) -> Fraction:
        if self.total == 0:
            return Fraction(0)
        return Fraction(self.correct, self.total)

    @property
    def accuracy_pct(self) -> str:
        """Percentage with two decimals, round-half-up, computed exactly."""
        if self.total == 0:
            return "0.00"
        hundredths = (Fraction(self.correct * 10000, self.total)
                      + Fraction(1, 2)).__floor__()
        return f"{hundredths // 100}.{hundredths % 100:02d}"

    def per_tag(self) -> dict[str, dict[str, float]]:
        """Precision and recall per tag; 0.0 where undefined."""
        result = {}
        for tag in COARSE_TAGS:
            hits = self.confusion.get(tag, {}).get(tag, 0)
            gold_count = sum(self.confusion.get(tag, {}).values())
            pred_count = sum(row.get(tag, 0) for row in self.confusion.values())
            result[tag] = {
                "precision": hits / pred_count if pred_count else 0.0,
                "recall": hits / gold_count if gold_count else 0.0,
            }
        return result

    def as_dict(self) -> dict:
        confusion = {}
        for gold in COARSE_TAGS:
            row = self.confusion.get(gold)
            if not row:
                continue
            confusion[gold] = {pred: row[pred] for pred in COARSE_TAGS
                               if pred in row}
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": float(self.accuracy),
            "accuracy_pct": self.accuracy_pct,
            "confusion": confusion,
            "per_tag": self.per_tag(),
            "sources": dict(self.sources),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"


def evaluate(kb: KnowledgeBase, test_sentences: list[Sentence],
             cfg: TaggingConfig | None = None) -> EvalReport:
    """Tag every test sentence from its lengths alone and score the result."""
    if not test_sentences:
        raise EvalError("test corpus is empty")
    cfg = cfg or TaggingConfig()
    report = EvalReport()
    for sentence in test_sentences:
        lengths = [word.length for word in sentence]
        decisions = tag_sentence(kb, lengths, cfg)
        for word, decision in zip(sentence, decisions):
            report.record(word.tag, decision)
    return report


def evaluate_file(kb: KnowledgeBase, test_path: str | Path,
                  cfg: TaggingConfig | None = None) -> EvalReport:
    return evaluate(kb, corpus.read_flatfile(test_path), cfg)


def split_corpus(source_dir: str | Path, mapping: TagsetMapping,
                 train_genres: set[str], test_genres: set[str],
                 train_out: str | Path, test_out: str | Path,
                 entity_table: dict[str, str] | None = None,
                 ) -> tuple[ConversionReport, ConversionReport]:
    """Write disjoint train/test flatfiles from one source directory."""
    if not train_genres or not test_genres:
        raise EvalError("genre sets must be non-empty")
    overlap = train_genres & test_genres
    if overlap:
        raise EvalError(f"train and test genres overlap: {sorted(overlap)}")
    train_report = corpus.build_flatfile(source_dir, mapping, train_genres,
                                         train_out, entity_table)
    test_report = corpus.build_flatfile(source_dir, mapping, test_genres,
                                        test_out, entity_table)
    return train_report, test_report
