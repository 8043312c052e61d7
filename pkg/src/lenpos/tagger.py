"""Assign coarse tags to sentences given only their word lengths.

For each position the tagger queries every contiguous window containing it
(up to the configured width), and each stored tag sequence found under a
window's length key adds ``count * 2**window_length`` to the tag it aligns
with at that position. Longer matches therefore strictly outweigh any single
shorter one. Scores are exact Python integers, so argmax never suffers
overflow or rounding no matter the window size.

Words with no matching window at all fall back to the most frequent tag for
their length, then to the globally most frequent tag; a nonempty knowledge
base always yields a tag.

The experimental multi-pass mode re-scores each position with additional
context lookups keyed on (lengths, currently assigned tags with the target
position blanked), updating all positions synchronously per pass.
"""

from dataclasses import dataclass
from typing import NamedTuple

from .kb import KnowledgeBase
from .tags import HOLE, TAG_ORDER

SINGLE_PASS = "single"
MULTI_PASS = "multi"

SOURCE_MATCHED = "matched"
SOURCE_FALLBACK_LENGTH = "fallback_length"
SOURCE_FALLBACK_GLOBAL = "fallback_global"


class UntrainedKbError(Exception):
    """The knowledge base has no unigram entries to fall back on."""


@dataclass
class TaggingConfig:
    max_window: int | None = None  # None: use the knowledge base's
    mode: str = SINGLE_PASS
    max_refine_iters: int = 3

    def __post_init__(self):
        if self.max_window is not None and self.max_window < 1:
            raise ValueError(f"max_window must be positive, got {self.max_window}")
        if self.mode not in (SINGLE_PASS, MULTI_PASS):
            raise ValueError(f"mode must be {SINGLE_PASS!r} or {MULTI_PASS!r}, "
                             f"got {self.mode!r}")
        if self.max_refine_iters < 0:
            raise ValueError("max_refine_iters must be >= 0")


class TagDecision(NamedTuple):
    tag: str
    source: str
    winning_score: int


def _effective_window(kb: KnowledgeBase, cfg: TaggingConfig) -> int:
    width = kb.max_window if cfg.max_window is None else cfg.max_window
    if width > kb.max_window:
        raise ValueError(f"config max_window {width} exceeds knowledge base's "
                         f"{kb.max_window}")
    return width


def score_word(kb: KnowledgeBase, lengths: list[int], i: int,
               cfg: TaggingConfig | None = None) -> dict[str, int]:
    """Exact per-tag scores for position *i* (0-based) of the sentence.

    Sums count * 2**window_length over every window containing i and every
    tag sequence stored under that window's length key. Tags that gather no
    evidence are simply absent from the result.
    """
    cfg = cfg or TaggingConfig()
    n = len(lengths)
    if not 0 <= i < n:
        raise IndexError(f"position {i} out of range for {n} words")
    width = _effective_window(kb, cfg)
    lengths_t = tuple(lengths)
    scores: dict[str, int] = {}
    for a in range(max(0, i - width + 1), i + 1):
        for b in range(i, min(n, a + width)):
            found = kb.lookup(lengths_t[a:b + 1])
            if not found:
                continue
            weight = 1 << (b - a + 1)
            for seq, count in found.items():
                tag = seq[i - a]
                scores[tag] = scores.get(tag, 0) + count * weight
    return scores


def _argmax(candidates: dict[str, int], global_freq: dict[str, int]) -> str:
    # ties: larger global frequency, then earlier tag declaration order
    return max(candidates, key=lambda t: (candidates[t],
                                          global_freq.get(t, 0),
                                          -TAG_ORDER[t]))


def select_tag(table: dict[str, int], kb: KnowledgeBase,
               word_length: int) -> TagDecision:
    """Pick the winning tag from a score table, falling back when all-zero.

    Matched ties break toward the globally more frequent tag, then the fixed
    declaration order. Unmatched words take the most frequent tag for their
    length, or failing that the globally most frequent tag. A knowledge base
    with no unigram entries at all cannot fall back and raises.
    """
    global_freq = kb.tag_frequencies
    positive = {tag: score for tag, score in table.items() if score > 0}
    if positive:
        tag = _argmax(positive, global_freq)
        return TagDecision(tag, SOURCE_MATCHED, positive[tag])
    by_length = kb.length_tag_frequencies(word_length)
    if by_length:
        return TagDecision(_argmax(by_length, global_freq),
                           SOURCE_FALLBACK_LENGTH, 0)
    if not global_freq:
        raise UntrainedKbError("knowledge base has no unigram entries")
    return TagDecision(_argmax(global_freq, global_freq),
                       SOURCE_FALLBACK_GLOBAL, 0)


def _check_sentence(lengths: list[int]) -> None:
    if not lengths:
        raise ValueError("cannot tag an empty sentence")
    for length in lengths:
        if length < 1:
            raise ValueError(f"word lengths must be positive, got {length}")


def _refined_decisions(kb: KnowledgeBase, lengths: list[int],
                       current: list[str], cfg: TaggingConfig) -> list[TagDecision]:
    """One synchronous refinement pass: base scores plus context scores."""
    width = _effective_window(kb, cfg)
    n = len(lengths)
    lengths_t = tuple(lengths)
    current_t = tuple(current)
    decisions = []
    for i in range(n):
        combined = score_word(kb, lengths, i, cfg)
        for a in range(max(0, i - width + 1), i + 1):
            for b in range(i, min(n, a + width)):
                ctx = (current_t[a:i] + (HOLE,) + current_t[i + 1:b + 1])
                found = kb.context_lookup(lengths_t[a:b + 1], ctx)
                if not found:
                    continue
                weight = 1 << (b - a + 1)
                for tag, count in found.items():
                    combined[tag] = combined.get(tag, 0) + count * weight
        decisions.append(select_tag(combined, kb, lengths[i]))
    return decisions


def refine_pass(kb: KnowledgeBase, lengths: list[int], current: list[str],
                cfg: TaggingConfig | None = None) -> list[str]:
    """Revise a tagging once using the context index; pure and synchronous."""
    cfg = cfg or TaggingConfig(mode=MULTI_PASS)
    _check_sentence(lengths)
    if len(current) != len(lengths):
        raise ValueError("current tags and lengths differ in count")
    if not kb.has_context:
        raise KnowledgeBaseContextError()
    return [d.tag for d in _refined_decisions(kb, lengths, current, cfg)]


class KnowledgeBaseContextError(Exception):
    def __init__(self):
        super().__init__("multi-pass tagging needs a knowledge base built "
                         "with context indexing")


def tag_sentence(kb: KnowledgeBase, lengths: list[int],
                 cfg: TaggingConfig | None = None) -> list[TagDecision]:
    """Tag every position of a sentence given by its word lengths.

    Single-pass mode scores and selects each position independently.
    Multi-pass mode refines the result up to max_refine_iters times,
    stopping early once a pass leaves the tagging unchanged.
    """
    cfg = cfg or TaggingConfig()
    _check_sentence(lengths)
    decisions = [select_tag(score_word(kb, lengths, i, cfg), kb, lengths[i])
                 for i in range(len(lengths))]
    if cfg.mode == SINGLE_PASS:
        return decisions
    if not kb.has_context:
        raise KnowledgeBaseContextError()
    tags = [d.tag for d in decisions]
    for _ in range(cfg.max_refine_iters):
        decisions = _refined_decisions(kb, lengths, tags, cfg)
        new_tags = [d.tag for d in decisions]
        if new_tags == tags:
            break
        tags = new_tags
    return decisions
