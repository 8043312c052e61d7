"""Part-of-speech tagging that sees nothing but word lengths.

A knowledge base maps windows of word-length sequences to the tag sequences
observed under them; tagging scores every matching window with an
exponential match-length weight and picks the best-supported tag per word.
"""

__version__ = "0.1.0"

from .corpus import Sentence, WordRecord
from .kb import KnowledgeBase, build_kb
from .tagger import TagDecision, TaggingConfig, tag_sentence

__all__ = [
    "KnowledgeBase",
    "Sentence",
    "TagDecision",
    "TaggingConfig",
    "WordRecord",
    "build_kb",
    "tag_sentence",
    "__version__",
]
