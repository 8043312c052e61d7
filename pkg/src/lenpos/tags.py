"""The closed set of coarse part-of-speech categories.

Every component of the package (corpus files, knowledge bases, tagger
output, evaluation reports) speaks this 15-tag vocabulary. The declaration
order below is meaningful: it is the final tie-break when the tagger must
choose between equally scored candidates, so it must never be reordered.
"""

COARSE_TAGS: tuple[str, ...] = (
    "N",
    "V",
    "Adj",
    "Adv",
    "Det",
    "Pron",
    "Prep",
    "Conj",
    "Num",
    "Aux",
    "Interj",
    "Part",
    "Punct",
    "Formula",
    "Other",
)

TAG_ORDER: dict[str, int] = {tag: i for i, tag in enumerate(COARSE_TAGS)}

TAG_SET: frozenset[str] = frozenset(COARSE_TAGS)

# Placeholder for the unknown position in a context key; not a valid tag name.
HOLE = "_"


def is_tag(name: str) -> bool:
    return name in TAG_SET


def check_tag(name: str) -> str:
    """Return *name* if it is a known coarse tag, else raise ValueError."""
    if name not in TAG_SET:
        raise ValueError(f"unknown tag name: {name!r}")
    return name
