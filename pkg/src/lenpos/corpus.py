"""Corpus preparation: SUSANNE source files in, colon-delimited flatfiles out.

The pipeline reads the six-field SUSANNE token lines, converts SGML-style
entities to ASCII (entity replacement changes character counts, so it must
happen before lengths are measured), simplifies the fine tagset to the 15
coarse categories, segments sentences from the parse field's bracket depth,
and writes one token per line as ``TAG:LEN:"SURFACE"`` with a blank line
between sentences.

Both the fine-to-coarse tag mapping and the entity table are plain TSV data
files; defaults covering the SUSANNE conventions ship with the package.
"""

import re
import string
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .tags import COARSE_TAGS, TAG_SET, check_tag

# Fine tags marking non-lexical breaks; their tokens never join a sentence.
BREAK_TAGS = frozenset({"YB"})

# Replacement for entities missing from the entity table.
UNKNOWN_ENTITY_REPLACEMENT = "?"

_ENTITY_RE = re.compile(r"<[^<>\s]+>")


class CorpusError(Exception):
    """Malformed corpus data. Carries a location when one is known."""

    def __init__(self, message: str, *, line_no: int | None = None,
                 source: str | None = None):
        self.line_no = line_no
        self.source = source
        if source is not None and line_no is not None:
            where = f"{source}:{line_no}: "
        elif source is not None:
            where = f"{source}: "
        elif line_no is not None:
            where = f"line {line_no}: "
        else:
            where = ""
        super().__init__(where + message)


class RawToken(NamedTuple):
    reference: str
    status: str
    fine_tag: str
    surface: str
    lemma: str
    parse: str

    @property
    def genre(self) -> str:
        return self.reference[:1]


class WordRecord(NamedTuple):
    tag: str
    length: int
    surface: str | None = None


Sentence = list[WordRecord]


@dataclass
class ConversionReport:
    tokens: int = 0
    sentences: int = 0
    dropped: int = 0
    unknown_entities: int = 0
    per_genre: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "tokens": self.tokens,
            "sentences": self.sentences,
            "dropped": self.dropped,
            "unknown_entities": self.unknown_entities,
            "per_genre": {g: self.per_genre[g] for g in sorted(self.per_genre)},
        }


def parse_susanne_line(line: str, line_no: int | None = None,
                       source: str | None = None) -> RawToken:
    """Split one SUSANNE token line into its six fields.

    Fields are whitespace-delimited (tabs in the distributed corpus); any
    fields beyond the sixth are ignored. Fewer than six is an error.
    """
    fields = line.split()
    if len(fields) < 6:
        raise CorpusError(
            f"expected 6 fields, got {len(fields)}: {line.strip()!r}",
            line_no=line_no, source=source,
        )
    return RawToken(*fields[:6])


def strip_markup(surface: str, entity_table: Mapping[str, str],
                 report: ConversionReport | None = None) -> str:
    """Replace SGML-style entities (``<ldquo>`` etc.) with ASCII text.

    Entities missing from the table become a single ``?`` and, when a report
    is supplied, bump its unknown_entities counter. Total: never raises.
    """

    def _sub(match: re.Match) -> str:
        entity = match.group(0)
        replacement = entity_table.get(entity)
        if replacement is None:
            if report is not None:
                report.unknown_entities += 1
            return UNKNOWN_ENTITY_REPLACEMENT
        return replacement

    return _ENTITY_RE.sub(_sub, surface)


def word_length(surface: str) -> int:
    """Character count of a converted surface; empty surfaces are an error."""
    if not surface:
        raise CorpusError("empty surface has no length; drop the token upstream")
    return len(surface)


class TagsetMapping:
    """Ordered fine-to-coarse rules: exact tags first, then longest prefix.

    A pattern with a trailing ``*`` matches any fine tag starting with the
    part before the star; a bare ``*`` sets the default category. Among
    prefix matches the longest wins; duplicates resolve to the earliest rule.
    """

    def __init__(self, rules: Iterable[tuple[str, str]], default: str = "Other"):
        self.default = check_tag(default)
        self.rules: list[tuple[str, str]] = []
        self._exact: dict[str, str] = {}
        self._prefixes: list[tuple[str, str]] = []
        for pattern, coarse in rules:
            check_tag(coarse)
            self.rules.append((pattern, coarse))
            if pattern.endswith("*") and len(pattern) > 1:
                self._prefixes.append((pattern[:-1], coarse))
            else:
                self._exact.setdefault(pattern, coarse)
        # longest prefix first; stable sort keeps earlier rules ahead on ties
        self._prefixes.sort(key=lambda pc: -len(pc[0]))

    def coarse(self, fine: str) -> str:
        hit = self._exact.get(fine)
        if hit is not None:
            return hit
        for prefix, coarse in self._prefixes:
            if fine.startswith(prefix):
                return coarse
        return self.default

    @classmethod
    def from_tsv(cls, lines: Iterable[str], source: str | None = None) -> "TagsetMapping":
        rules = []
        default = "Other"
        for no, line in enumerate(lines, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"mapping line needs pattern<TAB>tag: {line!r}",
                                  line_no=no, source=source)
            pattern, coarse = parts[0].strip(), parts[1].strip()
            if coarse not in TAG_SET:
                raise CorpusError(f"unknown coarse tag {coarse!r}",
                                  line_no=no, source=source)
            if pattern == "*":
                default = coarse
            else:
                rules.append((pattern, coarse))
        return cls(rules, default=default)


def simplify_tag(fine: str, mapping: TagsetMapping) -> str:
    return mapping.coarse(fine)


def load_tagset_mapping(path: str | Path) -> TagsetMapping:
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        return TagsetMapping.from_tsv(f, source=str(path))


def default_tagset_mapping() -> TagsetMapping:
    text = resources.files("lenpos.data").joinpath("tagmap_default.tsv").read_text("utf-8")
    return TagsetMapping.from_tsv(text.splitlines(), source="tagmap_default.tsv")


def load_entity_table(path: str | Path) -> dict[str, str]:
    path = Path(path)
    table = {}
    with path.open(encoding="utf-8") as f:
        for no, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"entity line needs entity<TAB>replacement: {line!r}",
                                  line_no=no, source=str(path))
            table[parts[0].strip()] = parts[1]
    return table


def default_entity_table() -> dict[str, str]:
    table = {}
    text = resources.files("lenpos.data").joinpath("entities_default.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        entity, _, replacement = line.partition("\t")
        table[entity.strip()] = replacement
    return table


def segment_sentences(tokens: Iterable[RawToken]) -> list[list[RawToken]]:
    """Group tokens into sentences by the parse field's bracket depth.

    A sentence ends when the running ``[`` minus ``]`` count returns to
    zero. Break tokens (BREAK_TAGS) stand outside sentences and are omitted
    from the result, though their brackets still count toward the depth.
    A token pushing the depth negative is a corpus integrity error.
    """
    sentences: list[list[RawToken]] = []
    current: list[RawToken] = []
    depth = 0
    for token in tokens:
        depth += token.parse.count("[") - token.parse.count("]")
        if depth < 0:
            raise CorpusError(
                f"unbalanced parse brackets at {token.reference}",
                source=token.reference,
            )
        if token.fine_tag not in BREAK_TAGS:
            current.append(token)
        if depth == 0 and current:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def convert_sentence(tokens: Iterable[RawToken], mapping: TagsetMapping,
                     entity_table: Mapping[str, str],
                     report: ConversionReport) -> Sentence:
    """Turn raw tokens into word records, dropping empty-surface tokens."""
    words: Sentence = []
    for token in tokens:
        converted = strip_markup(token.surface, entity_table, report)
        if not converted:
            report.dropped += 1
            continue
        words.append(WordRecord(mapping.coarse(token.fine_tag),
                                word_length(converted), converted))
    return words


def format_record(record: WordRecord) -> str:
    if record.surface is None:
        return f"{record.tag}:{record.length}:"
    return f'{record.tag}:{record.length}:"{record.surface}"'


def write_flatfile(sentences: Iterable[Sentence], path: str | Path) -> None:
    """Write sentences in the flatfile format (canonical: no padding).

    Records must carry surfaces uniformly: all present or all absent.
    """
    lines: list[str] = []
    saw_surface = saw_bare = False
    for sentence in sentences:
        if lines:
            lines.append("")
        for record in sentence:
            if record.surface is None:
                saw_bare = True
            else:
                saw_surface = True
                if len(record.surface) != record.length:
                    raise CorpusError(
                        f"length {record.length} does not match surface "
                        f"{record.surface!r}")
            lines.append(format_record(record))
    if saw_surface and saw_bare:
        raise CorpusError("surfaces must be omitted globally or not at all")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""),
                          encoding="utf-8", newline="\n")


def parse_flatfile(lines: Iterable[str], source: str | None = None) -> list[Sentence]:
    """Parse flatfile lines into sentences of word records.

    Accepts optional spaces before the first colon (legacy padded form),
    ``#`` comment lines, and blank lines as sentence boundaries.
    """
    sentences: list[Sentence] = []
    current: Sentence = []
    saw_surface = saw_bare = False
    for no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        parts = line.split(":", 2)
        if len(parts) != 3:
            raise CorpusError(f"expected TAG:LEN:\"SURFACE\", got {line!r}",
                              line_no=no, source=source)
        tag = parts[0].rstrip(" ")
        if tag not in TAG_SET:
            raise CorpusError(f"unknown tag name {tag!r}", line_no=no, source=source)
        try:
            length = int(parts[1])
        except ValueError:
            raise CorpusError(f"bad length field {parts[1]!r}",
                              line_no=no, source=source) from None
        if length < 1:
            raise CorpusError(f"length must be positive, got {length}",
                              line_no=no, source=source)
        rest = parts[2]
        if rest == "":
            surface = None
            saw_bare = True
        elif len(rest) >= 2 and rest.startswith('"') and rest.endswith('"'):
            surface = rest[1:-1]
            saw_surface = True
            if len(surface) != length:
                raise CorpusError(
                    f"length {length} does not match surface {surface!r}",
                    line_no=no, source=source)
        else:
            raise CorpusError(f"surface must be double-quoted, got {rest!r}",
                              line_no=no, source=source)
        if saw_surface and saw_bare:
            raise CorpusError("mixed surfaced and surfaceless records",
                              line_no=no, source=source)
        current.append(WordRecord(tag, length, surface))
    if current:
        sentences.append(current)
    return sentences


def read_flatfile(path: str | Path) -> list[Sentence]:
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        return parse_flatfile(f, source=str(path))


def read_susanne_file(path: str | Path) -> list[RawToken]:
    path = Path(path)
    tokens = []
    with path.open(encoding="utf-8") as f:
        for no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            tokens.append(parse_susanne_line(line, line_no=no, source=path.name))
    return tokens


def build_flatfile(source_dir: str | Path, mapping: TagsetMapping,
                   genres: set[str], out: str | Path,
                   entity_table: Mapping[str, str] | None = None) -> ConversionReport:
    """Convert the SUSANNE files under *source_dir* for the given genres.

    Files are processed in name order so output is deterministic; tokens are
    kept only when the first character of their reference is in *genres*.
    Selecting zero tokens is an error.
    """
    if not genres:
        raise CorpusError("no genres requested")
    if entity_table is None:
        entity_table = default_entity_table()
    source_dir = Path(source_dir)
    if not source_dir.is_dir():
        raise CorpusError(f"not a directory: {source_dir}")

    report = ConversionReport()
    sentences: list[Sentence] = []
    for path in sorted(source_dir.iterdir()):
        if not path.is_file() or path.name[:1] not in genres:
            continue
        tokens = [t for t in read_susanne_file(path) if t.genre in genres]
        if not tokens:
            continue
        groups = segment_sentences(tokens)
        # break tokens stand outside every group; count them as dropped
        report.dropped += len(tokens) - sum(len(g) for g in groups)
        for group in groups:
            words: Sentence = []
            word_genres: list[str] = []
            for token in group:
                converted = strip_markup(token.surface, entity_table, report)
                if not converted:
                    report.dropped += 1
                    continue
                words.append(WordRecord(mapping.coarse(token.fine_tag),
                                        len(converted), converted))
                word_genres.append(token.genre)
            if not words:
                continue
            sentences.append(words)
            report.sentences += 1
            report.tokens += len(words)
            for genre in word_genres:
                report.per_genre[genre] = report.per_genre.get(genre, 0) + 1

    if report.tokens == 0:
        raise CorpusError(f"no tokens selected for genres {sorted(genres)}")
    write_flatfile(sentences, out)
    return report


_PUNCT = set(string.punctuation)


def tokenize_text(text: str) -> list[str]:
    """Whitespace tokenizer that detaches leading/trailing punctuation.

    Each peeled punctuation character becomes its own token; interior
    punctuation (apostrophes, hyphens) stays attached.
    """
    tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        trail: list[str] = []
        while chunk and chunk[0] in _PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCT:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trail))
    return tokens
