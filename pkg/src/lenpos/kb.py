"""Knowledge base keying word-length windows to tag sequences with counts.

Every contiguous window of a training sentence (up to max_window words)
contributes one count to its (length sequence -> tag sequence) entry, so a
lookup is a single dict access and never scans the store. The on-disk form
(LKB) is sorted text: equal knowledge bases serialize to identical bytes.

The optional context section supports the experimental multi-pass tagger:
it keys (length window, tag window with one position blanked) to the tag
observed at the blank.
"""

from collections.abc import Mapping, Sequence
from pathlib import Path

from .corpus import WordRecord
from .tags import COARSE_TAGS, HOLE, TAG_SET

LengthKey = tuple[int, ...]
TagSequence = tuple[str, ...]
ContextTags = tuple[str, ...]

DEFAULT_MAX_WINDOW = 12

_TAGS_LINE = ",".join(COARSE_TAGS)


class KbError(Exception):
    """Invalid knowledge-base data or operation."""


def key_to_str(key: LengthKey) -> str:
    return ":".join(str(n) for n in key)


def parse_length_key(text: str) -> LengthKey:
    """Parse the canonical colon-joined form, e.g. ``3:6:6``."""
    try:
        key = tuple(int(part) for part in text.split(":"))
    except ValueError:
        raise KbError(f"bad length key {text!r}") from None
    if not key or any(n < 1 for n in key):
        raise KbError(f"length key needs positive integers: {text!r}")
    return key


def seq_to_str(seq: Sequence[str]) -> str:
    return ":".join(seq)


class KnowledgeBase:
    def __init__(self, max_window: int = DEFAULT_MAX_WINDOW, *,
                 with_context: bool = False):
        if max_window < 1:
            raise KbError(f"max_window must be positive, got {max_window}")
        self.max_window = max_window
        self.tagset = COARSE_TAGS
        self.entries: dict[LengthKey, dict[TagSequence, int]] = {}
        self.context_entries: dict[tuple[LengthKey, ContextTags], dict[str, int]] | None = (
            {} if with_context else None)
        self._freq_cache: tuple[dict[str, int], dict[int, dict[str, int]]] | None = None

    @property
    def has_context(self) -> bool:
        return self.context_entries is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return (self.max_window == other.max_window
                and self.entries == other.entries
                and self.context_entries == other.context_entries)

    def index_sentence(self, sentence: Sequence[WordRecord]) -> None:
        """Count every contiguous window of the sentence exactly once."""
        n = len(sentence)
        if n == 0:
            raise KbError("cannot index an empty sentence")
        lengths = tuple(w.length for w in sentence)
        tags = tuple(w.tag for w in sentence)
        for length, tag in zip(lengths, tags):
            if length < 1:
                raise KbError(f"word length must be positive, got {length}")
            if tag not in TAG_SET:
                raise KbError(f"unknown tag name {tag!r}")
        self._freq_cache = None
        entries = self.entries
        ctx_entries = self.context_entries
        for a in range(n):
            for b in range(a, min(n, a + self.max_window)):
                key = lengths[a:b + 1]
                seq = tags[a:b + 1]
                by_seq = entries.setdefault(key, {})
                by_seq[seq] = by_seq.get(seq, 0) + 1
                if ctx_entries is not None:
                    for p in range(a, b + 1):
                        ctx = seq[:p - a] + (HOLE,) + seq[p - a + 1:]
                        by_tag = ctx_entries.setdefault((key, ctx), {})
                        by_tag[tags[p]] = by_tag.get(tags[p], 0) + 1

    def lookup(self, key: LengthKey) -> Mapping[TagSequence, int]:
        """Tag sequences stored under *key* with their counts (read-only)."""
        return self.entries.get(tuple(key), {})

    def context_lookup(self, key: LengthKey,
                       context: ContextTags) -> Mapping[str, int]:
        if self.context_entries is None:
            raise KbError("knowledge base has no context index")
        return self.context_entries.get((tuple(key), tuple(context)), {})

    def merge(self, other: "KnowledgeBase") -> "KnowledgeBase":
        """Sum counts entry-wise; commutative and associative."""
        if (self.max_window != other.max_window
                or self.tagset != other.tagset
                or self.has_context != other.has_context):
            raise KbError("cannot merge: max_window, tagset or context mode differ")
        merged = KnowledgeBase(self.max_window, with_context=self.has_context)
        for source in (self, other):
            for key, by_seq in source.entries.items():
                target = merged.entries.setdefault(key, {})
                for seq, count in by_seq.items():
                    target[seq] = target.get(seq, 0) + count
            if source.context_entries:
                assert merged.context_entries is not None
                for ctx_key, by_tag in source.context_entries.items():
                    target = merged.context_entries.setdefault(ctx_key, {})
                    for tag, count in by_tag.items():
                        target[tag] = target.get(tag, 0) + count
        return merged

    def _frequencies(self) -> tuple[dict[str, int], dict[int, dict[str, int]]]:
        if self._freq_cache is None:
            global_freq: dict[str, int] = {}
            by_length: dict[int, dict[str, int]] = {}
            for key, by_seq in self.entries.items():
                if len(key) != 1:
                    continue
                per_length = by_length.setdefault(key[0], {})
                for seq, count in by_seq.items():
                    tag = seq[0]
                    global_freq[tag] = global_freq.get(tag, 0) + count
                    per_length[tag] = per_length.get(tag, 0) + count
            self._freq_cache = (global_freq, by_length)
        return self._freq_cache

    @property
    def tag_frequencies(self) -> dict[str, int]:
        """Global tag counts, recomputed from the length-1 entries."""
        return self._frequencies()[0]

    def length_tag_frequencies(self, length: int) -> dict[str, int]:
        """Tag counts among words of exactly this length."""
        return self._frequencies()[1].get(length, {})

    def stats(self) -> dict:
        windows = {length: 0 for length in range(1, self.max_window + 1)}
        total_entries = 0
        for key, by_seq in self.entries.items():
            total_entries += len(by_seq)
            windows[len(key)] += sum(by_seq.values())
        return {
            "max_window": self.max_window,
            "has_context": self.has_context,
            "entries": total_entries,
            "distinct_keys": len(self.entries),
            "windows_per_length": windows,
            "context_entries": (sum(len(v) for v in self.context_entries.values())
                                if self.context_entries is not None else 0),
            "size_bytes": len(self.dumps().encode("utf-8")),
        }

    def dumps(self) -> str:
        lines = ["LKB 1", f"maxwindow {self.max_window}", f"tags {_TAGS_LINE}"]
        flat = []
        for key, by_seq in self.entries.items():
            key_str = key_to_str(key)
            for seq, count in by_seq.items():
                flat.append((key_str, seq_to_str(seq), count))
        flat.sort(key=lambda row: (row[0], row[1]))
        lines.extend(f"{k}\t{s}\t{c}" for k, s, c in flat)
        if self.context_entries is not None:
            lines.append("CTX")
            ctx_flat = []
            for (key, ctx), by_tag in self.context_entries.items():
                ctx_str = f"{key_to_str(key)}|{seq_to_str(ctx)}"
                for tag, count in by_tag.items():
                    ctx_flat.append((ctx_str, tag, count))
            ctx_flat.sort(key=lambda row: (row[0], row[1]))
            lines.extend(f"{k}\t{t}\t{c}" for k, t, c in ctx_flat)
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8", newline="\n")

    @classmethod
    def loads(cls, text: str, source: str | None = None) -> "KnowledgeBase":
        where = f"{source}: " if source else ""
        lines = text.splitlines()
        if len(lines) < 3:
            raise KbError(f"{where}truncated file: missing header")
        if lines[0] != "LKB 1":
            raise KbError(f"{where}line 1: unsupported version {lines[0]!r}")
        try:
            tag_word, window_text = lines[1].split(" ", 1)
            if tag_word != "maxwindow":
                raise ValueError
            max_window = int(window_text)
        except ValueError:
            raise KbError(f"{where}line 2: expected 'maxwindow <W>', "
                          f"got {lines[1]!r}") from None
        if max_window < 1:
            raise KbError(f"{where}line 2: maxwindow must be positive")
        if lines[2] != f"tags {_TAGS_LINE}":
            raise KbError(f"{where}line 3: tagset does not match this package's "
                          f"15 categories")

        kb = cls(max_window)
        in_context = False
        for no, line in enumerate(lines[3:], start=4):
            if line == "CTX":
                if in_context:
                    raise KbError(f"{where}line {no}: duplicate CTX section")
                in_context = True
                kb.context_entries = {}
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise KbError(f"{where}line {no}: expected three tab-separated "
                              f"fields, got {line!r}")
            key_text, seq_text, count_text = parts
            try:
                count = int(count_text)
            except ValueError:
                raise KbError(f"{where}line {no}: malformed count "
                              f"{count_text!r}") from None
            if count < 1:
                raise KbError(f"{where}line {no}: counts must be positive, "
                              f"got {count}")
            if not in_context:
                key = _parse_key_checked(key_text, max_window, where, no)
                seq = tuple(seq_text.split(":"))
                if len(seq) != len(key):
                    raise KbError(f"{where}line {no}: tag sequence length does "
                                  f"not match key")
                for tag in seq:
                    if tag not in TAG_SET:
                        raise KbError(f"{where}line {no}: unknown tag name {tag!r}")
                by_seq = kb.entries.setdefault(key, {})
                if seq in by_seq:
                    raise KbError(f"{where}line {no}: duplicate entry")
                by_seq[seq] = count
            else:
                key_part, sep, ctx_part = key_text.partition("|")
                if not sep:
                    raise KbError(f"{where}line {no}: context key needs "
                                  f"'<lengths>|<tags>'")
                key = _parse_key_checked(key_part, max_window, where, no)
                ctx = tuple(ctx_part.split(":"))
                if len(ctx) != len(key):
                    raise KbError(f"{where}line {no}: context length does not "
                                  f"match key")
                if sum(1 for t in ctx if t == HOLE) != 1:
                    raise KbError(f"{where}line {no}: context needs exactly one "
                                  f"'{HOLE}'")
                for tag in ctx:
                    if tag != HOLE and tag not in TAG_SET:
                        raise KbError(f"{where}line {no}: unknown tag name {tag!r}")
                if seq_text not in TAG_SET:
                    raise KbError(f"{where}line {no}: unknown tag name "
                                  f"{seq_text!r}")
                by_tag = kb.context_entries.setdefault((key, ctx), {})
                if seq_text in by_tag:
                    raise KbError(f"{where}line {no}: duplicate context entry")
                by_tag[seq_text] = count
        return kb

    @classmethod
    def load(cls, path: str | Path) -> "KnowledgeBase":
        path = Path(path)
        return cls.loads(path.read_text(encoding="utf-8"), source=str(path))


def _parse_key_checked(text: str, max_window: int, where: str, no: int) -> LengthKey:
    try:
        key = parse_length_key(text)
    except KbError as err:
        raise KbError(f"{where}line {no}: {err}") from None
    if len(key) > max_window:
        raise KbError(f"{where}line {no}: key longer than maxwindow")
    return key


def build_kb(sentences, max_window: int = DEFAULT_MAX_WINDOW, *,
             with_context: bool = False) -> KnowledgeBase:
    """Index every sentence into a fresh knowledge base."""
    kb = KnowledgeBase(max_window, with_context=with_context)
    for sentence in sentences:
        kb.index_sentence(sentence)
    return kb
