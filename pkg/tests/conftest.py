import pytest

from lenpos.corpus import WordRecord
from lenpos.kb import build_kb

# SUSANNE-format fixture: the corpus opening, extended so the sentence's
# bracket depth returns to zero inside the fixture (the real sentence runs
# on much longer).
EXCERPT_LINES = (
    "A01:0010a\t-\tYB\t<minbrk>\t-\t[Oh.Oh]\n"
    "A01:0010b\t-\tAT\tThe\tthe\t[O[S[Nns:s.\n"
    "A01:0010c\t-\tNP1s\tFulton\tFulton\t[Nns.\n"
    "A01:0010d\t-\tNNL1cb\tCounty\tcounty\t.Nns]\n"
    "A01:0010e\t-\tJJ\tGrand\tgrand\t.\n"
    "A01:0010f\t-\tNN1c\tJury\tjury\t.Nns:s]S]O]\n"
)

EXAMPLE_WORDS = [
    WordRecord("Det", 3, "The"),
    WordRecord("N", 6, "Fulton"),
    WordRecord("N", 6, "County"),
    WordRecord("Adj", 5, "Grand"),
    WordRecord("N", 4, "Jury"),
]


@pytest.fixture
def example_words():
    return list(EXAMPLE_WORDS)


@pytest.fixture
def example_kb(example_words):
    return build_kb([example_words], max_window=12)


@pytest.fixture
def excerpt_dir(tmp_path):
    source = tmp_path / "susanne"
    source.mkdir()
    (source / "A01").write_text(EXCERPT_LINES, encoding="utf-8")
    return source


def _susanne_file(prefix: str, sentences: list[list[tuple[str, str]]]) -> str:
    """Render sentences as SUSANNE lines; one flat [S ... S] bracket each."""
    lines = []
    ref_no = 0
    for sentence in sentences:
        for i, (fine, surface) in enumerate(sentence):
            ref_no += 1
            if len(sentence) == 1:
                parse = "[S.S]"
            elif i == 0:
                parse = "[S."
            elif i == len(sentence) - 1:
                parse = ".S]"
            else:
                parse = "."
            lines.append(f"{prefix}:{ref_no:04d}\t-\t{fine}\t{surface}\t"
                         f"{surface.lower()}\t{parse}")
    return "\n".join(lines) + "\n"


SYNTH_FILES = {
    "A01": [
        [("AT", "The"), ("NN1c", "jury"), ("VVDv", "praised"), ("AT", "the"),
         ("NN1c", "manner"), ("YF", "+.")],
        [("PPHS1", "It"), ("VBDZ", "was"), ("JJ", "good"), ("YF", "+.")],
    ],
    "A02": [
        [("YB", "<minbrk>")],
        [("AT", "The"), ("NN1n", "fund"), ("VVZv", "grows"), ("YF", "+.")],
    ],
    "G01": [
        [("NP1s", "Hart"), ("VVDv", "wrote"), ("AT1", "a"), ("JJ", "long"),
         ("NN1c", "letter"), ("YF", "+.")],
        [("YIL", "<ldquo>"), ("UH", "Oh"), ("YF", "+!"), ("YIR", "<rdquo>")],
    ],
    "J01": [
        [("MC", "Two"), ("NN2", "methods"), ("VV0v", "exist"), ("YF", "+.")],
        [("AT", "The"), ("FO", "<weird>"), ("VBZ", "is"), ("JJ", "small"),
         ("YF", "+.")],
    ],
    "N01": [
        [("AT", "The"), ("NN1c", "rider"), ("VVDv", "drew"), ("AT1", "a"),
         ("NN1c", "gun"), ("YF", "+.")],
        [("PPHS1", "He"), ("VVDv", "fired"), ("RR", "twice"), ("YF", "+.")],
    ],
}


@pytest.fixture
def synth_dir(tmp_path):
    """Small multi-genre SUSANNE-format corpus, entities included."""
    source = tmp_path / "source"
    source.mkdir()
    for name, sentences in SYNTH_FILES.items():
        (source / name).write_text(_susanne_file(name, sentences),
                                   encoding="utf-8")
    (source / "README").write_text("not corpus data\n", encoding="utf-8")
    return source
