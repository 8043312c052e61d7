"""Pydantic request/response models for the tagging service."""

from pydantic import BaseModel, Field


class TagRequest(BaseModel):
    sentences: list[list[int]] = Field(..., min_length=1,
                                       description="one list of word lengths per sentence")
    mode: str = "single"


class SentenceTags(BaseModel):
    tags: list[str]
    sources: list[str]
    scores: list[int]


class TagResponse(BaseModel):
    results: list[SentenceTags]


class TagTextRequest(BaseModel):
    text: str = Field(..., description="raw text; each non-empty line is one sentence")
    mode: str = "single"


class TokenizedSentence(BaseModel):
    tokens: list[str]
    lengths: list[int]
    tags: list[str]
    sources: list[str]


class TagTextResponse(BaseModel):
    sentences: list[TokenizedSentence]


class EvalRequest(BaseModel):
    corpus: str = Field(..., description="flatfile corpus text with gold tags")
    mode: str = "single"


class PrecisionRecall(BaseModel):
    precision: float
    recall: float


class EvalResponse(BaseModel):
    total: int
    correct: int
    accuracy: float
    accuracy_pct: str
    confusion: dict[str, dict[str, int]]
    per_tag: dict[str, PrecisionRecall]
    sources: dict[str, int]


class StatsResponse(BaseModel):
    max_window: int
    has_context: bool
    entries: int
    distinct_keys: int
    windows_per_length: dict[int, int]
    context_entries: int
    size_bytes: int


class HealthResponse(BaseModel):
    status: str
    kb_loaded: bool
    entries: int = 0
