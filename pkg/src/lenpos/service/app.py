"""HTTP front end: one loaded knowledge base served to many clients.

The knowledge base is loaded once at application start and treated as
immutable afterwards, so requests can be handled concurrently without
locking. Batch corpus preparation and training stay in the CLI; the service
covers the query side (tagging, evaluation, stats).
"""

import os

from fastapi import FastAPI, HTTPException

from .. import corpus
from ..evaluate import EvalError, evaluate
from ..kb import KnowledgeBase
from ..tagger import (MULTI_PASS, SINGLE_PASS, KnowledgeBaseContextError,
                      TaggingConfig, UntrainedKbError, tag_sentence)
from .schemas import (EvalRequest, EvalResponse, HealthResponse, SentenceTags,
                      StatsResponse, TagRequest, TagResponse, TagTextRequest,
                      TagTextResponse, TokenizedSentence)

KB_PATH_ENV = "LENPOS_KB"


def _config_for(mode: str) -> TaggingConfig:
    if mode not in (SINGLE_PASS, MULTI_PASS):
        raise HTTPException(status_code=422,
                            detail=f"mode must be 'single' or 'multi', got {mode!r}")
    return TaggingConfig(mode=mode)


def create_app(kb: KnowledgeBase | None = None,
               kb_path: str | None = None) -> FastAPI:
    """Build the service; the knowledge base comes from the argument, the
    given path, or the LENPOS_KB environment variable, in that order."""
    if kb is None:
        path = kb_path or os.environ.get(KB_PATH_ENV)
        if path:
            kb = KnowledgeBase.load(path)

    app = FastAPI(title="lenpos", version="0.1.0",
                  description="Part-of-speech tagging from word lengths")
    app.state.kb = kb

    def require_kb() -> KnowledgeBase:
        if app.state.kb is None:
            raise HTTPException(status_code=503, detail="no knowledge base loaded")
        return app.state.kb

    @app.get("/health", response_model=HealthResponse)
    def health():
        loaded = app.state.kb is not None
        entries = app.state.kb.stats()["entries"] if loaded else 0
        return HealthResponse(status="ok", kb_loaded=loaded, entries=entries)

    @app.get("/kb/stats", response_model=StatsResponse)
    def kb_stats():
        return StatsResponse(**require_kb().stats())

    @app.post("/tag", response_model=TagResponse)
    def tag(request: TagRequest):
        knowledge = require_kb()
        cfg = _config_for(request.mode)
        results = []
        for lengths in request.sentences:
            try:
                decisions = tag_sentence(knowledge, lengths, cfg)
            except (ValueError, KnowledgeBaseContextError) as err:
                raise HTTPException(status_code=422, detail=str(err)) from err
            except UntrainedKbError as err:
                raise HTTPException(status_code=503, detail=str(err)) from err
            results.append(SentenceTags(
                tags=[d.tag for d in decisions],
                sources=[d.source for d in decisions],
                scores=[d.winning_score for d in decisions],
            ))
        return TagResponse(results=results)

    @app.post("/tag/text", response_model=TagTextResponse)
    def tag_text(request: TagTextRequest):
        knowledge = require_kb()
        cfg = _config_for(request.mode)
        sentences = []
        for line in request.text.splitlines():
            tokens = corpus.tokenize_text(line)
            if not tokens:
                continue
            lengths = [len(token) for token in tokens]
            try:
                decisions = tag_sentence(knowledge, lengths, cfg)
            except UntrainedKbError as err:
                raise HTTPException(status_code=503, detail=str(err)) from err
            except KnowledgeBaseContextError as err:
                raise HTTPException(status_code=422, detail=str(err)) from err
            sentences.append(TokenizedSentence(
                tokens=tokens, lengths=lengths,
                tags=[d.tag for d in decisions],
                sources=[d.source for d in decisions],
            ))
        return TagTextResponse(sentences=sentences)

    @app.post("/eval", response_model=EvalResponse)
    def eval_corpus(request: EvalRequest):
        knowledge = require_kb()
        cfg = _config_for(request.mode)
        try:
            test_sentences = corpus.parse_flatfile(
                request.corpus.splitlines(), source="request")
            report = evaluate(knowledge, test_sentences, cfg)
        except (corpus.CorpusError, EvalError) as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        except KnowledgeBaseContextError as err:
            raise HTTPException(status_code=422, detail=str(err)) from err
        except UntrainedKbError as err:
            raise HTTPException(status_code=503, detail=str(err)) from err
        return EvalResponse(**report.as_dict())

    return app
