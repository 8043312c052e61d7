"""Command-line front end.

Subcommands cover the whole pipeline: ``prepare`` converts SUSANNE sources
to flatfiles, ``train`` builds a knowledge base, ``tag`` and ``eval`` query
one, ``kb-stats`` inspects one, and ``serve`` starts the HTTP service.
``tag``, ``eval`` and ``kb-stats`` accept ``--server URL`` to run as thin
clients against an already running service instead of loading the knowledge
base locally.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 runtime error.
Diagnostics go to stderr; data goes to files or stdout.
"""

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .evaluate import EvalError, EvalReport, evaluate
from .kb import KbError, KnowledgeBase, build_kb, parse_length_key
from .tagger import (KnowledgeBaseContextError, TagDecision, TaggingConfig,
                     UntrainedKbError, tag_sentence)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_genres(text: str) -> set[str]:
    genres = {part.strip() for part in text.split(",") if part.strip()}
    if not genres or any(len(g) != 1 for g in genres):
        raise UsageError(f"--genres wants single letters like 'A,G,J', got {text!r}")
    return genres


def _load_mapping(choice: str) -> corpus.TagsetMapping:
    if choice == "default":
        return corpus.default_tagset_mapping()
    return corpus.load_tagset_mapping(choice)


def _load_entities(choice: str) -> dict[str, str]:
    if choice == "default":
        return corpus.default_entity_table()
    return corpus.load_entity_table(choice)


def _stats_json(stats: dict) -> str:
    stats = dict(stats)
    stats["windows_per_length"] = {str(k): v
                                   for k, v in stats["windows_per_length"].items()}
    return json.dumps(stats, indent=2) + "\n"


def _decision_line(decisions: list[TagDecision], verbose: bool) -> str:
    if verbose:
        return " ".join(f"{d.tag}/{d.source}" for d in decisions)
    return " ".join(d.tag for d in decisions)


def cmd_prepare(args) -> int:
    mapping = _load_mapping(args.mapping)
    entities = _load_entities(args.entities)
    genres = _parse_genres(args.genres)
    report = corpus.build_flatfile(args.input, mapping, genres, args.out, entities)
    text = json.dumps(report.as_dict(), indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    print(f"wrote {report.tokens} tokens in {report.sentences} sentences "
          f"to {args.out}", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    sentences = corpus.read_flatfile(args.corpus)
    if not sentences:
        raise corpus.CorpusError(f"no sentences in {args.corpus}")
    kb = build_kb(sentences, max_window=args.max_window,
                  with_context=args.context)
    kb.save(args.out)
    print(f"trained on {len(sentences)} sentences; "
          f"{kb.stats()['entries']} entries -> {args.out}", file=sys.stderr)
    return 0


def cmd_kb_stats(args) -> int:
    if args.server:
        import httpx

        response = httpx.get(f"{args.server.rstrip('/')}/kb/stats", timeout=60)
        response.raise_for_status()
        sys.stdout.write(json.dumps(response.json(), indent=2) + "\n")
        return 0
    if not args.kb:
        raise UsageError("a KB file is required unless --server is given")
    kb = KnowledgeBase.load(args.kb)
    sys.stdout.write(_stats_json(kb.stats()))
    return 0


def _tag_inputs(args) -> tuple[list[list[int]], list[list[str]] | None]:
    """Sentences to tag as length lists, plus tokens when tagging raw text."""
    if (args.lengths is None) == (args.text is None):
        raise UsageError("exactly one of --lengths or --text is required")
    if args.lengths is not None:
        try:
            key = parse_length_key(args.lengths)
        except KbError as err:
            raise UsageError(str(err)) from None
        return [list(key)], None
    token_lines = []
    for line in args.text.splitlines():
        tokens = corpus.tokenize_text(line)
        if tokens:
            token_lines.append(tokens)
    if not token_lines:
        raise UsageError("--text contained no tokens")
    return [[len(t) for t in tokens] for tokens in token_lines], token_lines


def cmd_tag(args) -> int:
    sentences, _tokens = _tag_inputs(args)
    if args.server:
        import httpx

        response = httpx.post(f"{args.server.rstrip('/')}/tag",
                              json={"sentences": sentences, "mode": args.mode},
                              timeout=60)
        response.raise_for_status()
        for result in response.json()["results"]:
            if args.verbose:
                pairs = zip(result["tags"], result["sources"])
                print(" ".join(f"{t}/{s}" for t, s in pairs))
            else:
                print(" ".join(result["tags"]))
        return 0
    if not args.kb:
        raise UsageError("--kb is required unless --server is given")
    kb = KnowledgeBase.load(args.kb)
    cfg = TaggingConfig(mode=args.mode)
    for lengths in sentences:
        decisions = tag_sentence(kb, lengths, cfg)
        print(_decision_line(decisions, args.verbose))
    return 0


def cmd_eval(args) -> int:
    if args.server:
        import httpx

        corpus_text = Path(args.test).read_text(encoding="utf-8")
        response = httpx.post(f"{args.server.rstrip('/')}/eval",
                              json={"corpus": corpus_text, "mode": args.mode},
                              timeout=600)
        response.raise_for_status()
        text = json.dumps(response.json(), indent=2) + "\n"
    else:
        if not args.kb:
            raise UsageError("--kb is required unless --server is given")
        kb = KnowledgeBase.load(args.kb)
        report = evaluate(kb, corpus.read_flatfile(args.test),
                          TaggingConfig(mode=args.mode))
        text = report.to_json()
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(kb_path=args.kb)
    print(f"serving on {args.host}:{args.port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lenpos",
                     description="Part-of-speech tagging from word lengths")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="convert SUSANNE sources to a flatfile")
    p.add_argument("--input", required=True, help="directory of SUSANNE files")
    p.add_argument("--genres", required=True, help="comma-joined genre letters")
    p.add_argument("--mapping", default="default",
                   help="tag mapping TSV path, or 'default'")
    p.add_argument("--entities", default="default",
                   help="entity table TSV path, or 'default'")
    p.add_argument("--out", required=True, help="flatfile to write")
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="build a knowledge base from a flatfile")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-window", type=int, default=12)
    p.add_argument("--context", action="store_true",
                   help="also build the context index for multi-pass tagging")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("kb-stats", help="print knowledge base statistics")
    p.add_argument("kb", nargs="?", help="LKB file")
    p.add_argument("--server", help="query a running service instead")
    p.set_defaults(func=cmd_kb_stats)

    p = sub.add_parser("tag", help="tag one sentence or raw text")
    p.add_argument("--kb", help="LKB file")
    p.add_argument("--server", help="use a running service instead of --kb")
    p.add_argument("--lengths", help="colon-joined word lengths, e.g. 3:6:6:5:4")
    p.add_argument("--text", help="raw text; each non-empty line is a sentence")
    p.add_argument("--mode", choices=["single", "multi"], default="single")
    p.add_argument("--verbose", action="store_true",
                   help="append the decision source to every tag")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("eval", help="evaluate a knowledge base on a flatfile")
    p.add_argument("--kb", help="LKB file")
    p.add_argument("--server", help="use a running service instead of --kb")
    p.add_argument("--test", required=True, help="test flatfile with gold tags")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--mode", choices=["single", "multi"], default="single")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--kb", required=True, help="LKB file to serve")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except UsageError as err:
        print(f"lenpos: error: {err}", file=sys.stderr)
        return 1
    except (corpus.CorpusError, KbError, EvalError, UntrainedKbError,
            KnowledgeBaseContextError, ValueError) as err:
        print(f"lenpos: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"lenpos: {err}", file=sys.stderr)
        return 3
    except Exception as err:  # noqa: BLE001 - CLI boundary
        print(f"lenpos: unexpected error: {err}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
