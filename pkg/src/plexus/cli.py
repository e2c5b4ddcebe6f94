"""Command line entry points.

    plexus analyze --text <s> [--lexicon <path>]
        Score one text against the lexicon and print the result as a single
        JSON line with 6-decimal emotion values.

    plexus run --topic-a <s> --topic-b <s> --source replay|live --seed <n>
               [--corpus <path>] [--lexicon <path>] [--stylesheet <path>]
               [--listen <host:port>] [--headless --out <path>]
        Serve the session over HTTP/WebSocket, or with --headless run the
        replay to completion and write the event log as JSONL.

Exit codes: 0 success, 2 configuration/input errors, 3 bind failure.
"""
from __future__ import annotations

import argparse
import json
import socket
import sys
from typing import Optional

from .emotion import (
    Lexicon,
    LexiconError,
    default_lexicon,
    final_emotion,
    load_lexicon_file,
    score_text,
)
from .ingest import IngestError, TopicQuery
from .session import (
    SessionConfig,
    SessionConfigError,
    bundled_corpus_path,
    format_scores_json,
    run_headless,
)
from .style import StyleError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BIND = 3

CONFIG_ERRORS = (SessionConfigError, IngestError, LexiconError, StyleError, OSError)


def analyze_text_json(text: str, lexicon: Lexicon) -> str:
    """The `analyze` output line: status, language, scores, final label."""
    scores = score_text(text, lexicon)
    label = final_emotion(scores).value
    return (
        '{"status":"OK","language":"english","docEmotions":'
        + format_scores_json(scores)
        + ',"finalEmotion":'
        + json.dumps(label)
        + "}"
    )


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        lexicon = load_lexicon_file(args.lexicon) if args.lexicon else default_lexicon()
    except (LexiconError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(analyze_text_json(args.text, lexicon))
    return EXIT_OK


def _parse_listen(listen: str) -> tuple[str, int]:
    host, sep, port_text = listen.rpartition(":")
    if not sep or not host or not port_text.isdigit():
        raise SessionConfigError(f"--listen must be host:port, got {listen!r}")
    port = int(port_text)
    if not 0 < port < 65536:
        raise SessionConfigError(f"--listen port out of range: {port}")
    return host, port


def _config_from_args(args: argparse.Namespace) -> SessionConfig:
    corpus = args.corpus
    if args.source == "replay" and corpus is None:
        corpus = bundled_corpus_path()
    return SessionConfig(
        topic_a=TopicQuery("A", args.topic_a),
        topic_b=TopicQuery("B", args.topic_b),
        source=args.source,
        seed=args.seed,
        corpus_path=corpus,
        lexicon_path=args.lexicon,
        stylesheet_path=args.stylesheet,
    )


def _print_summary(summary: dict) -> None:
    print(f"session: {summary['session']}")
    print(f"ingested: {summary['ingested']}")
    skipped = summary["skipped"]
    print(f"skipped: A={skipped['A']} B={skipped['B']}")
    print(f"unmatched: {summary['unmatched']}")
    for topic_id in ("A", "B"):
        tally = summary["tallies"][topic_id]
        parts = " ".join(f"{emotion}={count}" for emotion, count in tally.items())
        print(f"{topic_id} tallies: {parts}")
    print(f"events: {summary['events']}")


def _cmd_run(args: argparse.Namespace) -> int:
    if args.headless and not args.out:
        print("error: --headless requires --out <path>", file=sys.stderr)
        return EXIT_CONFIG
    if args.out and not args.headless:
        print("error: --out only applies with --headless", file=sys.stderr)
        return EXIT_CONFIG

    try:
        config = _config_from_args(args)
        if args.headless:
            summary = run_headless(config, args.out)
            _print_summary(summary)
            return EXIT_OK
        host, port = _parse_listen(args.listen)
        from .httpapi import create_app

        app = create_app()
        session = app.state.start_session(config)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        print(f"error: cannot bind {args.listen}: {exc}", file=sys.stderr)
        sock.close()
        return EXIT_BIND

    import uvicorn

    print(f"session: {session.id}")
    print(f"listening on http://{host}:{port}")
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=port, log_level="warning"))
    server.run(sockets=[sock])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plexus",
        description="Two-topic tweet emotion graph: scoring, layout, serving.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="score one text and print JSON")
    analyze.add_argument("--text", required=True, help="text to score")
    analyze.add_argument("--lexicon", help="lexicon file (default: bundled)")

    run = sub.add_parser("run", help="run a two-topic session")
    run.add_argument("--topic-a", required=True, help="first topic phrase")
    run.add_argument("--topic-b", required=True, help="second topic phrase")
    run.add_argument("--source", required=True, choices=("replay", "live"))
    run.add_argument("--corpus", help="JSONL corpus for replay (default: bundled demo)")
    run.add_argument("--lexicon", help="lexicon file (default: bundled)")
    run.add_argument("--stylesheet", help="stylesheet file (default: built-in theme)")
    run.add_argument("--seed", required=True, type=int, help="layout RNG seed")
    run.add_argument("--listen", default="127.0.0.1:8000", help="host:port to serve on")
    run.add_argument("--headless", action="store_true",
                     help="run to completion and write the event log instead of serving")
    run.add_argument("--out", help="output path for the headless event log")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        return _cmd_analyze(args)
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
