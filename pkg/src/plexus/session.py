"""Session orchestration: ingest -> score -> graph -> layout, one writer.

A session owns the event log for one topic pair. Every tick pulls a batch,
scores and attaches matched tweets, runs one layout sweep, and appends a
positions event. The authoritative snapshot is maintained strictly by
folding the emitted events, so log replays are equal to live state by
construction.

Determinism: the session id is a hash of the config, the layout RNG is
seeded from the config seed, and nothing in the tick path depends on wall
time — two headless runs of the same config produce byte-identical logs.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .emotion import (
    EMOTION_LABELS,
    EmotionScores,
    Lexicon,
    default_lexicon,
    load_lexicon_file,
    score_text,
)
from .graph import (
    EdgeAdded,
    GraphEvent,
    GraphSnapshot,
    NodeAdded,
    NodeKind,
    NodeRemoved,
    PositionsChanged,
    apply_event,
    fold_events,
    ingest_tweet,
    init_session_graph,
    payload_to_json,
    snapshot_to_json,
)
from .ingest import (
    AuthError,
    BEARER_TOKEN_ENV,
    LiveSource,
    RateLimitedError,
    ReplaySource,
    TopicQuery,
    Tweet,
    match_topic,
    validate_topic_pair,
)
from .layout import (
    LayoutParams,
    LayoutState,
    place_new_node,
    remove_node,
    step,
)
from .style import StyleRule, default_theme, load_stylesheet_file, print_stylesheet

DEFAULT_BATCH_SIZE = 10


class SessionError(Exception):
    pass


class SessionConfigError(SessionError):
    """Rejected configuration: bad topics, missing files, missing credentials."""


class SessionNotFound(SessionError):
    pass


class NodeNotFound(SessionError):
    pass


@dataclass(frozen=True)
class SessionConfig:
    topic_a: TopicQuery
    topic_b: TopicQuery
    source: str  # "replay" | "live"
    seed: int
    corpus_path: Optional[str] = None
    lexicon_path: Optional[str] = None
    stylesheet_path: Optional[str] = None
    tick_interval: float = 1.0
    layout: Optional[LayoutParams] = None

    def validate(self) -> None:
        try:
            validate_topic_pair(self.topic_a, self.topic_b)
        except Exception as exc:
            raise SessionConfigError(str(exc)) from None
        if self.source not in ("replay", "live"):
            raise SessionConfigError(f"source must be 'replay' or 'live', got {self.source!r}")
        if self.source == "replay":
            if not self.corpus_path:
                raise SessionConfigError("replay source requires a corpus path")
            if not os.path.exists(self.corpus_path):
                raise SessionConfigError(f"corpus file not found: {self.corpus_path}")
        for label, path in (("lexicon", self.lexicon_path), ("stylesheet", self.stylesheet_path)):
            if path and not os.path.exists(path):
                raise SessionConfigError(f"{label} file not found: {path}")
        if not 0 <= self.seed < 2 ** 64:
            raise SessionConfigError("seed must fit in 64 bits")
        if self.tick_interval <= 0:
            raise SessionConfigError("tick interval must be positive")

    def layout_params(self) -> LayoutParams:
        base = self.layout if self.layout is not None else LayoutParams()
        return replace(base, seed=self.seed)

    def canonical(self) -> dict[str, Any]:
        def topic(q: TopicQuery) -> dict[str, Any]:
            return {"topic_id": q.topic_id, "phrase": q.phrase,
                    "language": q.language, "exclude_retweets": q.exclude_retweets}

        params = self.layout_params()
        return {
            "topic_a": topic(self.topic_a),
            "topic_b": topic(self.topic_b),
            "source": self.source,
            "seed": self.seed,
            "corpus": self.corpus_path,
            "lexicon": self.lexicon_path,
            "stylesheet": self.stylesheet_path,
            "tick_interval": self.tick_interval,
            "layout": {"L": params.L, "C": params.C, "t0": params.t0,
                       "cooling": params.cooling, "eps": params.eps,
                       "max_iters": params.max_iters},
        }


def bundled_corpus_path() -> str:
    """Filesystem path of the 200-tweet demo corpus shipped with the package."""
    from importlib.resources import files

    return str(files("plexus.data").joinpath("demo_corpus.jsonl"))


def session_id_for(config: SessionConfig) -> str:
    digest = hashlib.sha1(
        json.dumps(config.canonical(), sort_keys=True).encode("utf-8")
    ).hexdigest()
    return f"s-{digest[:12]}"


def format_scores_json(scores: EmotionScores) -> str:
    """docEmotions object with fixed 6-decimal numbers, canonical key order.

    json.dumps would collapse 0.800000 to 0.8, so this is built by hand."""
    body = ",".join(
        f'"{label.value}":{scores[label]:.6f}' for label in EMOTION_LABELS
    )
    return "{" + body + "}"


def wire_event_json(session_id: str, event: GraphEvent) -> dict[str, Any]:
    return {"seq": event.seq, "session": session_id, "event": payload_to_json(event.payload)}


def wire_event_text(session_id: str, event: GraphEvent) -> str:
    return json.dumps(wire_event_json(session_id, event),
                      separators=(",", ":"), ensure_ascii=False)


class Session:
    """Single-writer pipeline state; tick() is the only mutator."""

    def __init__(self, config: SessionConfig, session_id: Optional[str] = None,
                 bearer_token: Optional[str] = None):
        config.validate()
        self.config = config
        self.id = session_id or session_id_for(config)
        self.lexicon: Lexicon = (
            load_lexicon_file(config.lexicon_path) if config.lexicon_path else default_lexicon()
        )
        self.style_rules: list[StyleRule] = (
            load_stylesheet_file(config.stylesheet_path)
            if config.stylesheet_path else default_theme()
        )
        self.layout_params = config.layout_params()

        if config.source == "replay":
            self._replay = ReplaySource(config.corpus_path, DEFAULT_BATCH_SIZE)
            self._live_sources = None
        else:
            token = bearer_token or os.environ.get(BEARER_TOKEN_ENV)
            if not token:
                raise SessionConfigError(
                    f"live source requires credentials in ${BEARER_TOKEN_ENV}")
            self._replay = None
            self._live_sources = {
                "A": LiveSource(config.topic_a, token, DEFAULT_BATCH_SIZE),
                "B": LiveSource(config.topic_b, token, DEFAULT_BATCH_SIZE),
            }

        # Guards tick() against concurrent readers in the HTTP layer. The
        # log itself is append-only and safe to index without it.
        self.lock = threading.Lock()

        self.log: list[GraphEvent] = []
        self.snapshot: GraphSnapshot = GraphSnapshot()
        self.layout_state = LayoutState(self.layout_params)
        self.store: dict[tuple[str, str], tuple[Tweet, EmotionScores]] = {}
        self.seen: set[tuple[str, str]] = set()
        self.skipped = {"A": 0, "B": 0}
        self.unmatched = 0
        self.ingested = 0
        self.drained = False
        self.stable = False
        self.error: Optional[str] = None
        self._rate_limited_until = 0.0

        self._append_batch(init_session_graph(config.topic_a, config.topic_b))

    # -- internals ------------------------------------------------------

    def _append_batch(self, events: list[GraphEvent]) -> None:
        """Fold events into the snapshot, mirror placements into the layout."""
        batch_edges = [e.payload for e in events if isinstance(e.payload, EdgeAdded)]
        for event in events:
            payload = event.payload
            if isinstance(payload, NodeAdded):
                neighbor = None
                for edge in batch_edges:
                    if edge.source == payload.node.id and edge.target in self.layout_state.positions:
                        neighbor = edge.target
                        break
                    if edge.target == payload.node.id and edge.source in self.layout_state.positions:
                        neighbor = edge.source
                        break
                place_new_node(self.layout_state, payload.node.id, neighbor)
            elif isinstance(payload, NodeRemoved):
                remove_node(self.layout_state, payload.node_id)
            self.snapshot = apply_event(self.snapshot, event)
        self.log.extend(events)

    def _pull_pairs(self) -> list[tuple[Tweet, str]]:
        pairs: list[tuple[Tweet, str]] = []
        if self._replay is not None:
            batch = self._replay.next_batch()
            for tweet in batch:
                matched = sorted(match_topic(tweet, self.config.topic_a, self.config.topic_b))
                if not matched:
                    self.unmatched += 1
                for topic_id in matched:
                    pairs.append((tweet, topic_id))
            if self._replay.exhausted:
                self.drained = True
        else:
            for topic_id in ("A", "B"):
                for tweet in self._live_sources[topic_id].next_batch():
                    pairs.append((tweet, topic_id))
        return pairs

    # -- public surface ---------------------------------------------------

    @property
    def finished(self) -> bool:
        return (self.drained and self.stable) or self.error is not None

    def tick(self) -> list[GraphEvent]:
        """One pipeline beat; returns the events emitted (already in the log)."""
        if self.finished:
            return []
        emitted: list[GraphEvent] = []
        now = time.monotonic()
        if not self.drained and now >= self._rate_limited_until:
            try:
                pairs = self._pull_pairs()
            except RateLimitedError as err:
                self._rate_limited_until = time.monotonic() + err.retry_after
                pairs = []
            except AuthError as err:
                self.error = str(err)
                return []
            for tweet, topic_id in pairs:
                key = (topic_id, tweet.id)
                if key in self.seen:
                    continue
                self.seen.add(key)
                scores = score_text(tweet.text, self.lexicon)
                if scores.is_zero():
                    self.skipped[topic_id] += 1
                    continue
                events = ingest_tweet(self.snapshot, tweet, topic_id, scores)
                self._append_batch(events)
                self.store[key] = (tweet, scores)
                self.ingested += 1
                emitted.extend(events)

        self.layout_state, max_disp = step(self.layout_state, self.snapshot, self.layout_params)
        # Recomputed every tick rather than latched: a quiet sweep mid-run
        # does not mean converged if later ticks add nodes.
        self.stable = max_disp < self.layout_params.eps
        rounded = {
            node_id: (round(x, 3), round(y, 3))
            for node_id, (x, y) in sorted(self.layout_state.positions.items())
        }
        positions_event = GraphEvent(self.snapshot.last_seq + 1, PositionsChanged(rounded))
        self.snapshot = apply_event(self.snapshot, positions_event)
        self.log.append(positions_event)
        emitted.append(positions_event)
        return emitted

    def run_to_completion(self) -> None:
        while not self.finished:
            self.tick()

    def snapshot_json(self) -> dict[str, Any]:
        body = snapshot_to_json(self.snapshot)
        body["session"] = self.id
        body["stylesheet"] = print_stylesheet(self.style_rules)
        return body

    def node_detail_json(self, node_id: str) -> str:
        """Detail record as exact JSON text (docEmotions needs 6-decimal
        number formatting that a plain serializer would normalize away)."""
        node = self.snapshot.nodes.get(node_id)
        if node is None:
            raise NodeNotFound(node_id)
        if node.kind is NodeKind.TWEET:
            topic_id = node_id.split(":")[1]
            tweet, scores = self.store[(topic_id, node.attrs["tweet_id"])]
            created = tweet.created_at.isoformat().replace("+00:00", "Z")
            fields = [
                f'"id":{json.dumps(node_id)}',
                '"kind":"tweet"',
                f'"label":{json.dumps(node.label)}',
                f'"text":{json.dumps(tweet.text, ensure_ascii=False)}',
                f'"author":{json.dumps(tweet.author, ensure_ascii=False)}',
                f'"created_at":{json.dumps(created)}',
                f'"docEmotions":{format_scores_json(scores)}',
                f'"finalEmotion":{json.dumps(node.label)}',
            ]
            return "{" + ",".join(fields) + "}"
        if node.kind is NodeKind.EMOTION:
            topic_id, emotion = node_id.split(":")
            return json.dumps({
                "id": node_id,
                "kind": "emotion",
                "emotion": emotion,
                "total_count": node.attrs["total_count"],
                "live_count": len(self.snapshot.hub_leaves.get(node_id, ())),
            }, separators=(",", ":"), ensure_ascii=False)
        return json.dumps({
            "id": node_id,
            "kind": "topic",
            "phrase": node.label,
            "skipped": self.skipped[node_id.split(":")[1]],
        }, separators=(",", ":"), ensure_ascii=False)

    def summary(self) -> dict[str, Any]:
        tallies = {}
        for topic_id in ("A", "B"):
            tallies[topic_id] = {
                label.value: self.snapshot.nodes[f"{topic_id}:{label.value}"].attrs["total_count"]
                for label in EMOTION_LABELS
            }
        return {
            "session": self.id,
            "ingested": self.ingested,
            "skipped": {"A": self.skipped["A"], "B": self.skipped["B"]},
            "unmatched": self.unmatched,
            "tallies": tallies,
            "events": len(self.log),
        }


class SessionRegistry:
    """In-process session book; ids are content hashes with collision suffixes."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}

    def create(self, config: SessionConfig, bearer_token: Optional[str] = None) -> Session:
        base = session_id_for(config)
        session_id = base
        n = 1
        while session_id in self._sessions:
            n += 1
            session_id = f"{base}-{n}"
        session = Session(config, session_id=session_id, bearer_token=bearer_token)
        self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFound(session_id) from None

    def ids(self) -> list[str]:
        return list(self._sessions)


def run_headless(config: SessionConfig, out_path: str) -> dict[str, Any]:
    """Replay to drain + layout convergence; write the log; return summary."""
    if config.source != "replay":
        raise SessionConfigError("headless mode requires the replay source")
    session = Session(config)
    session.run_to_completion()
    lines = [wire_event_text(session.id, event) for event in session.log]
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines))
    return session.summary()
