"""Acceptance gate: one test per shipping criterion, one printed verdict each.

Run with `pytest -v -s tests/test_acceptance.py` to see the verdict lines
inline; without -s they appear in each test's captured stdout.

Expected values here come from independent oracles (brute-force rescoring,
hand-counted topology, committed fixture annotations), never from the code
under test.
"""
import functools
import json
import math
import random
import re
import time
from pathlib import Path

import pytest

from plexus.cli import main as cli_main
from plexus.emotion import (
    EMOTION_LABELS,
    EmotionLabel,
    EmotionScores,
    final_emotion,
    load_lexicon,
    score_text,
)
from plexus.graph import (
    EdgeAdded,
    EdgeRemoved,
    GraphEvent,
    GraphSnapshot,
    NodeAdded,
    NodeKind,
    PositionsChanged,
    apply_event,
    edge_id,
    event_from_json,
    fold_events,
    snapshot_to_json,
)
from plexus.ingest import TopicQuery
from plexus.layout import LayoutParams, LayoutState, place_new_node, spring_length, step
from plexus.session import Session, SessionConfig, bundled_corpus_path
from plexus.style import parse_stylesheet, print_stylesheet, resolve_style, StyleParseError

FIXTURES = Path(__file__).parent.parent / "fixtures"


def criterion(name):
    """Print one ACCEPTANCE <name>: PASS/FAIL line per criterion."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE {name}: FAIL", flush=True)
                raise
            print(f"\nACCEPTANCE {name}: PASS", flush=True)
            return result
        return run
    return wrap


# ---------------------------------------------------------------------------
# shared headless run (criteria: determinism, topology, fold identity)


@pytest.fixture(scope="module")
def headless_cli(tmp_path_factory):
    """Two CLI headless runs of the bundled corpus with seed 42."""
    base = tmp_path_factory.mktemp("accept")
    argv_for = lambda out: [
        "run", "--topic-a", "iPhone 7", "--topic-b", "Samsung S7",
        "--source", "replay", "--seed", "42", "--headless", "--out", str(out),
    ]
    durations = []
    outs = [base / "run1.jsonl", base / "run2.jsonl"]
    for out in outs:
        started = time.perf_counter()
        code = cli_main(argv_for(out))
        durations.append(time.perf_counter() - started)
        assert code == 0
    return {
        "bytes": [out.read_bytes() for out in outs],
        "durations": durations,
        "frames": [json.loads(line)
                   for line in outs[0].read_text("utf-8").split("\n")],
    }


def fold_frames(frames):
    return fold_events(event_from_json(frame) for frame in frames)


# ---------------------------------------------------------------------------
# criterion: scorer argmax on the reference score vector


class TestScorerArgmax:
    @criterion("scorer-argmax")
    def test_reference_vector_resolves_to_joy(self):
        scores = EmotionScores(anger=0.010794, disgust=0.001457, fear=0.005759,
                               joy=0.734579, sadness=0.32045)
        assert final_emotion(scores) is EmotionLabel.JOY


# ---------------------------------------------------------------------------
# criterion: scorer vs brute-force oracle on 1,000 randomized texts


TOY_LEXICON_TEXT = """\
happy\tjoy:0.8
party\tjoy:0.3,disgust:0.1
furious\tanger:0.9
mad\tanger:0.6,sadness:0.2
dread\tfear:0.7
creepy\tfear:0.4,disgust:0.5
gross\tdisgust:0.8
bleak\tsadness:0.6
tearful\tsadness:0.9,fear:0.1
#blessed\tjoy:1.0
meh\tdisgust:0.2
!negator\tnot
!negator\tnever
!negator\thardly
"""

ORACLE_WEIGHTS = {
    "happy": {"joy": 0.8},
    "party": {"joy": 0.3, "disgust": 0.1},
    "furious": {"anger": 0.9},
    "mad": {"anger": 0.6, "sadness": 0.2},
    "dread": {"fear": 0.7},
    "creepy": {"fear": 0.4, "disgust": 0.5},
    "gross": {"disgust": 0.8},
    "bleak": {"sadness": 0.6},
    "tearful": {"sadness": 0.9, "fear": 0.1},
    "#blessed": {"joy": 1.0},
    "meh": {"disgust": 0.2},
}
ORACLE_NEGATORS = {"not", "never", "hardly"}


def oracle_score(text):
    """Brute-force rescoring, written against the scoring rules directly.

    Tokens are whitespace-split words with surrounding punctuation stripped
    and lowercased (the generator below only produces shapes where that
    agrees with the real tokenizer). A match is dropped when either of the
    two preceding tokens is a negator; each surviving match multiplies the
    per-emotion miss probability.
    """
    tokens = [word.strip(".,!?…").lower() for word in text.split()]
    tokens = [t for t in tokens if t]
    miss = {label.value: 1.0 for label in EMOTION_LABELS}
    for i, token in enumerate(tokens):
        weights = ORACLE_WEIGHTS.get(token)
        if weights is None:
            continue
        if (i >= 1 and tokens[i - 1] in ORACLE_NEGATORS) or \
           (i >= 2 and tokens[i - 2] in ORACLE_NEGATORS):
            continue
        for emotion, w in weights.items():
            miss[emotion] = miss[emotion] * (1.0 - w)
    return {label.value: 1.0 - miss[label.value] for label in EMOTION_LABELS}


def random_texts(n, seed=1234):
    rng = random.Random(seed)
    words = list(ORACLE_WEIGHTS)
    cased = words + [w.upper() for w in words] + [w.capitalize() for w in words]
    negators = ["not", "never", "hardly", "NOT", "Never"]
    fillers = ["the", "a", "it", "today", "window", "again", "so", "very"]
    punct = ["", "", "!", "!!", ",", "...", "?"]
    texts = ["", "   ", "window the again"]
    while len(texts) < n:
        length = rng.randint(0, 25)
        parts = []
        for _ in range(length):
            roll = rng.random()
            if roll < 0.45:
                word = rng.choice(cased)
            elif roll < 0.65:
                word = rng.choice(negators)
            else:
                word = rng.choice(fillers)
            parts.append(word + rng.choice(punct))
        texts.append(" ".join(parts))
    return texts


class TestScorerOracle:
    @criterion("scorer-oracle")
    def test_thousand_texts_bit_for_bit(self):
        lexicon = load_lexicon(TOY_LEXICON_TEXT, name="toy")
        texts = random_texts(1000)
        assert len(texts) == 1000
        for text in texts:
            got = score_text(text, lexicon).as_dict()
            want = oracle_score(text)
            assert got == want, f"mismatch on {text!r}: {got} != {want}"
            for value in got.values():
                assert 0.0 <= value <= 1.0

        # monotonicity: appending a scoring word (outside any negation
        # window) never lowers any emotion, and lifts the word's emotions
        # onto the exact noisy-OR composition.
        rng = random.Random(99)
        for _ in range(300):
            base = rng.choice(texts)
            word = rng.choice(list(ORACLE_WEIGHTS))
            extended = base + " window window " + word
            before = score_text(base, lexicon)
            after = score_text(extended, lexicon)
            for label in EMOTION_LABELS:
                assert after[label] >= before[label]
            for emotion, w in ORACLE_WEIGHTS[word].items():
                label = EmotionLabel(emotion)
                predicted = 1.0 - (1.0 - before[label]) * (1.0 - w)
                assert math.isclose(after[label], predicted, rel_tol=1e-12, abs_tol=1e-12)


# ---------------------------------------------------------------------------
# criterion: headless determinism on the bundled corpus


class TestHeadlessDeterminism:
    @criterion("headless-determinism")
    def test_two_runs_byte_identical_under_10s(self, headless_cli):
        first, second = headless_cli["bytes"]
        assert first == second
        assert len(first) > 0 and not first.endswith(b"\n")
        for duration in headless_cli["durations"]:
            assert duration < 10.0, f"headless run took {duration:.2f}s"


# ---------------------------------------------------------------------------
# criterion: topology arithmetic from the folded log


class TestTopologyArithmetic:
    @criterion("topology-arithmetic")
    def test_folded_log_satisfies_counting_rules(self, headless_cli):
        frames = headless_cli["frames"]
        snapshot = fold_frames(frames)

        leaves = {nid: node for nid, node in snapshot.nodes.items()
                  if node.kind is NodeKind.TWEET}
        hubs = {nid: node for nid, node in snapshot.nodes.items()
                if node.kind is NodeKind.EMOTION}
        assert len(snapshot.nodes) == 12 + len(leaves)
        assert len(hubs) == 10

        # every live leaf: exactly one incident edge, to its own topic's hub
        # for its labeled emotion
        incident = {}
        for edge in snapshot.edges.values():
            for endpoint in (edge.source, edge.target):
                incident.setdefault(endpoint, []).append(edge)
        for leaf_id, leaf in leaves.items():
            edges = incident.get(leaf_id, [])
            assert len(edges) == 1, f"{leaf_id} has {len(edges)} edges"
            topic_id = leaf_id.split(":")[1]
            assert edges[0].source == leaf_id
            assert edges[0].target == f"{topic_id}:{leaf.label}"
            assert list(leaf.classes) == [leaf.label]

        # hub totals: total_count == attach events == live + evicted
        attached = {hub: 0 for hub in hubs}
        evicted = {hub: 0 for hub in hubs}
        for frame in frames:
            event = event_from_json(frame)
            payload = event.payload
            if isinstance(payload, EdgeAdded) and payload.target in hubs \
                    and payload.source.startswith("t:"):
                attached[payload.target] += 1
            elif isinstance(payload, EdgeRemoved):
                target = payload.edge_id.split("--")[-1]
                if target in hubs:
                    evicted[target] += 1
        for hub_id, hub in hubs.items():
            live = len(snapshot.hub_leaves.get(hub_id, ()))
            assert hub.attrs["total_count"] == attached[hub_id]
            assert hub.attrs["total_count"] == live + evicted[hub_id]
            assert live <= 50


# ---------------------------------------------------------------------------
# criterion: layout convergence and finiteness


def assert_all_finite(state):
    for node_id, (x, y) in state.positions.items():
        assert math.isfinite(x) and math.isfinite(y), f"non-finite at {node_id}"


class TestLayoutConvergence:
    @criterion("layout-convergence")
    def test_pair_corpus_and_finiteness(self, headless_cli):
        from plexus.graph import GraphNode

        # isolated connected pair: separation within 0.1% of k in <= 500 steps
        pair_snapshot = fold_events([
            GraphEvent(0, NodeAdded(GraphNode("p:a", NodeKind.TOPIC, "a", (), {}))),
            GraphEvent(1, NodeAdded(GraphNode("p:b", NodeKind.TOPIC, "b", (), {}))),
            GraphEvent(2, EdgeAdded(edge_id("p:a", "p:b"), "p:a", "p:b")),
        ])
        params = LayoutParams(seed=7)
        state = LayoutState(params)
        place_new_node(state, "p:a")
        place_new_node(state, "p:b")
        for _ in range(500):
            state, _ = step(state, pair_snapshot, params)
            assert_all_finite(state)
        (ax, ay), (bx, by) = state.positions["p:a"], state.positions["p:b"]
        separation = math.hypot(ax - bx, ay - by)
        k = spring_length(params, 2)
        assert abs(separation - k) / k <= 0.001, f"pair separation {separation} vs k {k}"

        # full corpus graph: max displacement < eps within 2,000 sweeps
        snapshot = fold_frames(headless_cli["frames"])
        params = LayoutParams(seed=0)
        state = LayoutState(params)
        for node_id in sorted(snapshot.nodes):
            place_new_node(state, node_id)
        converged_at = None
        for iteration in range(1, 2001):
            state, max_disp = step(state, snapshot, params)
            assert_all_finite(state)
            if max_disp < params.eps:
                converged_at = iteration
                break
        assert converged_at is not None, "corpus layout did not settle in 2000 sweeps"

        # the recorded trace itself is NaN-free too
        for frame in headless_cli["frames"]:
            if frame["event"]["type"] == "positions":
                for x, y in frame["event"]["positions"].values():
                    assert math.isfinite(x) and math.isfinite(y)


# ---------------------------------------------------------------------------
# criterion: stylesheet corpus, cascade table, round-trip


class TestStylesheetConformance:
    @criterion("stylesheet-conformance")
    def test_corpus_cascade_and_round_trip(self):
        manifest = json.loads(
            (FIXTURES / "stylesheets" / "manifest.json").read_text("utf-8"))
        assert len(manifest["valid"]) >= 20
        assert len(manifest["malformed"]) >= 10

        for name, meta in manifest["valid"].items():
            source = (FIXTURES / "stylesheets" / "valid" / name).read_text("utf-8")
            rules = parse_stylesheet(source)
            assert len(rules) == meta["rules"], name
            assert parse_stylesheet(print_stylesheet(rules)) == rules, name

        for name, meta in manifest["malformed"].items():
            source = (FIXTURES / "stylesheets" / "malformed" / name).read_text("utf-8")
            with pytest.raises(StyleParseError) as excinfo:
                parse_stylesheet(source)
            err = excinfo.value
            assert (err.line, err.col) == (meta["line"], meta["col"]), name
            assert meta["expected"] in str(err), name

        cascade = json.loads(
            (FIXTURES / "cascade_conformance.json").read_text("utf-8"))
        assert len(cascade["cases"]) == 30
        for case in cascade["cases"]:
            rules = parse_stylesheet(case["css"])
            resolved = resolve_style(rules, case["element"],
                                     classes=tuple(case["classes"]),
                                     clicked=case["clicked"])
            assert resolved.as_dict() == case["expected"], case["name"]


# ---------------------------------------------------------------------------
# criterion: event-sourcing fold identity


class TestFoldIdentity:
    @criterion("event-fold-identity")
    def test_fold_reproduces_server_snapshot(self, headless_cli):
        frames = headless_cli["frames"]
        events = [event_from_json(frame) for frame in frames]

        # the server's own final snapshot, recomputed in-process
        config = SessionConfig(
            topic_a=TopicQuery("A", "iPhone 7"),
            topic_b=TopicQuery("B", "Samsung S7"),
            source="replay", seed=42, corpus_path=bundled_corpus_path())
        session = Session(config)
        session.run_to_completion()

        folded = fold_events(events)
        assert folded == session.snapshot
        assert folded.last_seq == events[-1].seq

        # resuming from any prefix lands on the same final state
        rng = random.Random(2026)
        for cut in sorted(rng.sample(range(1, len(events)), 10)):
            prefix = fold_events(events[:cut])
            assert prefix.last_seq == events[cut - 1].seq
            resumed = fold_events(events[cut:], base=prefix)
            assert resumed == folded

        # and the committed snapshot fixture agrees with the folded log
        golden = json.loads(
            (FIXTURES / "golden" / "golden_snapshot.json").read_text("utf-8"))
        body = snapshot_to_json(folded)
        for key in ("last_seq", "nodes", "edges", "positions"):
            assert body[key] == golden[key], key
