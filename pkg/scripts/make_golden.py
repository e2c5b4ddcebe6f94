#!/usr/bin/env python3
"""Regenerate the golden fixtures (fixtures/golden/).

golden_log.jsonl      the full wire-event log of the reference run:
                      bundled demo corpus, topics "iPhone 7" / "Samsung S7",
                      seed 42 — exactly what `plexus run --headless` writes.
golden_snapshot.json  the snapshot endpoint's body after that run finished.
golden_detail.json    exact detail-endpoint responses for one tweet leaf
                      (lexicographically first), one emotion hub, and one
                      topic hub from the same run.

Clients fold the log and must land on this snapshot; server changes that
alter any of these files are behavior changes and should be deliberate.
"""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from plexus.ingest import TopicQuery  # noqa: E402
from plexus.session import Session, SessionConfig, bundled_corpus_path, wire_event_text  # noqa: E402

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "golden"


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    config = SessionConfig(
        topic_a=TopicQuery("A", "iPhone 7"),
        topic_b=TopicQuery("B", "Samsung S7"),
        source="replay",
        seed=42,
        corpus_path=bundled_corpus_path(),
    )
    session = Session(config)
    session.run_to_completion()

    log_text = "\n".join(wire_event_text(session.id, event) for event in session.log)
    with open(GOLDEN / "golden_log.jsonl", "w", encoding="utf-8", newline="") as handle:
        handle.write(log_text)

    snapshot = session.snapshot_json()
    with open(GOLDEN / "golden_snapshot.json", "w", encoding="utf-8", newline="") as handle:
        json.dump(snapshot, handle, indent=1, ensure_ascii=False)
        handle.write("\n")

    first_leaf = min(n["id"] for n in snapshot["nodes"] if n["kind"] == "tweet")
    details = {
        kind: {"node_id": node_id, "raw": session.node_detail_json(node_id)}
        for kind, node_id in (
            ("tweet", first_leaf), ("emotion", "A:joy"), ("topic", "topic:A"))
    }
    with open(GOLDEN / "golden_detail.json", "w", encoding="utf-8", newline="") as handle:
        json.dump(details, handle, indent=1, ensure_ascii=False)
        handle.write("\n")

    print(f"wrote {len(session.log)} events, snapshot (last_seq={snapshot['last_seq']}), "
          f"and details for {first_leaf}")


if __name__ == "__main__":
    main()
