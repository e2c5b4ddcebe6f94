"""Event-sourced dynamic graph.

Topology is a fixed three-tier scheme: two topic hubs, five emotion hubs per
topic, and tweet leaves capped at 50 per hub (FIFO eviction). All mutation is
expressed as a gap-free sequence of events; a snapshot is the left-fold of
the log, and that identity is the module's core correctness contract.

Log / wire encoding for one event: ``{"seq": n, "event": {"type": ..., ...}}``
(JSONL, one per line).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Optional, Union

from .emotion import EMOTION_LABELS, EmotionScores, final_emotion
from .ingest import Tweet, TopicQuery, validate_topic_pair

LEAF_CAP = 50
TOPIC_IDS = ("A", "B")


class GraphError(Exception):
    pass


class OrderingError(GraphError):
    """Event seq does not follow the snapshot's last_seq."""


class IntegrityError(GraphError):
    """Event references an unknown id or re-introduces an existing one."""


class NodeKind(str, Enum):
    TOPIC = "topic"
    EMOTION = "emotion"
    TWEET = "tweet"


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: NodeKind
    label: str
    classes: tuple[str, ...] = ()
    attrs: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class GraphEdge:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class NodeAdded:
    node: GraphNode


@dataclass(frozen=True)
class EdgeAdded:
    edge_id: str
    source: str
    target: str


@dataclass(frozen=True)
class AttrChanged:
    node_id: str
    key: str
    value: Any


@dataclass(frozen=True)
class NodeRemoved:
    node_id: str


@dataclass(frozen=True)
class EdgeRemoved:
    edge_id: str


@dataclass(frozen=True)
class PositionsChanged:
    positions: dict[str, tuple[float, float]]


Payload = Union[NodeAdded, EdgeAdded, AttrChanged, NodeRemoved, EdgeRemoved, PositionsChanged]


@dataclass(frozen=True)
class GraphEvent:
    seq: int
    payload: Payload


@dataclass(frozen=True)
class GraphSnapshot:
    """Immutable fold state. hub_leaves tracks live leaves per emotion hub in
    arrival order (the FIFO used for eviction) and is itself derived from the
    event stream, so the fold identity covers it."""

    nodes: dict[str, GraphNode] = field(default_factory=dict)
    edges: dict[str, GraphEdge] = field(default_factory=dict)
    positions: dict[str, tuple[float, float]] = field(default_factory=dict)
    hub_leaves: dict[str, tuple[str, ...]] = field(default_factory=dict)
    last_seq: int = -1


EMPTY_SNAPSHOT = GraphSnapshot()


def topic_node_id(topic_id: str) -> str:
    return f"topic:{topic_id}"


def emotion_node_id(topic_id: str, emotion: str) -> str:
    return f"{topic_id}:{emotion}"


def tweet_node_id(topic_id: str, tweet_id: str) -> str:
    return f"t:{topic_id}:{tweet_id}"


def edge_id(source: str, target: str) -> str:
    return f"e:{source}--{target}"


def init_session_graph(a: TopicQuery, b: TopicQuery) -> list[GraphEvent]:
    """Seed events for a fresh session: 12 nodes then 10 edges, seq 0..21."""
    validate_topic_pair(a, b)
    payloads: list[Payload] = []
    for query in (a, b):
        payloads.append(NodeAdded(GraphNode(
            id=topic_node_id(query.topic_id),
            kind=NodeKind.TOPIC,
            label=query.phrase.strip(),
            classes=("topic",),
        )))
    for query in (a, b):
        for emotion in EMOTION_LABELS:
            payloads.append(NodeAdded(GraphNode(
                id=emotion_node_id(query.topic_id, emotion.value),
                kind=NodeKind.EMOTION,
                label=emotion.value,
                classes=("hub", emotion.value),
                attrs={"total_count": 0},
            )))
    for query in (a, b):
        hub = topic_node_id(query.topic_id)
        for emotion in EMOTION_LABELS:
            target = emotion_node_id(query.topic_id, emotion.value)
            payloads.append(EdgeAdded(edge_id(hub, target), hub, target))
    return [GraphEvent(seq, payload) for seq, payload in enumerate(payloads)]


def ingest_tweet(
    snapshot: GraphSnapshot,
    tweet: Tweet,
    topic_id: str,
    scores: EmotionScores,
) -> list[GraphEvent]:
    """Events for one scored tweet: leaf + edge + hub tally, plus FIFO
    eviction once the hub holds more than LEAF_CAP leaves. All-zero scores
    produce no events (the caller tracks its own skip counter)."""
    if topic_id not in TOPIC_IDS:
        raise IntegrityError(f"unknown topic id {topic_id!r}")
    if topic_node_id(topic_id) not in snapshot.nodes:
        raise IntegrityError(f"graph not initialized for topic {topic_id!r}")
    if scores.is_zero():
        return []
    label = final_emotion(scores).value
    hub_id = emotion_node_id(topic_id, label)
    leaf_id = tweet_node_id(topic_id, tweet.id)
    if leaf_id in snapshot.nodes:
        raise IntegrityError(f"duplicate tweet node {leaf_id!r}")
    hub = snapshot.nodes[hub_id]
    payloads: list[Payload] = [
        NodeAdded(GraphNode(
            id=leaf_id,
            kind=NodeKind.TWEET,
            label=label,
            classes=(label,),
            attrs={"tweet_id": tweet.id},
        )),
        EdgeAdded(edge_id(leaf_id, hub_id), leaf_id, hub_id),
        AttrChanged(hub_id, "total_count", hub.attrs["total_count"] + 1),
    ]
    live = snapshot.hub_leaves.get(hub_id, ())
    if len(live) + 1 > LEAF_CAP:
        oldest = live[0]
        payloads.append(NodeRemoved(oldest))
        payloads.append(EdgeRemoved(edge_id(oldest, hub_id)))
    first = snapshot.last_seq + 1
    return [GraphEvent(first + i, payload) for i, payload in enumerate(payloads)]


def apply_event(snapshot: GraphSnapshot, event: GraphEvent) -> GraphSnapshot:
    """Pure fold step; validates seq continuity and id integrity."""
    if event.seq != snapshot.last_seq + 1:
        raise OrderingError(
            f"event seq {event.seq} does not follow last_seq {snapshot.last_seq}"
        )
    nodes = snapshot.nodes
    edges = snapshot.edges
    positions = snapshot.positions
    hub_leaves = snapshot.hub_leaves
    payload = event.payload

    if isinstance(payload, NodeAdded):
        node = payload.node
        if node.id in nodes:
            raise IntegrityError(f"node {node.id!r} already exists")
        nodes = {**nodes, node.id: node}
    elif isinstance(payload, EdgeAdded):
        if payload.edge_id in edges:
            raise IntegrityError(f"edge {payload.edge_id!r} already exists")
        for endpoint in (payload.source, payload.target):
            if endpoint not in nodes:
                raise IntegrityError(f"edge endpoint {endpoint!r} does not exist")
        edges = {**edges, payload.edge_id: GraphEdge(payload.edge_id, payload.source, payload.target)}
        source = nodes[payload.source]
        target = nodes[payload.target]
        if source.kind is NodeKind.TWEET and target.kind is NodeKind.EMOTION:
            hub_leaves = {**hub_leaves,
                          payload.target: hub_leaves.get(payload.target, ()) + (payload.source,)}
    elif isinstance(payload, AttrChanged):
        if payload.node_id not in nodes:
            raise IntegrityError(f"attr change for unknown node {payload.node_id!r}")
        node = nodes[payload.node_id]
        nodes = {**nodes,
                 payload.node_id: replace(node, attrs={**node.attrs, payload.key: payload.value})}
    elif isinstance(payload, NodeRemoved):
        if payload.node_id not in nodes:
            raise IntegrityError(f"remove of unknown node {payload.node_id!r}")
        nodes = {k: v for k, v in nodes.items() if k != payload.node_id}
        if payload.node_id in positions:
            positions = {k: v for k, v in positions.items() if k != payload.node_id}
    elif isinstance(payload, EdgeRemoved):
        if payload.edge_id not in edges:
            raise IntegrityError(f"remove of unknown edge {payload.edge_id!r}")
        edge = edges[payload.edge_id]
        edges = {k: v for k, v in edges.items() if k != payload.edge_id}
        if edge.target in hub_leaves and edge.source in hub_leaves[edge.target]:
            remaining = tuple(x for x in hub_leaves[edge.target] if x != edge.source)
            hub_leaves = {**hub_leaves, edge.target: remaining}
    elif isinstance(payload, PositionsChanged):
        for node_id in payload.positions:
            if node_id not in nodes:
                raise IntegrityError(f"position for unknown node {node_id!r}")
        positions = {**positions, **payload.positions}
    else:
        raise GraphError(f"unknown payload type {type(payload).__name__}")

    return GraphSnapshot(
        nodes=nodes,
        edges=edges,
        positions=positions,
        hub_leaves=hub_leaves,
        last_seq=event.seq,
    )


def fold_events(events: Iterable[GraphEvent], base: Optional[GraphSnapshot] = None) -> GraphSnapshot:
    snapshot = EMPTY_SNAPSHOT if base is None else base
    for event in events:
        snapshot = apply_event(snapshot, event)
    return snapshot


# --- log / wire encoding ---------------------------------------------------

def payload_to_json(payload: Payload) -> dict[str, Any]:
    if isinstance(payload, NodeAdded):
        node = payload.node
        return {
            "type": "node_added",
            "node": {
                "id": node.id,
                "kind": node.kind.value,
                "label": node.label,
                "classes": list(node.classes),
                "attrs": dict(node.attrs),
            },
        }
    if isinstance(payload, EdgeAdded):
        return {"type": "edge_added", "id": payload.edge_id,
                "from": payload.source, "to": payload.target}
    if isinstance(payload, AttrChanged):
        return {"type": "attr_changed", "node_id": payload.node_id,
                "key": payload.key, "value": payload.value}
    if isinstance(payload, NodeRemoved):
        return {"type": "node_removed", "id": payload.node_id}
    if isinstance(payload, EdgeRemoved):
        return {"type": "edge_removed", "id": payload.edge_id}
    if isinstance(payload, PositionsChanged):
        return {"type": "positions",
                "positions": {k: [v[0], v[1]] for k, v in payload.positions.items()}}
    raise GraphError(f"unknown payload type {type(payload).__name__}")


def payload_from_json(obj: dict[str, Any]) -> Payload:
    kind = obj.get("type")
    if kind == "node_added":
        raw = obj["node"]
        return NodeAdded(GraphNode(
            id=raw["id"],
            kind=NodeKind(raw["kind"]),
            label=raw["label"],
            classes=tuple(raw.get("classes", ())),
            attrs=dict(raw.get("attrs", {})),
        ))
    if kind == "edge_added":
        return EdgeAdded(obj["id"], obj["from"], obj["to"])
    if kind == "attr_changed":
        return AttrChanged(obj["node_id"], obj["key"], obj["value"])
    if kind == "node_removed":
        return NodeRemoved(obj["id"])
    if kind == "edge_removed":
        return EdgeRemoved(obj["id"])
    if kind == "positions":
        return PositionsChanged(
            {k: (float(v[0]), float(v[1])) for k, v in obj["positions"].items()}
        )
    raise GraphError(f"unknown event type {kind!r}")


def event_to_json(event: GraphEvent) -> dict[str, Any]:
    return {"seq": event.seq, "event": payload_to_json(event.payload)}


def event_from_json(obj: dict[str, Any]) -> GraphEvent:
    return GraphEvent(seq=int(obj["seq"]), payload=payload_from_json(obj["event"]))


def snapshot_to_json(snapshot: GraphSnapshot) -> dict[str, Any]:
    return {
        "last_seq": snapshot.last_seq,
        "nodes": [payload_to_json(NodeAdded(node))["node"] for node in snapshot.nodes.values()],
        "edges": [{"id": e.id, "from": e.source, "to": e.target}
                  for e in snapshot.edges.values()],
        "positions": {k: [v[0], v[1]] for k, v in snapshot.positions.items()},
    }
