/** Pure fold of the server's event stream into client graph state.
 *
 * Rule-for-rule mirror of the server's fold: same seq continuity check,
 * same integrity checks, same books. Folding a session's full log must
 * land exactly on the snapshot endpoint's body — the golden-log test
 * holds that equality.
 *
 * One deliberate quirk shared with the server: within an eviction batch
 * the node removal precedes its edge removal, so an edge may briefly
 * reference a removed node. Removal by id (no endpoint lookup) makes
 * that safe.
 */
import type { WireEdge, WireEvent, WireNode } from "./wire.js";

export interface GraphState {
  lastSeq: number;
  nodes: Map<string, WireNode>;
  edges: Map<string, WireEdge>;
  positions: Map<string, readonly [number, number]>;
}

export class SeqGapError extends Error {
  constructor(
    readonly expected: number,
    readonly got: number,
  ) {
    super(`expected seq ${expected}, got ${got}`);
    this.name = "SeqGapError";
  }
}

export class FoldError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FoldError";
  }
}

export function emptyState(): GraphState {
  return { lastSeq: -1, nodes: new Map(), edges: new Map(), positions: new Map() };
}

export function reduceEvent(state: GraphState, wire: WireEvent): GraphState {
  if (wire.seq !== state.lastSeq + 1) {
    throw new SeqGapError(state.lastSeq + 1, wire.seq);
  }
  const nodes = new Map(state.nodes);
  const edges = new Map(state.edges);
  const positions = new Map(state.positions);
  const event = wire.event;

  switch (event.type) {
    case "node_added": {
      if (nodes.has(event.node.id)) {
        throw new FoldError(`node ${event.node.id} already exists`);
      }
      nodes.set(event.node.id, event.node);
      break;
    }
    case "edge_added": {
      if (edges.has(event.id)) {
        throw new FoldError(`edge ${event.id} already exists`);
      }
      if (!nodes.has(event.from) || !nodes.has(event.to)) {
        throw new FoldError(`edge ${event.id} references a missing node`);
      }
      edges.set(event.id, { id: event.id, from: event.from, to: event.to });
      break;
    }
    case "attr_changed": {
      const node = nodes.get(event.node_id);
      if (!node) {
        throw new FoldError(`attr change for unknown node ${event.node_id}`);
      }
      nodes.set(event.node_id, {
        ...node,
        attrs: { ...node.attrs, [event.key]: event.value },
      });
      break;
    }
    case "node_removed": {
      if (!nodes.delete(event.id)) {
        throw new FoldError(`remove of unknown node ${event.id}`);
      }
      positions.delete(event.id);
      break;
    }
    case "edge_removed": {
      if (!edges.delete(event.id)) {
        throw new FoldError(`remove of unknown edge ${event.id}`);
      }
      break;
    }
    case "positions": {
      for (const [id, xy] of Object.entries(event.positions)) {
        if (!nodes.has(id)) {
          throw new FoldError(`position for unknown node ${id}`);
        }
        positions.set(id, [xy[0], xy[1]]);
      }
      break;
    }
    default: {
      const unknown: never = event;
      throw new FoldError(`unknown payload ${JSON.stringify(unknown)}`);
    }
  }
  return { lastSeq: wire.seq, nodes, edges, positions };
}

export function foldLog(events: Iterable<WireEvent>, base?: GraphState): GraphState {
  let state = base ?? emptyState();
  for (const event of events) {
    state = reduceEvent(state, event);
  }
  return state;
}
