/** Types for the service's wire formats: event frames, snapshot, details. */

export const EMOTIONS = ["anger", "disgust", "fear", "joy", "sadness"] as const;
export type EmotionName = (typeof EMOTIONS)[number];

export type NodeKind = "topic" | "emotion" | "tweet";

export interface WireNode {
  id: string;
  kind: NodeKind;
  label: string;
  classes: string[];
  attrs: Record<string, string | number>;
}

export interface WireEdge {
  id: string;
  from: string;
  to: string;
}

export type Payload =
  | { type: "node_added"; node: WireNode }
  | { type: "edge_added"; id: string; from: string; to: string }
  | { type: "attr_changed"; node_id: string; key: string; value: string | number }
  | { type: "node_removed"; id: string }
  | { type: "edge_removed"; id: string }
  | { type: "positions"; positions: Record<string, [number, number]> };

export interface WireEvent {
  seq: number;
  session: string;
  event: Payload;
}

export interface SnapshotBody {
  last_seq: number;
  nodes: WireNode[];
  edges: WireEdge[];
  positions: Record<string, [number, number]>;
  session: string;
  stylesheet: string;
}

export interface TweetDetail {
  id: string;
  kind: "tweet";
  label: EmotionName;
  text: string;
  author: string;
  created_at: string;
  docEmotions: Record<EmotionName, number>;
  finalEmotion: EmotionName;
}

export interface EmotionDetail {
  id: string;
  kind: "emotion";
  emotion: EmotionName;
  total_count: number;
  live_count: number;
}

export interface TopicDetail {
  id: string;
  kind: "topic";
  phrase: string;
  skipped: number;
}

export type DetailRecord = TweetDetail | EmotionDetail | TopicDetail;
