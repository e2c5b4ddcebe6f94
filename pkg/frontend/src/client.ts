/** HTTP and WebSocket access to the graph service.
 *
 * The event socket replays the full log from seq 0 on every connection,
 * so recovery from any stream fault (gap, bad frame) is simply: drop the
 * socket, reset local state, reconnect, and refold.
 */

import { emptyState, FoldError, reduceEvent, SeqGapError, type GraphState } from "./reducer.js";
import type { DetailRecord, SnapshotBody, WireEvent } from "./wire.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
    this.name = "ApiError";
  }
}

export interface SessionRequest {
  topic_a: string;
  topic_b: string;
  source?: string;
  seed?: number;
  corpus?: string;
  lexicon?: string;
  stylesheet?: string;
  tick_interval?: number;
  language?: string;
}

async function errorFrom(res: Response): Promise<ApiError> {
  let message = `request failed with status ${res.status}`;
  try {
    const body: unknown = await res.json();
    if (body && typeof body === "object" && typeof (body as { error?: unknown }).error === "string") {
      message = (body as { error: string }).error;
    }
  } catch {
    // non-JSON error body; keep the status message
  }
  return new ApiError(message, res.status);
}

export async function createSession(apiBase: string, request: SessionRequest): Promise<string> {
  const res = await fetch(`${apiBase}/api/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(request),
  });
  if (!res.ok) {
    throw await errorFrom(res);
  }
  const body = (await res.json()) as { session_id: string };
  return body.session_id;
}

export async function fetchSnapshot(apiBase: string, sessionId: string): Promise<SnapshotBody> {
  const res = await fetch(`${apiBase}/api/sessions/${encodeURIComponent(sessionId)}/snapshot`);
  if (!res.ok) {
    throw await errorFrom(res);
  }
  return (await res.json()) as SnapshotBody;
}

export async function fetchNodeDetail(
  apiBase: string,
  sessionId: string,
  nodeId: string,
): Promise<DetailRecord> {
  const res = await fetch(
    `${apiBase}/api/sessions/${encodeURIComponent(sessionId)}/nodes/${encodeURIComponent(nodeId)}`,
  );
  if (!res.ok) {
    throw await errorFrom(res);
  }
  return (await res.json()) as DetailRecord;
}

export function wsUrlFor(apiBase: string, sessionId: string): string {
  return `${apiBase.replace(/^http/, "ws")}/api/sessions/${encodeURIComponent(sessionId)}/events`;
}

/** The slice of WebSocket the feed uses; tests substitute fakes. */
export interface SocketLike {
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export function browserSocketFactory(url: string): SocketLike {
  const ws = new WebSocket(url);
  const wrapper: SocketLike = {
    onmessage: null,
    onclose: null,
    close: () => ws.close(),
  };
  ws.onmessage = (ev: MessageEvent) => {
    wrapper.onmessage?.(typeof ev.data === "string" ? ev.data : String(ev.data));
  };
  ws.onclose = () => {
    wrapper.onclose?.();
  };
  return wrapper;
}

export interface FeedHandlers {
  onChange?: (state: GraphState, event: WireEvent) => void;
  onReconnect?: (reason: string) => void;
  /** Server closed the stream (normally: session finished and fully sent). */
  onClose?: () => void;
}

export class EventFeed {
  state: GraphState = emptyState();
  private socket: SocketLike | null = null;
  private stopped = false;

  constructor(
    private readonly url: string,
    private readonly factory: SocketFactory,
    private readonly handlers: FeedHandlers = {},
  ) {}

  start(): void {
    this.stopped = false;
    this.open();
  }

  stop(): void {
    this.stopped = true;
    const socket = this.socket;
    this.socket = null;
    if (socket) {
      socket.onmessage = null;
      socket.onclose = null;
      socket.close();
    }
  }

  private open(): void {
    // Fresh connections replay from seq 0, so local state starts over too.
    this.state = emptyState();
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onmessage = (data) => this.onFrame(socket, data);
    socket.onclose = () => {
      if (this.socket === socket) {
        this.socket = null;
        this.handlers.onClose?.();
      }
    };
  }

  private onFrame(socket: SocketLike, data: string): void {
    if (socket !== this.socket) {
      return;
    }
    let wire: WireEvent;
    try {
      wire = JSON.parse(data) as WireEvent;
    } catch {
      this.reconnect("unparsable frame");
      return;
    }
    try {
      this.state = reduceEvent(this.state, wire);
    } catch (err) {
      if (err instanceof SeqGapError || err instanceof FoldError) {
        this.reconnect(err.message);
        return;
      }
      throw err;
    }
    this.handlers.onChange?.(this.state, wire);
  }

  private reconnect(reason: string): void {
    const old = this.socket;
    this.socket = null;
    if (old) {
      old.onmessage = null;
      old.onclose = null;
      old.close();
    }
    this.handlers.onReconnect?.(reason);
    if (!this.stopped) {
      this.open();
    }
  }
}
