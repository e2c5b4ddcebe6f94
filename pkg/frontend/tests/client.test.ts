import { afterEach, describe, expect, it, vi } from "vitest";

import {
  ApiError,
  createSession,
  EventFeed,
  fetchNodeDetail,
  wsUrlFor,
  type SocketLike,
} from "../src/client.js";
import type { WireEvent } from "../src/wire.js";
import { goldenLog } from "./helpers.js";

class FakeSocket implements SocketLike {
  onmessage: ((data: string) => void) | null = null;
  onclose: (() => void) | null = null;
  closed = false;

  constructor(readonly url: string) {}

  close(): void {
    this.closed = true;
  }

  feed(frames: Array<WireEvent | string>): void {
    for (const frame of frames) {
      this.onmessage?.(typeof frame === "string" ? frame : JSON.stringify(frame));
    }
  }

  serverClose(): void {
    this.onclose?.();
  }
}

function feedHarness(handlers: ConstructorParameters<typeof EventFeed>[2] = {}) {
  const sockets: FakeSocket[] = [];
  const feed = new EventFeed("ws://example/api/sessions/s-1/events", (url) => {
    const socket = new FakeSocket(url);
    sockets.push(socket);
    return socket;
  }, handlers);
  return { feed, sockets };
}

describe("wsUrlFor", () => {
  it("swaps the scheme and appends the events path", () => {
    expect(wsUrlFor("http://127.0.0.1:8000", "s-0a1b2c3d4e5f"))
      .toBe("ws://127.0.0.1:8000/api/sessions/s-0a1b2c3d4e5f/events");
    expect(wsUrlFor("https://graphs.example", "s-1"))
      .toBe("wss://graphs.example/api/sessions/s-1/events");
  });
});

describe("EventFeed", () => {
  const log = goldenLog();
  const scaffold = log.slice(0, 22);

  it("folds incoming frames into graph state", () => {
    const seen: number[] = [];
    const { feed, sockets } = feedHarness({ onChange: (state) => seen.push(state.lastSeq) });
    feed.start();
    expect(sockets).toHaveLength(1);
    sockets[0]?.feed(scaffold);
    expect(feed.state.lastSeq).toBe(21);
    expect(feed.state.nodes.size).toBe(12);
    expect(feed.state.edges.size).toBe(10);
    expect(seen).toHaveLength(22);
    expect(seen[21]).toBe(21);
  });

  it("recovers from a sequence gap by reconnecting and refolding", () => {
    const reasons: string[] = [];
    const { feed, sockets } = feedHarness({ onReconnect: (reason) => reasons.push(reason) });
    feed.start();
    const first = sockets[0] as FakeSocket;
    first.feed(scaffold.slice(0, 5));
    expect(feed.state.lastSeq).toBe(4);

    first.feed([log[7] as WireEvent]); // skips seq 5 and 6
    expect(reasons).toEqual(["expected seq 5, got 7"]);
    expect(first.closed).toBe(true);
    expect(sockets).toHaveLength(2);
    expect(feed.state.lastSeq).toBe(-1); // reset, waiting for the replay

    (sockets[1] as FakeSocket).feed(scaffold);
    expect(feed.state.lastSeq).toBe(21);
    expect(feed.state.nodes.size).toBe(12);
  });

  it("treats an unparsable frame the same way", () => {
    const reasons: string[] = [];
    const { feed, sockets } = feedHarness({ onReconnect: (reason) => reasons.push(reason) });
    feed.start();
    (sockets[0] as FakeSocket).feed(["{not json"]);
    expect(reasons).toEqual(["unparsable frame"]);
    expect(sockets).toHaveLength(2);
  });

  it("ignores frames that race in from a detached socket", () => {
    const { feed, sockets } = feedHarness();
    feed.start();
    const first = sockets[0] as FakeSocket;
    const handler = first.onmessage as (data: string) => void;
    first.feed(["bad"]); // forces the reconnect
    handler(JSON.stringify(scaffold[0])); // late delivery on the old socket
    expect(feed.state.lastSeq).toBe(-1);
  });

  it("reports the server closing the stream", () => {
    let closed = 0;
    const { feed, sockets } = feedHarness({ onClose: () => { closed += 1; } });
    feed.start();
    (sockets[0] as FakeSocket).feed(scaffold);
    (sockets[0] as FakeSocket).serverClose();
    expect(closed).toBe(1);
    expect(feed.state.lastSeq).toBe(21); // final state survives the close
  });

  it("stop() closes the socket and suppresses further callbacks", () => {
    let closes = 0;
    let reconnects = 0;
    const { feed, sockets } = feedHarness({
      onClose: () => { closes += 1; },
      onReconnect: () => { reconnects += 1; },
    });
    feed.start();
    const socket = sockets[0] as FakeSocket;
    feed.stop();
    expect(socket.closed).toBe(true);
    socket.serverClose();
    expect(closes).toBe(0);
    expect(reconnects).toBe(0);
    expect(sockets).toHaveLength(1);
  });
});

describe("HTTP helpers", () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("posts the session request and returns the id", async () => {
    const fetchMock = vi.fn(async (_url: string, _init?: RequestInit) =>
      new Response(JSON.stringify({ session_id: "s-9f2c58f0be11" }), { status: 200 }));
    vi.stubGlobal("fetch", fetchMock);

    const id = await createSession("http://api.test", { topic_a: "tea", topic_b: "coffee" });
    expect(id).toBe("s-9f2c58f0be11");
    const [url, init] = fetchMock.mock.calls[0] ?? [];
    expect(url).toBe("http://api.test/api/sessions");
    expect(init?.method).toBe("POST");
    expect(JSON.parse(init?.body as string)).toEqual({ topic_a: "tea", topic_b: "coffee" });
  });

  it("surfaces the service's error text with the status", async () => {
    vi.stubGlobal("fetch", vi.fn(async () =>
      new Response(JSON.stringify({ error: "topic_a and topic_b must differ" }), { status: 400 })));

    const failure = createSession("http://api.test", { topic_a: "tea", topic_b: "tea" });
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(failure).rejects.toMatchObject({
      message: "topic_a and topic_b must differ",
      status: 400,
    });
  });

  it("falls back to a status message for non-JSON error bodies", async () => {
    vi.stubGlobal("fetch", vi.fn(async () =>
      new Response("gateway exploded", { status: 503 })));

    await expect(fetchNodeDetail("http://api.test", "s-1", "t:A:1")).rejects.toMatchObject({
      message: "request failed with status 503",
      status: 503,
    });
  });

  it("escapes node ids in the detail path", async () => {
    const fetchMock = vi.fn(async (_url: string) =>
      new Response(JSON.stringify({ id: "t:A:1", kind: "tweet" }), { status: 200 }));
    vi.stubGlobal("fetch", fetchMock);

    await fetchNodeDetail("http://api.test", "s-1", "t:A:1");
    expect(fetchMock.mock.calls[0]?.[0])
      .toBe("http://api.test/api/sessions/s-1/nodes/t%3AA%3A1");
  });
});
