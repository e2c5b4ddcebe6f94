/** End-to-end check against a real service process.
 *
 * Spawns the Python service, creates a session over HTTP, folds the
 * WebSocket stream with the production client code, and compares the
 * result with the snapshot and node-detail endpoints. Skips itself when
 * the service cannot be started (e.g. the backend isn't installed here);
 * every protocol-level claim is still covered by the golden-fixture
 * tests, which never skip.
 */
import { spawn, type ChildProcess } from "node:child_process";
import { setTimeout as delay } from "node:timers/promises";

import WebSocket from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { EventFeed, fetchSnapshot, wsUrlFor, type SocketLike } from "../src/client.js";
import { scoreRows } from "../src/detail.js";
import type { GraphState } from "../src/reducer.js";
import type { TweetDetail } from "../src/wire.js";

const PORT = 8741;
const API = `http://127.0.0.1:${PORT}`;

function wsFactory(url: string): SocketLike {
  const ws = new WebSocket(url);
  const wrapper: SocketLike = { onmessage: null, onclose: null, close: () => ws.close() };
  ws.on("message", (data: Buffer) => wrapper.onmessage?.(data.toString("utf-8")));
  ws.on("close", () => wrapper.onclose?.());
  return wrapper;
}

let server: ChildProcess | null = null;
let available = false;

beforeAll(async () => {
  const child = spawn("python3", [
    "-m", "plexus.cli", "run",
    "--topic-a", "iPhone 7",
    "--topic-b", "Samsung S7",
    "--source", "replay",
    "--seed", "1",
    "--listen", `127.0.0.1:${PORT}`,
  ], { stdio: ["ignore", "ignore", "ignore"], env: { ...process.env, PYTHONUNBUFFERED: "1" } });
  server = child;

  let dead = false;
  child.on("error", () => { dead = true; });
  child.on("exit", () => { dead = true; });

  // Poll until the port answers HTTP (any status will do) or the child dies.
  const deadline = Date.now() + 15_000;
  while (!dead && Date.now() < deadline) {
    try {
      await fetch(`${API}/api/sessions/warmup-probe/snapshot`);
      available = true;
      break;
    } catch {
      await delay(250);
    }
  }
}, 20_000);

afterAll(() => {
  server?.kill();
});

describe("against a live service", () => {
  it("folds the stream to the served snapshot and renders detail verbatim", async (ctx) => {
    if (!available) {
      ctx.skip();
      return;
    }

    const res = await fetch(`${API}/api/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        topic_a: "iPhone 7",
        topic_b: "Samsung S7",
        seed: 1,
        tick_interval: 0.001,
      }),
    });
    expect(res.status).toBe(200);
    const { session_id: sessionId } = (await res.json()) as { session_id: string };
    expect(sessionId).toMatch(/^s-[0-9a-f]{12}/);

    // Drain the stream to completion: the server closes it once the
    // replay is finished and every frame has been delivered.
    const finished = await new Promise<GraphState>((resolve, reject) => {
      const feed: EventFeed = new EventFeed(wsUrlFor(API, sessionId), wsFactory, {
        onClose: () => resolve(feed.state),
        onReconnect: (reason) => reject(new Error(`stream fault: ${reason}`)),
      });
      feed.start();
      void delay(60_000).then(() => reject(new Error("stream did not finish")));
    });

    const snapshot = await fetchSnapshot(API, sessionId);
    expect(finished.lastSeq).toBe(snapshot.last_seq);
    expect([...finished.nodes.values()]).toEqual(snapshot.nodes);
    expect([...finished.edges.values()]).toEqual(snapshot.edges);
    expect(Object.fromEntries(
      [...finished.positions].map(([id, [x, y]]) => [id, [x, y]]),
    )).toEqual(snapshot.positions);

    // Detail panel values must be the endpoint's own text, byte for byte.
    const tweetNode = snapshot.nodes.find((node) => node.kind === "tweet");
    expect(tweetNode).toBeDefined();
    const rawRes = await fetch(
      `${API}/api/sessions/${sessionId}/nodes/${encodeURIComponent(tweetNode!.id)}`);
    const raw = await rawRes.text();
    const sent = [...raw.matchAll(/"(anger|disgust|fear|joy|sadness)":(\d\.\d{6})/g)];
    expect(sent).toHaveLength(5);
    const rows = scoreRows(JSON.parse(raw) as TweetDetail);
    for (const [, emotion, text] of sent) {
      expect(rows.find((row) => row.emotion === emotion)?.score).toBe(text);
    }

    // Hub detail counts line up with the folded graph's live leaf edges.
    const hub = snapshot.nodes.find((node) => node.kind === "emotion");
    expect(hub).toBeDefined();
    const hubDetail = (await (await fetch(
      `${API}/api/sessions/${sessionId}/nodes/${encodeURIComponent(hub!.id)}`)).json()) as {
      live_count: number;
    };
    const leafEdges = [...finished.edges.values()]
      .filter((edge) => edge.to === hub!.id && edge.from.startsWith("t:"));
    expect(hubDetail.live_count).toBe(leafEdges.length);
  }, 90_000);
});
