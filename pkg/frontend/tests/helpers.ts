/** Fixture access shared by the test files.
 *
 * The fixtures live at the repository root and are produced by the
 * service; these tests hold the client to byte- and value-level
 * agreement with them.
 */
import { readFileSync } from "node:fs";

import type { SnapshotBody, WireEvent } from "../src/wire.js";

export function fixturePath(relative: string): URL {
  return new URL(`../../fixtures/${relative}`, import.meta.url);
}

export function readFixture(relative: string): string {
  return readFileSync(fixturePath(relative), "utf-8");
}

/** The event log has one frame per line and no trailing newline. */
export function goldenLog(): WireEvent[] {
  return readFixture("golden/golden_log.jsonl")
    .split("\n")
    .map((line) => JSON.parse(line) as WireEvent);
}

export function goldenSnapshot(): SnapshotBody {
  return JSON.parse(readFixture("golden/golden_snapshot.json")) as SnapshotBody;
}

export interface DetailFixtureEntry {
  node_id: string;
  raw: string;
}

export function goldenDetail(): Record<"tweet" | "emotion" | "topic", DetailFixtureEntry> {
  return JSON.parse(readFixture("golden/golden_detail.json")) as Record<
    "tweet" | "emotion" | "topic",
    DetailFixtureEntry
  >;
}
