/** Presentation helpers for the node-detail panel. */

import { EMOTIONS, type EmotionName, type TweetDetail } from "./wire.js";

export const EMOTION_ICONS: Record<EmotionName, string> = {
  anger: "\u{1F620}",
  disgust: "\u{1F922}",
  fear: "\u{1F628}",
  joy: "\u{1F60A}",
  sadness: "\u{1F622}",
};

/** Maps an `icon` style value like "emoji-joy" to its glyph, else null. */
export function iconGlyph(iconName: string | null): string | null {
  if (iconName === null) {
    return null;
  }
  const match = /^emoji-(anger|disgust|fear|joy|sadness)$/.exec(iconName);
  if (!match) {
    return null;
  }
  return EMOTION_ICONS[match[1] as EmotionName];
}

/** Scores render with exactly six decimals, matching the wire text. */
export function formatScore(value: number): string {
  return value.toFixed(6);
}

export interface ScoreRow {
  emotion: EmotionName;
  glyph: string;
  score: string;
}

/** One row per emotion in canonical order, scores preformatted. */
export function scoreRows(detail: TweetDetail): ScoreRow[] {
  return EMOTIONS.map((emotion) => ({
    emotion,
    glyph: EMOTION_ICONS[emotion],
    score: formatScore(detail.docEmotions[emotion]),
  }));
}

/** "2016-12-01T10:02:27Z" → "2016-12-01 10:02:27 UTC"; odd input passes through. */
export function formatTimestamp(createdAt: string): string {
  const match = /^(\d{4}-\d{2}-\d{2})T(\d{2}:\d{2}:\d{2})Z$/.exec(createdAt);
  if (!match) {
    return createdAt;
  }
  return `${match[1]} ${match[2]} UTC`;
}
