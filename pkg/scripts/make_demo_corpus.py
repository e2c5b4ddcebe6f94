#!/usr/bin/env python3
"""Regenerate the bundled demo corpus (src/plexus/data/demo_corpus.jsonl).

Deterministic: a fixed seed drives every choice, so re-running this script
reproduces the committed file byte for byte. The mix is tuned to exercise
the whole pipeline:

  - 80 tweets mention only "iPhone 7", joy-heavy so one hub overflows its
    50-leaf cap and eviction paths run (55 joy / 8 anger / 6 fear /
    5 disgust / 6 sadness);
  - 80 tweets mention only "Samsung S7", 16 per emotion;
  - 20 mention both topics (10 joy, 10 sadness) and attach to both clusters;
  - 10 mention a topic but score zero on every emotion (skip counters);
  - 10 mention neither topic (unmatched counter).

Every emotional tweet is asserted to land on its intended emotion with the
bundled lexicon, so hub tallies in tests can be computed from this script's
plan rather than from the implementation under test.
"""
import json
import pathlib
import random
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from plexus.emotion import default_lexicon, final_emotion, score_text  # noqa: E402

SEED = 7
TOPIC_A = "iPhone 7"
TOPIC_B = "Samsung S7"
OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "plexus" / "data" / "demo_corpus.jsonl"

VOCAB = {
    "joy": ["love", "adore", "wonderful", "amazing", "delighted", "thrilled", "happy"],
    "anger": ["furious", "outraged", "angry", "rage", "annoyed", "hate"],
    "fear": ["terrified", "afraid", "scared", "panic", "worried", "anxious"],
    "disgust": ["disgusting", "gross", "revolting", "nasty", "vile", "repulsive"],
    "sadness": ["heartbroken", "grief", "sad", "miserable", "crying", "lonely"],
}

TEMPLATES = [
    "I am {w1} and {w2} about the {topic}",
    "this {topic} leaves me {w1}, simply {w2}",
    "feeling {w1} after trying the {topic} today",
    "the {topic} review made me {w1} and a bit {w2}",
    "{w1} doesn't cover it, the {topic} is {w2}",
    "honestly {w1} with my new {topic} ☀️",
]

BOTH_TEMPLATE = "comparing the {a} with the {b} leaves me {w1} and {w2}"

ZERO_TEXTS_A = [
    "the iPhone 7 ships in two sizes with a different home button",
    "iPhone 7 preorders open friday at nine",
    "our store has the iPhone 7 on the second floor",
    "the iPhone 7 case comes in six colors",
    "iPhone 7 battery test results posted on the wiki",
]
ZERO_TEXTS_B = [
    "the Samsung S7 uses a curved glass panel",
    "Samsung S7 units arrive in stores on monday",
    "the Samsung S7 manual is forty pages",
    "Samsung S7 trade-in values listed below",
    "the Samsung S7 charger uses the older connector",
]
UNMATCHED_TEXTS = [
    "my pixel takes decent photos in daylight",
    "the bus was late again this morning",
    "planted three rows of tomatoes this weekend",
    "the conference wifi password has rotated",
    "new keyboard arrived, the switches sound clicky",
    "reading a long novel about lighthouse keepers",
    "the kettle takes four minutes to boil",
    "spreadsheet macros saved me an hour today",
    "the library extended its opening hours",
    "our street gets repaved in the spring",
]


def build_plan(rng):
    plan = []  # (text, intended_emotion or None, kind)
    a_mix = [("joy", 55), ("anger", 8), ("fear", 6), ("disgust", 5), ("sadness", 6)]
    b_mix = [("joy", 16), ("anger", 16), ("fear", 16), ("disgust", 16), ("sadness", 16)]
    for emotion, count in a_mix:
        for _ in range(count):
            plan.append((emotional_text(rng, emotion, TOPIC_A), emotion, "A"))
    for emotion, count in b_mix:
        for _ in range(count):
            plan.append((emotional_text(rng, emotion, TOPIC_B), emotion, "B"))
    for emotion in ["joy"] * 10 + ["sadness"] * 10:
        w1, w2 = rng.sample(VOCAB[emotion], 2)
        plan.append((BOTH_TEMPLATE.format(a=TOPIC_A, b=TOPIC_B, w1=w1, w2=w2), emotion, "AB"))
    for text in ZERO_TEXTS_A + ZERO_TEXTS_B:
        plan.append((text, None, "zero"))
    for text in UNMATCHED_TEXTS:
        plan.append((text, None, "unmatched"))
    return plan


def emotional_text(rng, emotion, topic):
    template = rng.choice(TEMPLATES)
    w1, w2 = rng.sample(VOCAB[emotion], 2)
    return template.format(topic=topic, w1=w1, w2=w2)


def main():
    rng = random.Random(SEED)
    lexicon = default_lexicon()
    plan = build_plan(rng)
    assert len(plan) == 200, len(plan)

    for text, emotion, kind in plan:
        scores = score_text(text, lexicon)
        if kind in ("zero", "unmatched") and kind == "zero":
            assert scores.is_zero(), f"zero-bucket text scores: {text!r}"
        if emotion is not None:
            assert not scores.is_zero(), f"emotional text scored zero: {text!r}"
            assert final_emotion(scores).value == emotion, (
                f"{text!r} landed on {final_emotion(scores).value}, wanted {emotion}")

    rng.shuffle(plan)
    lines = []
    for i, (text, _, _) in enumerate(plan):
        record = {
            "id": str(804699173974016000 + i),
            "text": text,
            "created_at": f"2016-12-01T10:{i // 60:02d}:{i % 60:02d}Z",
            "author": f"user_{rng.randint(1000, 9999)}",
            "lang": "en",
        }
        lines.append(json.dumps(record, ensure_ascii=False))

    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} tweets to {OUT}")


if __name__ == "__main__":
    main()
