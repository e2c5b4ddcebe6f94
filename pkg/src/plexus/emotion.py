"""Five-mode emotion scoring for short texts.

A text is tokenized, matched against a weighted word lexicon, and scored
per emotion with a noisy-OR fold: relevance = 1 - prod(1 - w) over the
non-negated matches. The five modes (anger, disgust, fear, joy, sadness)
are independent confidences in [0, 1]; they do not sum to 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class EmotionLabel(str, Enum):
    ANGER = "anger"
    DISGUST = "disgust"
    FEAR = "fear"
    JOY = "joy"
    SADNESS = "sadness"


# Canonical order: used for tie-breaking, serialization, and display.
EMOTION_LABELS: tuple[EmotionLabel, ...] = (
    EmotionLabel.ANGER,
    EmotionLabel.DISGUST,
    EmotionLabel.FEAR,
    EmotionLabel.JOY,
    EmotionLabel.SADNESS,
)

_EMOTION_NAMES = frozenset(label.value for label in EMOTION_LABELS)

# A token is a maximal run of letters/digits, optionally glued to a single
# leading '#' or '@'. Underscore is deliberately excluded from runs.
_TOKEN_RE = re.compile(r"[#@]?[^\W_]+", re.UNICODE)

NEGATION_WINDOW = 2


@dataclass(frozen=True)
class EmotionScores:
    """Per-mode relevance values, each in [0, 1]."""

    anger: float = 0.0
    disgust: float = 0.0
    fear: float = 0.0
    joy: float = 0.0
    sadness: float = 0.0

    def __post_init__(self) -> None:
        for label in EMOTION_LABELS:
            value = getattr(self, label.value)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{label.value} relevance {value!r} outside [0, 1]")

    def __getitem__(self, label: EmotionLabel) -> float:
        return getattr(self, EmotionLabel(label).value)

    def as_dict(self) -> dict[str, float]:
        """Values keyed by emotion name, in canonical order."""
        return {label.value: getattr(self, label.value) for label in EMOTION_LABELS}

    def is_zero(self) -> bool:
        return all(getattr(self, label.value) == 0.0 for label in EMOTION_LABELS)


class LexiconError(Exception):
    """Problem loading a lexicon file."""


class LexiconFormatError(LexiconError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LexiconRangeError(LexiconError):
    def __init__(self, line_no: int, token: str, value: float):
        super().__init__(
            f"line {line_no}: weight {value!r} for token {token!r} outside (0, 1]"
        )
        self.line_no = line_no
        self.token = token
        self.value = value


@dataclass(frozen=True)
class Lexicon:
    """Token -> per-emotion weights, plus the negator token set.

    Tokens and negators are case-folded and non-empty; every weight sits
    strictly in (0, 1]. A token may carry weights for several emotions.
    """

    entries: Mapping[str, Mapping[EmotionLabel, float]] = field(default_factory=dict)
    negators: frozenset[str] = frozenset()
    name: str = "lexicon"
    version: str = "0"

    def __len__(self) -> int:
        return len(self.entries)


def tokenize(text: str) -> list[str]:
    """Split text into case-folded letter/digit runs, keeping '#'/'@' prefixes.

    Punctuation and whitespace are discarded; order is preserved. Total over
    any unicode string.
    """
    return [match.casefold() for match in _TOKEN_RE.findall(text)]


def load_lexicon(source: str, name: str = "lexicon", version: str = "0") -> Lexicon:
    """Parse lexicon file content (see the file format in the README).

    Lines: ``token<TAB>emotion:weight[,emotion:weight...]``, ``!negator<TAB>token``,
    comments, and blanks. A comment is ``#`` followed by whitespace, another
    ``#``, or nothing — so hashtag tokens like ``#blessed`` still start
    entries. Duplicate token lines merge by per-emotion maximum weight.
    """
    entries: dict[str, dict[EmotionLabel, float]] = {}
    negators: set[str] = set()
    for line_no, raw in enumerate(source.splitlines(), start=1):
        if raw.startswith("#") and (len(raw) == 1 or raw[1] in " \t#"):
            continue
        line = raw.strip()
        if not line:
            continue
        fields = raw.rstrip("\n").split("\t")
        if len(fields) != 2:
            raise LexiconFormatError(
                line_no, f"expected 2 tab-separated fields, got {len(fields)}"
            )
        head, rest = fields[0].strip(), fields[1].strip()
        if head == "!negator":
            negator = rest.casefold()
            if not negator:
                raise LexiconFormatError(line_no, "empty negator token")
            negators.add(negator)
            continue
        token = head.casefold()
        if not token:
            raise LexiconFormatError(line_no, "empty token")
        if not rest:
            raise LexiconFormatError(line_no, f"no emotion weights for {token!r}")
        weights = entries.setdefault(token, {})
        for item in rest.split(","):
            emotion_name, sep, weight_text = item.strip().partition(":")
            if not sep:
                raise LexiconFormatError(
                    line_no, f"expected emotion:weight, got {item.strip()!r}"
                )
            emotion_name = emotion_name.strip()
            if emotion_name not in _EMOTION_NAMES:
                raise LexiconFormatError(
                    line_no, f"unknown emotion {emotion_name!r}"
                )
            try:
                weight = float(weight_text)
            except ValueError:
                raise LexiconFormatError(
                    line_no, f"bad weight {weight_text.strip()!r} for {token!r}"
                ) from None
            if not (0.0 < weight <= 1.0):
                raise LexiconRangeError(line_no, token, weight)
            label = EmotionLabel(emotion_name)
            weights[label] = max(weights.get(label, 0.0), weight)
    return Lexicon(entries=entries, negators=frozenset(negators), name=name, version=version)


def load_lexicon_file(path: str, name: str | None = None, version: str = "0") -> Lexicon:
    with open(path, encoding="utf-8") as handle:
        source = handle.read()
    return load_lexicon(source, name=name or path, version=version)


def score_text(text: str, lexicon: Lexicon) -> EmotionScores:
    """Noisy-OR relevance per emotion over the non-negated lexicon matches.

    A match is negated (and dropped) when any of the 2 immediately preceding
    tokens is a negator. Deterministic; all-zero when nothing matches.
    """
    tokens = tokenize(text)
    entries = lexicon.entries
    negators = lexicon.negators
    remaining = {label: 1.0 for label in EMOTION_LABELS}
    for index, token in enumerate(tokens):
        weights = entries.get(token)
        if not weights:
            continue
        window = tokens[max(0, index - NEGATION_WINDOW):index]
        if any(prev in negators for prev in window):
            continue
        for label, weight in weights.items():
            remaining[label] *= 1.0 - weight
    return EmotionScores(**{
        label.value: 1.0 - remaining[label] for label in EMOTION_LABELS
    })


def final_emotion(scores: EmotionScores) -> EmotionLabel:
    """Argmax label; ties resolve to the earliest label in canonical order."""
    best = EMOTION_LABELS[0]
    best_value = scores[best]
    for label in EMOTION_LABELS[1:]:
        value = scores[label]
        if value > best_value:
            best, best_value = label, value
    return best


def default_lexicon() -> Lexicon:
    """The lexicon bundled with the package (loaded fresh on each call)."""
    from importlib.resources import files

    source = files("plexus.data").joinpath("default_lexicon.txt").read_text("utf-8")
    return load_lexicon(source, name="plexus-default", version="1")
