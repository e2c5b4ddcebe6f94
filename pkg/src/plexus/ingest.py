"""Tweet streams for two user topics.

Two interchangeable pull-based sources feed the pipeline: a deterministic
file-backed replay source (JSONL corpus) and a live HTTP client for the
recent-search endpoint. Replay re-derives topic attribution by substring
match; the live client stamps each tweet with the query's topic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Callable, Optional, Protocol

RECENT_SEARCH_URL = "https://api.twitter.com/2/tweets/search/recent"
BEARER_TOKEN_ENV = "PLEXUS_BEARER_TOKEN"

CORPUS_REQUIRED_KEYS = ("id", "text", "created_at", "author", "lang")


class IngestError(Exception):
    pass


class TopicValidationError(IngestError):
    pass


class CorpusParseError(IngestError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CorpusSchemaError(IngestError):
    def __init__(self, line_no: int, field_name: str, message: str):
        super().__init__(f"line {line_no}: field {field_name!r}: {message}")
        self.line_no = line_no
        self.field_name = field_name


class AuthError(IngestError):
    """Credentials rejected (HTTP 401); the session should abort."""


class RateLimitedError(IngestError):
    """HTTP 429; carries the server's retry-after hint in seconds."""

    def __init__(self, retry_after: float):
        super().__init__(f"rate limited, retry after {retry_after}s")
        self.retry_after = retry_after


class ProtocolError(IngestError):
    """Response body or status did not match the search API contract."""


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    created_at: datetime
    author: str
    lang: str
    topic: Optional[str] = None  # "A" / "B", stamped by the retrieval path


@dataclass(frozen=True)
class TopicQuery:
    topic_id: str  # "A" or "B"
    phrase: str
    language: str = "en"
    exclude_retweets: bool = True

    def validate(self) -> None:
        if self.topic_id not in ("A", "B"):
            raise TopicValidationError(f"topic_id must be 'A' or 'B', got {self.topic_id!r}")
        if not self.phrase.strip():
            raise TopicValidationError(f"topic {self.topic_id}: phrase is empty")


def validate_topic_pair(a: TopicQuery, b: TopicQuery) -> None:
    a.validate()
    b.validate()
    if a.topic_id == b.topic_id:
        raise TopicValidationError("topic ids must differ")
    if a.phrase.strip().casefold() == b.phrase.strip().casefold():
        raise TopicValidationError("topics must differ (case-insensitive)")


def build_query(q: TopicQuery) -> str:
    """Search query string: quoted phrase, language filter, retweet exclusion."""
    q.validate()
    parts = [f'"{q.phrase.strip()}"', f"lang:{q.language}"]
    if q.exclude_retweets:
        parts.append("-is:retweet")
    return " ".join(parts)


def _parse_rfc3339(value: str) -> datetime:
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    moment = datetime.fromisoformat(text)
    if moment.tzinfo is None:
        raise ValueError("missing UTC offset")
    return moment.astimezone(timezone.utc)


def parse_corpus_line(line: str, line_no: int = 1) -> Tweet:
    """One JSONL corpus record -> Tweet (topic left unset)."""
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(record, dict):
        raise CorpusParseError(line_no, "record is not a JSON object")
    for key in CORPUS_REQUIRED_KEYS:
        if key not in record:
            raise CorpusSchemaError(line_no, key, "missing")
    for key in ("id", "text"):
        if not isinstance(record[key], str) or not record[key]:
            raise CorpusSchemaError(line_no, key, "must be a non-empty string")
    try:
        created_at = _parse_rfc3339(str(record["created_at"]))
    except ValueError as exc:
        raise CorpusSchemaError(line_no, "created_at", str(exc)) from None
    return Tweet(
        id=record["id"],
        text=record["text"],
        created_at=created_at,
        author=str(record["author"]),
        lang=str(record["lang"]),
    )


def match_topic(tweet: Tweet, a: TopicQuery, b: TopicQuery) -> set[str]:
    """Topic ids whose phrase occurs case-insensitively in the tweet text."""
    text = tweet.text.casefold()
    matched = set()
    for query in (a, b):
        if query.phrase.strip().casefold() in text:
            matched.add(query.topic_id)
    return matched


class TweetSource(Protocol):
    """Pull-based producer; next_batch returns [] when exhausted."""

    def next_batch(self) -> list[Tweet]: ...


class ReplaySource:
    """Deterministic corpus playback: same file, same sequence of batches."""

    def __init__(self, path: str, batch_size: int = 10):
        self.path = path
        self.batch_size = batch_size
        self._tweets: list[Tweet] = []
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                self._tweets.append(parse_corpus_line(line, line_no))
        self._offset = 0

    def __len__(self) -> int:
        return len(self._tweets)

    @property
    def exhausted(self) -> bool:
        return self._offset >= len(self._tweets)

    def next_batch(self) -> list[Tweet]:
        batch = self._tweets[self._offset:self._offset + self.batch_size]
        self._offset += len(batch)
        return batch


def _requests_get(url: str, params: dict, headers: dict):
    import requests

    return requests.get(url, params=params, headers=headers, timeout=30)


HttpGet = Callable[[str, dict, dict], object]


def fetch_live_batch(
    q: TopicQuery,
    bearer_token: str,
    cursor: Optional[str] = None,
    *,
    max_results: int = 10,
    http_get: Optional[HttpGet] = None,
) -> tuple[list[Tweet], Optional[str]]:
    """One page of recent-search results, stamped with q's topic.

    Returns (tweets, next cursor). Raises AuthError on 401, RateLimitedError
    (with retry-after seconds) on 429, ProtocolError on anything else
    unexpected.
    """
    params = {
        "query": build_query(q),
        "max_results": str(max_results),
        "tweet.fields": "id,text,created_at,author_id,lang",
    }
    if cursor:
        params["next_token"] = cursor
    headers = {"Authorization": f"Bearer {bearer_token}"}
    get = http_get or _requests_get
    response = get(RECENT_SEARCH_URL, params, headers)
    status = getattr(response, "status_code", None)
    if status == 401:
        raise AuthError("bearer token rejected (HTTP 401)")
    if status == 429:
        retry_after = float(getattr(response, "headers", {}).get("retry-after", 60))
        raise RateLimitedError(retry_after)
    if status != 200:
        raise ProtocolError(f"unexpected HTTP status {status}")
    try:
        body = response.json()
    except ValueError as exc:
        raise ProtocolError(f"response body is not JSON: {exc}") from None
    if not isinstance(body, dict):
        raise ProtocolError("response body is not a JSON object")
    tweets = []
    for item in body.get("data", []):
        try:
            created_at = _parse_rfc3339(item["created_at"])
            tweet = Tweet(
                id=str(item["id"]),
                text=str(item["text"]),
                created_at=created_at,
                author=str(item.get("author_id", "")),
                lang=str(item.get("lang", "")),
                topic=q.topic_id,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed result object: {exc!r}") from None
        if not tweet.id or not tweet.text:
            raise ProtocolError("result object with empty id or text")
        tweets.append(tweet)
    meta = body.get("meta", {})
    next_cursor = meta.get("next_token") if isinstance(meta, dict) else None
    return tweets, next_cursor


class LiveSource:
    """Polling client over fetch_live_batch; single consumer per instance."""

    def __init__(
        self,
        query: TopicQuery,
        bearer_token: str,
        batch_size: int = 10,
        http_get: Optional[HttpGet] = None,
    ):
        self.query = query
        self._token = bearer_token
        self._batch_size = batch_size
        self._http_get = http_get
        self._cursor: Optional[str] = None

    def next_batch(self) -> list[Tweet]:
        tweets, self._cursor = fetch_live_batch(
            self.query,
            self._token,
            self._cursor,
            max_results=self._batch_size,
            http_get=self._http_get,
        )
        return tweets
