"""Tweet archive ingestion, filtering, and calendar bucketing.

Archives come in as JSONL (one object per line) or as CSV in the layout
used by third-party tweet archive exports. Bad rows never abort a parse;
they come back as RejectRecords so callers can report them.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .lexicon import StopWordList, tokenize

__all__ = [
    "Tweet",
    "Corpus",
    "RejectRecord",
    "BucketKey",
    "FilterConfig",
    "parse_jsonl",
    "parse_tta_csv",
    "write_jsonl",
    "filter_corpus",
    "bucket_by_period",
]

TTA_COLUMNS = {"id": "id", "text": "text", "created_at": "date", "is_retweet": "isRetweet"}
_TRUTHY = {"t", "true", "1"}


@dataclass(frozen=True)
class Tweet:
    """One ingested message. created_at is a UTC instant, seconds precision."""

    id: str
    created_at: datetime
    text: str
    is_retweet: bool = False
    lang: str | None = None


@dataclass(frozen=True)
class RejectRecord:
    """A line/row that could not become a Tweet, and why."""

    line: int
    reason: str


@dataclass(frozen=True)
class Corpus:
    """Ordered tweet collection: ascending created_at, ties broken by id."""

    tweets: tuple[Tweet, ...]
    source: str = ""

    def __len__(self):
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)

    @classmethod
    def build(cls, tweets, source: str = "") -> "Corpus":
        """Sort tweets into canonical order and check id uniqueness."""
        ordered = tuple(sorted(tweets, key=lambda t: (t.created_at, t.id)))
        ids = [t.id for t in ordered]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate tweet ids in corpus")
        return cls(tweets=ordered, source=source)


@dataclass(frozen=True)
class BucketKey:
    """Calendar period: kind 'month' with label YYYY-MM, or 'quarter' with YYYY-Qn."""

    kind: str
    label: str

    def __post_init__(self):
        if self.kind not in ("month", "quarter"):
            raise ValueError(f"unknown period kind: {self.kind!r}")
        ok = (
            len(self.label) == 7
            and self.label[4] == "-"
            and self.label[:4].isdigit()
            and (
                (self.kind == "month" and self.label[5:].isdigit() and 1 <= int(self.label[5:]) <= 12)
                or (self.kind == "quarter" and self.label[5] == "Q" and self.label[6] in "1234")
            )
        )
        if not ok:
            raise ValueError(f"bad {self.kind} label: {self.label!r}")


@dataclass(frozen=True)
class FilterConfig:
    """Which tweets survive: retweet removal, English-only, and the
    stop-word-ratio heuristic applied when a tweet carries no lang tag."""

    drop_retweets: bool = True
    english_only: bool = True
    stopword_ratio_threshold: float = 0.10

    def __post_init__(self):
        if not 0.0 <= self.stopword_ratio_threshold <= 1.0:
            raise ValueError("stopword_ratio_threshold must be in [0, 1]")


def _parse_timestamp(raw: str) -> datetime:
    """ISO-8601-ish timestamp to an aware UTC datetime, truncated to seconds."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def _text_lines(stream):
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding="utf-8")


def _dedupe(records, rejects):
    """Keep the last occurrence of each tweet id; earlier ones are rejects."""
    by_id = {}
    for line_no, tweet in records:
        if tweet.id in by_id:
            rejects.append(RejectRecord(line=by_id[tweet.id][0], reason="duplicate id"))
        by_id[tweet.id] = (line_no, tweet)
    rejects.sort(key=lambda r: r.line)
    return [tweet for _, tweet in by_id.values()]


def parse_jsonl(stream, source: str = "jsonl") -> tuple[Corpus, list[RejectRecord]]:
    """Parse a JSONL byte stream into a Corpus plus per-line rejects.

    Required fields: id, created_at, text. is_retweet defaults to False,
    lang to absent. Extra fields (retweet counts, likes, ...) are ignored.
    """
    records = []
    rejects = []
    for line_no, line in enumerate(_text_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            rejects.append(RejectRecord(line=line_no, reason="parse"))
            continue
        if not isinstance(obj, dict):
            rejects.append(RejectRecord(line=line_no, reason="parse"))
            continue
        missing = [k for k in ("id", "created_at", "text") if k not in obj]
        if missing:
            rejects.append(RejectRecord(line=line_no, reason=f"missing {missing[0]}"))
            continue
        raw_id = obj["id"]
        if isinstance(raw_id, int):
            raw_id = str(raw_id)
        if not isinstance(raw_id, str) or not raw_id:
            rejects.append(RejectRecord(line=line_no, reason="bad id"))
            continue
        if not isinstance(obj["text"], str):
            rejects.append(RejectRecord(line=line_no, reason="bad text"))
            continue
        try:
            created = _parse_timestamp(str(obj["created_at"]))
        except ValueError:
            rejects.append(RejectRecord(line=line_no, reason="bad created_at"))
            continue
        is_retweet = obj.get("is_retweet", False)
        if not isinstance(is_retweet, bool):
            rejects.append(RejectRecord(line=line_no, reason="bad is_retweet"))
            continue
        lang = obj.get("lang")
        if lang is not None and not isinstance(lang, str):
            rejects.append(RejectRecord(line=line_no, reason="bad lang"))
            continue
        records.append(
            (line_no, Tweet(id=raw_id, created_at=created, text=obj["text"], is_retweet=is_retweet,
                            lang=lang.lower() if lang else None))
        )
    tweets = _dedupe(records, rejects)
    return Corpus.build(tweets, source=source), rejects


def parse_tta_csv(stream, column_map: dict | None = None, source: str = "csv") -> tuple[Corpus, list[RejectRecord]]:
    """Parse an archive CSV (header row first) into a Corpus plus rejects.

    column_map assigns the roles id/text/created_at/is_retweet to header
    names; defaults match the Trump Twitter Archive export. The archive
    carries no language field, so lang is absent for every row.
    """
    roles = dict(TTA_COLUMNS)
    roles.update(column_map or {})
    reader = csv.reader(_text_lines(stream))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV: no header row")
    positions = {}
    for role, name in roles.items():
        if name not in header:
            raise ValueError(f"CSV header missing column {name!r} for role {role!r}")
        positions[role] = header.index(name)
    need = max(positions.values()) + 1

    records = []
    rejects = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < need:
            rejects.append(RejectRecord(line=line_no, reason="row shape"))
            continue
        raw_id = row[positions["id"]].strip()
        if not raw_id:
            rejects.append(RejectRecord(line=line_no, reason="bad id"))
            continue
        try:
            created = _parse_timestamp(row[positions["created_at"]])
        except ValueError:
            rejects.append(RejectRecord(line=line_no, reason="bad created_at"))
            continue
        is_retweet = row[positions["is_retweet"]].strip().lower() in _TRUTHY
        records.append(
            (line_no, Tweet(id=raw_id, created_at=created, text=row[positions["text"]],
                            is_retweet=is_retweet, lang=None))
        )
    tweets = _dedupe(records, rejects)
    return Corpus.build(tweets, source=source), rejects


def tweet_to_json(tweet: Tweet) -> str:
    """One JSONL line for a tweet, stable key order, lang omitted when absent."""
    obj = {
        "id": tweet.id,
        "created_at": tweet.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "text": tweet.text,
        "is_retweet": tweet.is_retweet,
    }
    if tweet.lang is not None:
        obj["lang"] = tweet.lang
    return json.dumps(obj, ensure_ascii=False)


def write_jsonl(corpus: Corpus, path) -> None:
    """Serialize a corpus in the same JSONL schema parse_jsonl reads."""
    with open(path, "w", encoding="utf-8") as f:
        for tweet in corpus:
            f.write(tweet_to_json(tweet) + "\n")


def _looks_english(text: str, stopwords: StopWordList, threshold: float) -> bool:
    tokens = tokenize(text)
    if not tokens:
        return False
    hits = sum(1 for tok in tokens if tok in stopwords.words)
    return hits / len(tokens) >= threshold


def filter_corpus(c: Corpus, cfg: FilterConfig, stopwords: StopWordList) -> Corpus:
    """Drop retweets and non-English tweets, preserving order.

    Tweets with an explicit lang tag pass only if it is "en"; untagged
    tweets pass the stop-word-ratio heuristic (zero-token texts fail it).
    """
    kept = []
    for tweet in c:
        if cfg.drop_retweets and tweet.is_retweet:
            continue
        if cfg.english_only:
            if tweet.lang is not None:
                if tweet.lang != "en":
                    continue
            elif not _looks_english(tweet.text, stopwords, cfg.stopword_ratio_threshold):
                continue
        kept.append(tweet)
    return Corpus(tweets=tuple(kept), source=c.source)


def _bucket_label(dt: datetime, kind: str) -> str:
    if kind == "month":
        return f"{dt.year:04d}-{dt.month:02d}"
    return f"{dt.year:04d}-Q{(dt.month - 1) // 3 + 1}"


def bucket_by_period(c: Corpus, kind: str) -> dict[BucketKey, Corpus]:
    """Partition a corpus into calendar buckets (UTC). Empty buckets are
    never materialized; bucket order is ascending by label."""
    if kind not in ("month", "quarter"):
        raise ValueError(f"unknown period kind: {kind!r}")
    groups: dict[str, list[Tweet]] = {}
    for tweet in c:
        groups.setdefault(_bucket_label(tweet.created_at, kind), []).append(tweet)
    return {
        BucketKey(kind=kind, label=label): Corpus(tweets=tuple(groups[label]), source=c.source)
        for label in sorted(groups)
    }
