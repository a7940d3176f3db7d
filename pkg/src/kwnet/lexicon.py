"""Tokenization, stop-word removal, and top-K keyword selection.

Tokenizer rules, applied in order: lowercase; delete URLs and @-mentions;
split on whitespace/punctuation but keep internal hyphens, apostrophes and
digits (so "covid-19" stays one token); strip a trailing possessive 's;
drop empty tokens. A leading '#' is punctuation, so hashtag bodies survive
as plain keywords.
"""

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .corpus import BucketKey, Corpus

__all__ = [
    "StopWordList",
    "KeywordFrequency",
    "KeywordSet",
    "tokenize",
    "remove_stopwords",
    "keyword_frequencies",
    "top_k",
    "load_stopwords",
    "default_stopwords",
]

DEFAULT_TOP_K = 100

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_TOKEN_RE = re.compile(r"[^\W_]+(?:['-][^\W_]+)*")


@dataclass(frozen=True)
class StopWordList:
    """Lowercase words excluded from keyword analysis."""

    words: frozenset[str]
    source: str = ""

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower() or any(ch.isspace() for ch in w):
                raise ValueError(f"bad stop word entry: {w!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.words


@dataclass(frozen=True)
class KeywordFrequency:
    """Occurrence counts of keywords within one bucket (multiplicity counts)."""

    counts: dict[str, int]
    bucket: "BucketKey | None" = None

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class KeywordSet:
    """Up to k keywords ordered by (frequency desc, keyword asc)."""

    words: tuple[str, ...]
    k: int = DEFAULT_TOP_K

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if len(self.words) > self.k:
            raise ValueError("more keywords than k")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate keywords")

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.words)}


def tokenize(text: str) -> list[str]:
    """Deterministic tweet tokenizer; empty input gives an empty list."""
    lowered = text.lower().replace("’", "'")
    lowered = _URL_RE.sub(" ", lowered)
    lowered = _MENTION_RE.sub(" ", lowered)
    tokens = []
    for tok in _TOKEN_RE.findall(lowered):
        if tok.endswith("'s"):
            tok = tok[:-2]
        if tok:
            tokens.append(tok)
    return tokens


def remove_stopwords(tokens: list[str], sw: StopWordList) -> list[str]:
    """Order-preserving removal of stop words (tokens must be lowercase)."""
    return [t for t in tokens if t not in sw.words]


def keyword_frequencies(bucket: "Corpus", sw: StopWordList, key: "BucketKey | None" = None) -> KeywordFrequency:
    """Count keyword occurrences across all tweets in a bucket; a word used
    twice in one tweet counts twice."""
    counts: Counter[str] = Counter()
    for tweet in bucket:
        counts.update(remove_stopwords(tokenize(tweet.text), sw))
    return KeywordFrequency(counts=dict(counts), bucket=key)


def top_k(freq: KeywordFrequency, k: int = DEFAULT_TOP_K) -> KeywordSet:
    """The k highest-count keywords, ties broken lexicographically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(freq.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return KeywordSet(words=tuple(w for w, _ in ranked[:k]), k=k)


def load_stopwords(path, source: str | None = None) -> StopWordList:
    """Read a stop-word file: UTF-8, one word per line, '#' comments."""
    words = set()
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            word = line.strip()
            if not word or word.startswith("#"):
                continue
            words.add(word.lower())
    return StopWordList(words=frozenset(words), source=source or str(path))


@lru_cache(maxsize=1)
def default_stopwords() -> StopWordList:
    """The bundled English stop-word list (~180 function words)."""
    ref = resources.files("kwnet.data").joinpath("stopwords_en.txt")
    with resources.as_file(ref) as path:
        return load_stopwords(path, source="bundled:stopwords_en")
