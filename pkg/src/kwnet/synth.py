"""Synthetic control corpora: uniform random words, Markov-chain text, and
topic mixtures with known ground truth.

All generators are pure functions of (config, seed) and emit corpora in
the same schema real archives use (lang="en", is_retweet=False), so they
flow through the identical pipeline. Synthetic months are labeled 2020-01
onward.
"""

from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from functools import lru_cache
from importlib import resources

from ._seeds import make_rng
from .corpus import Corpus, Tweet

__all__ = [
    "WordList",
    "MarkovModel",
    "TopicSpec",
    "random_tweets",
    "markov_train",
    "markov_generate",
    "topic_mixture",
    "load_wordlist",
    "default_wordlist",
]

TWEET_SOFT_LIMIT = 280
TWEET_HARD_CAP = 400

_END = None  # end-of-message marker in Markov transition tables


@dataclass(frozen=True)
class WordList:
    """Distinct lowercase words for the uniform random generator."""

    words: tuple[str, ...]
    source: str = ""

    def __post_init__(self):
        if not self.words:
            raise ValueError("word list is empty")
        if len(set(self.words)) != len(self.words):
            raise ValueError("word list has duplicates")
        for w in self.words:
            if not w or w != w.lower() or any(ch.isspace() for ch in w):
                raise ValueError(f"bad word list entry: {w!r}")


@dataclass(frozen=True)
class MarkovModel:
    """Word-level Markov chain with an end-of-message marker.

    transitions maps each observed context (tuple of `order` tokens) to a
    Counter over next tokens, where None marks end of message. starts are
    the distinct observed opening contexts, sorted.
    """

    order: int
    transitions: dict[tuple[str, ...], Counter]
    starts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")


@dataclass(frozen=True)
class TopicSpec:
    """Topic-mixture generator settings; vocabularies are pairwise disjoint
    by construction."""

    topic_count: int
    vocab_per_topic: int
    words_per_tweet: int
    cross_topic_noise: float = 0.0

    def __post_init__(self):
        if self.topic_count < 1 or self.vocab_per_topic < 1 or self.words_per_tweet < 1:
            raise ValueError("topic_count, vocab_per_topic, words_per_tweet must be >= 1")
        if not 0.0 <= self.cross_topic_noise < 1.0:
            raise ValueError("cross_topic_noise must be in [0, 1)")
        if self.topic_count == 1 and self.cross_topic_noise > 0:
            raise ValueError("cross-topic noise needs at least two topics")


def _month_label(index: int) -> tuple[int, int]:
    return 2020 + index // 12, index % 12 + 1


def _make_corpus(month_texts, prefix: str, source: str) -> Corpus:
    tweets = []
    for month_index, texts in enumerate(month_texts):
        year, month = _month_label(month_index)
        start = datetime(year, month, 1, tzinfo=timezone.utc)
        for j, text in enumerate(texts):
            tweets.append(Tweet(
                id=f"{prefix}-{year:04d}-{month:02d}-{j:05d}",
                created_at=start + timedelta(seconds=j),
                text=text,
                is_retweet=False,
                lang="en",
            ))
    return Corpus.build(tweets, source=source)


def random_tweets(wl: WordList, months: int = 6, per_month: int = 100, seed: int = 0) -> Corpus:
    """Pseudo-tweets of uniformly sampled words, capped at 280 characters.

    Word choice ignores popularity and grammar; each tweet keeps appending
    sampled words while the next one still fits, so every tweet has at
    least one word.
    """
    if months < 1 or per_month < 1:
        raise ValueError("months and per_month must be >= 1")
    too_long = [w for w in wl.words if len(w) > TWEET_SOFT_LIMIT]
    if too_long:
        raise ValueError(f"word longer than {TWEET_SOFT_LIMIT} chars: {too_long[0]!r}")
    rng = make_rng(seed)
    n = len(wl.words)
    month_texts = []
    for _ in range(months):
        texts = []
        for _ in range(per_month):
            text = wl.words[int(rng.integers(n))]
            while True:
                nxt = wl.words[int(rng.integers(n))]
                if len(text) + 1 + len(nxt) > TWEET_SOFT_LIMIT:
                    break
                text = text + " " + nxt
            texts.append(text)
        month_texts.append(texts)
    return _make_corpus(month_texts, "rand", source=f"synthetic:random(seed={seed})")


def markov_train(c: Corpus, order: int = 1, sw_ignored=None) -> MarkovModel:
    """Count (context -> next token) transitions over a corpus.

    Generation tokenization is deliberately crude (lowercase + whitespace
    split) and keeps stop words: generated text should look like language.
    Tweets shorter than `order` tokens contribute nothing.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    transitions: dict[tuple[str, ...], Counter] = {}
    starts = set()
    trained = 0
    for tweet in c:
        toks = tweet.text.lower().split()
        if len(toks) < order:
            continue
        trained += 1
        starts.add(tuple(toks[:order]))
        for i in range(order, len(toks)):
            ctx = tuple(toks[i - order:i])
            transitions.setdefault(ctx, Counter())[toks[i]] += 1
        end_ctx = tuple(toks[-order:])
        transitions.setdefault(end_ctx, Counter())[_END] += 1
    if trained == 0:
        raise ValueError("no trainable tweets in corpus")
    return MarkovModel(order=order, transitions=transitions, starts=tuple(sorted(starts)))


def _sample_next(counter: Counter, rng):
    items = sorted(counter.items(), key=lambda kv: (kv[0] is None, kv[0] or ""))
    total = sum(c for _, c in items)
    r = int(rng.integers(total))
    acc = 0
    for tok, count in items:
        acc += count
        if r < acc:
            return tok
    raise AssertionError("unreachable")


def markov_generate(model: MarkovModel, months: int = 6, per_month: int = 100, seed: int = 0) -> Corpus:
    """Generate pseudo-tweets from a trained chain.

    Each tweet opens with a uniformly sampled observed starting context,
    then walks transitions until the end marker. The 280-character limit
    is soft (the token that crosses it still completes), with a hard cap
    of 400 characters.
    """
    if months < 1 or per_month < 1:
        raise ValueError("months and per_month must be >= 1")
    if not model.starts:
        raise ValueError("empty model")
    rng = make_rng(seed)
    month_texts = []
    for _ in range(months):
        texts = []
        for _ in range(per_month):
            tokens = list(model.starts[int(rng.integers(len(model.starts)))])
            text = " ".join(tokens)
            while len(text) > TWEET_HARD_CAP and len(tokens) > 1:
                tokens.pop()
                text = " ".join(tokens)
            text = text[:TWEET_HARD_CAP]
            while len(text) <= TWEET_SOFT_LIMIT and len(tokens) >= model.order:
                ctx = tuple(tokens[-model.order:])
                nxt = _sample_next(model.transitions[ctx], rng)
                if nxt is _END:
                    break
                if len(text) + 1 + len(nxt) > TWEET_HARD_CAP:
                    break
                tokens.append(nxt)
                text = text + " " + nxt
            texts.append(text)
        month_texts.append(texts)
    return _make_corpus(month_texts, "markov", source=f"synthetic:markov(seed={seed})")


def topic_vocabulary(spec: TopicSpec) -> list[tuple[str, ...]]:
    """Deterministic disjoint per-topic vocabularies."""
    return [
        tuple(f"t{t:02d}w{i:03d}" for i in range(spec.vocab_per_topic))
        for t in range(spec.topic_count)
    ]


def topic_mixture(spec: TopicSpec, months: int = 6, per_month: int = 100,
                  seed: int = 0) -> tuple[Corpus, dict[str, int]]:
    """Tweets drawn from one topic each, plus optional cross-topic noise.

    Returns the corpus and the ground-truth keyword -> topic map. With
    zero noise every tweet's words come from exactly one topic.
    """
    if months < 1 or per_month < 1:
        raise ValueError("months and per_month must be >= 1")
    vocab = topic_vocabulary(spec)
    ground_truth = {w: t for t, words in enumerate(vocab) for w in words}
    rng = make_rng(seed)
    t_count, v_count = spec.topic_count, spec.vocab_per_topic
    month_texts = []
    for _ in range(months):
        texts = []
        for _ in range(per_month):
            topic = int(rng.integers(t_count))
            words = []
            for _ in range(spec.words_per_tweet):
                word = vocab[topic][int(rng.integers(v_count))]
                if spec.cross_topic_noise > 0 and rng.random() < spec.cross_topic_noise:
                    other = int(rng.integers(t_count - 1))
                    if other >= topic:
                        other += 1
                    word = vocab[other][int(rng.integers(v_count))]
                words.append(word)
            texts.append(" ".join(words))
        month_texts.append(texts)
    return _make_corpus(month_texts, "topic", source=f"synthetic:topics(seed={seed})"), ground_truth


def load_wordlist(path, source: str | None = None) -> WordList:
    """Read a word file: UTF-8, one word per line, '#' comments; entries
    are lowercased and deduplicated keeping first occurrence."""
    words = []
    seen = set()
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            word = line.strip().lower()
            if not word or word.startswith("#") or word in seen:
                continue
            seen.add(word)
            words.append(word)
    return WordList(words=tuple(words), source=source or str(path))


@lru_cache(maxsize=1)
def default_wordlist() -> WordList:
    """The bundled list of 10,000 common English words."""
    ref = resources.files("kwnet.data").joinpath("wordlist_en.txt")
    with resources.as_file(ref) as path:
        return load_wordlist(path, source="bundled:wordlist_en")
