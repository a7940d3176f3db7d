from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_corpus_path():
    return DATA_DIR / "fixture_corpus.jsonl"


@pytest.fixture(scope="session")
def fixture_matrix_path():
    return DATA_DIR / "fixture_matrix.csv"


@pytest.fixture(scope="session")
def fixture_corpus(fixture_corpus_path):
    from kwnet.corpus import parse_jsonl

    with open(fixture_corpus_path, "rb") as f:
        corpus, rejects = parse_jsonl(f, source="fixture")
    assert rejects == []
    return corpus


@pytest.fixture(scope="session")
def fixture_graph(fixture_corpus):
    from kwnet.cooccur import build_graph
    from kwnet.corpus import bucket_by_period
    from kwnet.lexicon import default_stopwords, keyword_frequencies, top_k

    sw = default_stopwords()
    (key, bucket), = bucket_by_period(fixture_corpus, "month").items()
    freq = keyword_frequencies(bucket, sw, key=key)
    return build_graph(bucket, top_k(freq), sw, key=key), freq
