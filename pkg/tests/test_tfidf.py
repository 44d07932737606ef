import math
import random
from collections import Counter

import pytest

from kilm.prompts import QAExemplar
from kilm.tfidf import TfidfIndex, tfidf_retrieve

WORDS = "alpha beta gamma delta epsilon zeta eta theta iota kappa".split()


def _pool(n, seed=0):
    rng = random.Random(seed)
    return [
        QAExemplar(" ".join(rng.choices(WORDS, k=rng.randint(3, 9))), f"answer {i}")
        for i in range(n)
    ]


def _brute_force_rank(question, pool):
    """Oracle: explicit vectors over the full vocabulary, naive cosine."""
    def terms(text):
        return Counter(
            "".join(ch for ch in w if ch.isalnum()) for w in text.lower().split()
        )

    n = len(pool)
    df = Counter()
    doc_terms = [terms(ex.question) for ex in pool]
    for t in doc_terms:
        df.update(set(t))
    vocab = sorted(df)
    idf = {w: math.log(n / df[w]) for w in vocab}

    def vector(t):
        return [t.get(w, 0) * idf[w] for w in vocab]

    q = vector(terms(question))
    qn = math.sqrt(sum(x * x for x in q))
    sims = []
    for i, t in enumerate(doc_terms):
        d = vector(t)
        dn = math.sqrt(sum(x * x for x in d))
        dot = sum(a * b for a, b in zip(q, d))
        sims.append(dot / (qn * dn) if qn and dn else 0.0)
    return sorted(range(n), key=lambda i: (-sims[i], i))


def test_singleton_pool():
    pool = [QAExemplar("what is alpha?", "a")]
    assert tfidf_retrieve("alpha?", pool, 1) == pool


def test_k_zero_returns_empty():
    assert tfidf_retrieve("alpha", _pool(5), 0) == []


def test_k_larger_than_pool_returns_everything_ranked():
    pool = _pool(4)
    result = tfidf_retrieve("alpha beta", pool, 10)
    assert sorted(r.answer for r in result) == sorted(p.answer for p in pool)


def test_matches_brute_force_on_100_item_pool():
    pool = _pool(100, seed=42)
    rng = random.Random(7)
    for _ in range(10):
        question = " ".join(rng.choices(WORDS, k=5))
        expected = [pool[i] for i in _brute_force_rank(question, pool)[:5]]
        assert tfidf_retrieve(question, pool, 5) == expected


def test_tie_break_by_pool_order():
    pool = [QAExemplar("same question", f"a{i}") for i in range(4)]
    result = tfidf_retrieve("same question", pool, 4)
    assert [r.answer for r in result] == ["a0", "a1", "a2", "a3"]


def test_query_with_no_known_terms_falls_back_to_pool_order():
    pool = _pool(3)
    result = tfidf_retrieve("zzz qqq", pool, 2)
    assert result == pool[:2]


def test_similarity_permutation_invariance():
    pool = _pool(20, seed=1)
    index = TfidfIndex(pool)
    shuffled = list(pool)
    random.Random(3).shuffle(shuffled)
    index2 = TfidfIndex(shuffled)
    sims1 = dict(zip((p.answer for p in pool), index.similarities("alpha beta gamma")))
    sims2 = dict(zip((p.answer for p in shuffled), index2.similarities("alpha beta gamma")))
    for key in sims1:
        assert sims1[key] == pytest.approx(sims2[key])


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        tfidf_retrieve("q", _pool(2), -1)
