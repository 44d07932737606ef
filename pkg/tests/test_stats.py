from kilm.knowledge import KnowledgeTable
from kilm.slicing import DocumentSlice, MentionSpan
from kilm.stats import corpus_stats


def _slice(idx, entities):
    mentions = [MentionSpan(i, i + 1, e, e) for i, e in enumerate(entities)]
    return DocumentSlice("doc", idx, [f"t{i}" for i in range(max(len(entities), 1))], mentions)


def _table(entries):
    table = KnowledgeTable()
    for entity, desc in entries.items():
        table.add(entity, desc, "template")
    return table


def test_frequency_counts_mentions():
    table = _table({"A": "one two three", "B": "four five"})
    stats = corpus_stats([_slice(0, ["A"]), _slice(1, ["A"]), _slice(2, ["B"])], table)
    assert stats.entity_frequency == {"A": 2, "B": 1}
    assert stats.slice_count == 3


def test_undescribed_entities_not_counted():
    table = _table({"A": "described"})
    stats = corpus_stats([_slice(0, ["A", "Ghost"])], table)
    assert stats.entity_frequency == {"A": 1}


def test_mean_description_words():
    table = _table({"A": " ".join(["w"] * 10), "B": " ".join(["w"] * 17)})
    stats = corpus_stats([], table)
    assert stats.mean_description_words == 13.5


def test_overhead_matches_arithmetic():
    # 81 descriptions of 14 words + 19 of 13 words: mean = 13.81
    entries = {f"E{i}": " ".join(["w"] * (14 if i < 81 else 13)) for i in range(100)}
    stats = corpus_stats([], _table(entries), stride=512)
    assert abs(stats.mean_description_words - 13.81) < 1e-12
    expected = 13.81 / (512 + 13.81)
    assert abs(stats.insertion_overhead - expected) < 1e-12
    assert abs(100 * stats.insertion_overhead - 2.6) <= 0.1  # the ~2.6% figure


def test_stats_dict_shape():
    table = _table({"A": "one two"})
    d = corpus_stats([_slice(0, ["A"])], table).to_dict()
    assert d["distinct_entities"] == 1
    assert d["singleton_entities"] == 1
    assert "insertion_overhead_percent" in d
