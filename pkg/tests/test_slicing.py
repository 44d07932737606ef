import pytest

from kilm.articles import ParsedArticle
from kilm.errors import ConfigError
from kilm.slicing import slice_documents
from kilm.wikitext import LinkSpan


def _article_of_words(n_words, links=(), summary_end=None):
    words = [f"w{i}" for i in range(n_words)]
    text = " ".join(words)
    return ParsedArticle(
        title="Doc",
        page_id=1,
        clean_text=text,
        links=list(links),
        short_description="a description here",
        desc_source="template",
        summary_end=len(text) if summary_end is None else summary_end,
    )


def test_1030_tokens_stride_512_gives_512_512_6():
    slices = slice_documents(_article_of_words(1030), stride=512)
    assert [len(s.tokens) for s in slices] == [512, 512, 6]
    assert [s.slice_index for s in slices] == [0, 1, 2]


def test_partition_reproduces_token_stream_exactly():
    article = _article_of_words(1030)
    slices = slice_documents(article, stride=512)
    rebuilt = [t for s in slices for t in s.tokens]
    assert rebuilt == article.clean_text.split()


def test_boundary_crossing_mention_dropped_from_both_windows():
    # tokens w0..: mention covering tokens 510..513 crosses the 512 boundary
    words = [f"w{i}" for i in range(1030)]
    text = " ".join(words)
    start = text.index("w510")
    end = text.index("w514") - 1
    surface = text[start:end]
    article = _article_of_words(1030, links=[LinkSpan(start, end, surface, "Entity")])
    slices = slice_documents(article, stride=512)
    assert all(not s.mentions for s in slices)


def test_mention_inside_window_is_token_indexed():
    text = "alpha beta gamma"
    start = text.index("beta")
    article = ParsedArticle(
        title="Doc",
        page_id=1,
        clean_text=text,
        links=[LinkSpan(start, start + 4, "beta", "Beta")],
        short_description=None,
        desc_source=None,
        summary_end=len(text),
    )
    slices = slice_documents(article, stride=512)
    mention = slices[0].mentions[0]
    assert (mention.token_start, mention.token_end) == (1, 2)
    assert slices[0].tokens[mention.token_start : mention.token_end] == ["beta"]


def test_primary_mode_excludes_links_past_summary_end():
    words = [f"w{i}" for i in range(100)]
    text = " ".join(words)
    summary_end = text.index("w50")
    start = text.index("w70")
    article = _article_of_words(
        100, links=[LinkSpan(start, start + 3, "w70", "Entity")], summary_end=summary_end
    )
    primary = slice_documents(article, stride=512, mode="primary")
    upscaling = slice_documents(article, stride=512, mode="upscaling")
    assert all(not s.mentions for s in primary)
    assert sum(len(s.tokens) for s in primary) == 50
    assert any(s.mentions for s in upscaling)
    assert sum(len(s.tokens) for s in upscaling) == 100


def test_stride_minimum_enforced():
    with pytest.raises(ConfigError):
        slice_documents(_article_of_words(10), stride=8)


def test_slice_dict_round_trip(joker_article):
    from kilm.slicing import DocumentSlice

    sl = slice_documents(joker_article, stride=512)[0]
    assert DocumentSlice.from_dict(sl.to_dict()).to_dict() == sl.to_dict()
