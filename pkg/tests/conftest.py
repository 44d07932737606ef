"""Shared fixtures: the Joker comic article, dump XML builders, and a
deterministic synthetic corpus generator."""

from __future__ import annotations

import random
from xml.sax.saxutils import escape

import pytest

from kilm.articles import parse_article
from kilm.dump import RawPage
from kilm.jsonl import write_jsonl
from kilm.knowledge import KnowledgeTable
from kilm.slicing import slice_documents

JOKER_TITLE = "The Joker"
JOKER_WIKITEXT = (
    "'''The Joker''' is a comic book series published by [[DC Comics]] starring "
    "the supervillain the [[Joker (character)|Joker]]. It ran for nine issues "
    "from May–June 1975 to Sep.–Oct. 1976."
)
JOKER_ENTITY = "Joker (character)"
JOKER_DESC = "Fictional character throughout the DC Universe"
DC_TITLE = "DC Comics"
DC_BODY = (
    "'''DC Comics, Inc.''' is American comic book publisher and the flagship unit "
    "of DC Entertainment, a subsidiary of Warner Bros. Discovery. Its first "
    "publication appeared in 1934."
)
DC_FIRST_SENTENCE = (
    "DC Comics, Inc. is American comic book publisher and the flagship unit "
    "of DC Entertainment, a subsidiary of Warner Bros. Discovery."
)


def make_dump(pages: list[dict]) -> bytes:
    """Minimal pages-articles export. Page dicts: title, id, text, [redirect]."""
    parts = [
        '<mediawiki xmlns="http://www.mediawiki.org/xml/export-0.10/" version="0.10">',
        "<siteinfo><sitename>fixture</sitename></siteinfo>",
    ]
    for page in pages:
        parts.append("<page>")
        parts.append(f"<title>{escape(page['title'])}</title>")
        parts.append(f"<ns>{page.get('ns', 0)}</ns>")
        parts.append(f"<id>{page['id']}</id>")
        if page.get("redirect"):
            parts.append(f'<redirect title="{escape(page["redirect"], {chr(34): "&quot;"})}" />')
        parts.append("<revision><id>1</id>")
        parts.append(f"<text>{escape(page.get('text', ''))}</text>")
        parts.append("</revision></page>")
    parts.append("</mediawiki>")
    return "\n".join(parts).encode("utf-8")


@pytest.fixture()
def joker_article():
    return parse_article(RawPage(JOKER_TITLE, 1, JOKER_WIKITEXT, False))


@pytest.fixture()
def joker_table():
    table = KnowledgeTable()
    table.add(JOKER_ENTITY, JOKER_DESC, "template")
    return table


@pytest.fixture()
def joker_slice(joker_article):
    slices = slice_documents(joker_article, stride=512)
    assert len(slices) == 1
    return slices[0]


@pytest.fixture()
def joker_corpus_dir(tmp_path, joker_slice, joker_table):
    """Ingest-shaped corpus directory holding just the Joker article."""
    corpus = tmp_path / "corpus"
    write_jsonl(corpus / "slices.jsonl", [joker_slice.to_dict()])
    write_jsonl(corpus / "knowledge_table.jsonl", joker_table.iter_rows())
    return corpus


@pytest.fixture()
def synthetic_slices():
    """Slices + table for a small deterministic multi-article corpus."""
    import dataclasses
    import io

    from kilm.dump import parse_dump
    from kilm.knowledge import build_knowledge_table

    pages = list(parse_dump(io.BytesIO(synthetic_dump(n_articles=20, seed=3))))
    articles = [parse_article(p) for p in pages if not p.is_redirect]
    table = build_knowledge_table(articles, redirects={})
    slices = []
    for article in articles:
        for sl in slice_documents(article, stride=128):
            sl.mentions = [
                dataclasses.replace(m, entity=table.resolve(m.entity)) for m in sl.mentions
            ]
            slices.append(sl)
    return slices, table


_WORDS = (
    "empire river guitar theory harvest lantern meadow copper signal tower "
    "garden motive canyon hammer tide planet column summit velvet circuit "
    "saddle timber sonnet meridian anchor quarry lattice ember compass fjord"
).split()


def synthetic_dump(n_articles: int = 200, seed: int = 13, words_per_paragraph: int = 160) -> bytes:
    """Deterministic dump whose articles cross-link each other.

    Roughly 80% of the articles carry a description template; the rest
    fall back to their first sentence. Each summary runs two paragraphs
    so default-stride slicing yields one to two windows per article.
    """
    rng = random.Random(seed)
    titles = [f"Topic {i:03d}" for i in range(n_articles)]
    pages = []
    for i, title in enumerate(titles):
        body = []
        if rng.random() < 0.8:
            desc_words = " ".join(rng.choices(_WORDS, k=rng.randint(4, 12)))
            body.append("{{Short description|%s}}" % desc_words)
        for _ in range(2):
            para = []
            while len(para) < words_per_paragraph:
                if rng.random() < 0.06:
                    target = titles[rng.randrange(n_articles)]
                    if rng.random() < 0.5:
                        para.append(f"[[{target}]]")
                    else:
                        para.append(f"[[{target}|{rng.choice(_WORDS)}]]")
                else:
                    para.append(rng.choice(_WORDS))
                if rng.random() < 0.08:
                    para[-1] += "."
            body.append(" ".join(para) + ".")
        body.append("== Further notes ==")
        body.append(" ".join(rng.choices(_WORDS, k=40)) + ".")
        pages.append({"title": title, "id": i + 1, "text": "\n\n".join(body)})
    return make_dump(pages)
