"""Entity title -> short description lookup table with redirect resolution."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .articles import ParsedArticle

log = logging.getLogger(__name__)


def normalize_title(title: str) -> str:
    t = " ".join(title.replace("_", " ").split())
    if not t:
        return t
    return t[0].upper() + t[1:]


@dataclass(frozen=True)
class KnowledgeEntry:
    description: str
    source: str


@dataclass
class KnowledgeTable:
    entries: dict[str, KnowledgeEntry] = field(default_factory=dict)
    redirects: dict[str, str] = field(default_factory=dict)
    conflicts: int = 0
    skipped: int = 0

    def resolve(self, title: str) -> str:
        """Canonical title for ``title``, following redirects (cycle-safe)."""
        t = normalize_title(title)
        seen = {t}
        while t in self.redirects:
            t = normalize_title(self.redirects[t])
            if t in seen:
                break
            seen.add(t)
        return t

    def lookup(self, title: str) -> KnowledgeEntry | None:
        return self.entries.get(self.resolve(title))

    def describe(self, title: str) -> str | None:
        entry = self.lookup(title)
        return entry.description if entry else None

    def __contains__(self, title: str) -> bool:
        return self.resolve(title) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def iter_rows(self) -> Iterator[dict]:
        for entity, entry in self.entries.items():
            yield {"entity": entity, "description": entry.description, "source": entry.source}

    @classmethod
    def from_rows(cls, rows: Iterable[dict], redirects: dict[str, str] | None = None) -> "KnowledgeTable":
        table = cls(redirects=dict(redirects or {}))
        for row in rows:
            table.add(row["entity"], row["description"], row.get("source", "template"))
        return table

    def add(self, entity: str, description: str, source: str) -> None:
        key = normalize_title(entity)
        if key in self.entries:
            self.conflicts += 1
            log.warning("duplicate knowledge entry for %r (first kept)", key)
            return
        self.entries[key] = KnowledgeEntry(description, source)


def build_knowledge_table(
    articles: Iterable[ParsedArticle], redirects: dict[str, str]
) -> KnowledgeTable:
    """One entry per described article; alias titles resolve via ``redirects``.

    Articles without a usable description are skipped and counted; duplicate
    titles keep the first occurrence and count a conflict.
    """
    table = KnowledgeTable(redirects={normalize_title(k): v for k, v in redirects.items()})
    for article in articles:
        if not article.short_description:
            table.skipped += 1
            continue
        table.add(article.title, article.short_description, article.desc_source or "template")
    return table
