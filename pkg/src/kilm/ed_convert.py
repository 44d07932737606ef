"""Converter for public entity-disambiguation benchmark exports.

The widely mirrored candidate files for the six newswire/web benchmarks
ship one JSON object per line with the mention wrapped in
``[START_ENT] ... [END_ENT]`` markers, candidate entity titles, and the
gold answer. Candidate descriptions are not in those files; they come
from this pipeline's own knowledge table, so conversion needs both.
"""

from __future__ import annotations

from .errors import PromptFormatError
from .knowledge import KnowledgeTable

START_ENT = "[START_ENT]"
END_ENT = "[END_ENT]"


def convert_benchmark_record(record: dict, table: KnowledgeTable) -> dict | None:
    """One benchmark line -> the documented ED instance row, or None when
    no candidate has a description to score."""
    raw = record.get("input") or ""
    i = raw.find(START_ENT)
    j = raw.find(END_ENT)
    if i < 0 or j < i:
        raise PromptFormatError(f"record {record.get('id')!r} lacks mention markers")
    before = raw[:i]
    mention = raw[i + len(START_ENT) : j].strip()
    after = raw[j + len(END_ENT) :]
    context = before + mention + after

    gold_title = None
    output = record.get("output") or []
    if output and isinstance(output[0], dict):
        gold_title = output[0].get("answer")
    elif output and isinstance(output[0], str):
        gold_title = output[0]

    candidates = []
    for cand in record.get("candidates") or []:
        title = cand["title"] if isinstance(cand, dict) else str(cand)
        entry = table.lookup(title)
        if entry is None:
            continue
        candidates.append({"title": table.resolve(title), "description": entry.description})
    if not candidates:
        return None

    return {
        "instance_id": str(record.get("id") or ""),
        "context": context,
        "mention": {"text": mention, "start": len(before), "end": len(before) + len(mention)},
        "candidates": candidates,
        "gold_title": table.resolve(gold_title) if gold_title else None,
        "in_kb": bool(gold_title) and gold_title in table,
    }
