"""Newline-delimited JSON with stable field order (dict insertion order)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator


def dump_line(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False)


def write_jsonl(path, records: Iterable[dict]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(dump_line(record))
            fh.write("\n")
            count += 1
    return count


def read_jsonl(path) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
