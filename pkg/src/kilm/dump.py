"""Streaming reader for pages-articles XML exports (plain or bzip2)."""

from __future__ import annotations

import bz2
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import BinaryIO, Iterator

from .errors import DumpParseError

_BZ2_MAGIC = b"BZh"


@dataclass(frozen=True)
class RawPage:
    title: str
    page_id: int
    wikitext: str
    is_redirect: bool
    redirect_target: str | None = None


class _CountingReader(io.RawIOBase):
    """Wraps a binary stream and tracks how many bytes were consumed."""

    def __init__(self, raw: BinaryIO):
        self._raw = raw
        self.bytes_read = 0

    def readable(self) -> bool:
        return True

    def readinto(self, b) -> int:
        chunk = self._raw.read(len(b))
        n = len(chunk)
        b[:n] = chunk
        self.bytes_read += n
        return n


def _open_stream(source) -> tuple[BinaryIO, _CountingReader]:
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        raw: BinaryIO = open(source, "rb")
    else:
        raw = source
    counting = _CountingReader(raw)
    buffered = io.BufferedReader(counting)
    magic = buffered.peek(3)[:3]
    if magic == _BZ2_MAGIC:
        return bz2.BZ2File(buffered), counting
    return buffered, counting


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _find_child(elem, name: str):
    for child in elem:
        if _local(child.tag) == name:
            return child
    return None


def parse_dump(source) -> Iterator[RawPage]:
    """Yield every namespace-0 page of a dump, in document order.

    ``source`` is a path or a binary stream; bzip2 compression is detected
    from the magic bytes. Memory use is bounded by one page at a time.
    Malformed XML raises :class:`DumpParseError` with the byte offset;
    a truncated stream raises only after the last complete page was yielded.
    """
    stream, counting = _open_stream(source)
    root = None
    try:
        for event, elem in ET.iterparse(stream, events=("start", "end")):
            if event == "start":
                if root is None:
                    root = elem
                continue
            if _local(elem.tag) != "page":
                continue
            ns_elem = _find_child(elem, "ns")
            if ns_elem is not None and (ns_elem.text or "").strip() != "0":
                elem.clear()
                continue
            title_elem = _find_child(elem, "title")
            id_elem = _find_child(elem, "id")
            if title_elem is None or not (title_elem.text or "").strip():
                elem.clear()
                continue
            revision = _find_child(elem, "revision")
            text_elem = _find_child(revision, "text") if revision is not None else None
            wikitext = (text_elem.text or "") if text_elem is not None else ""
            redirect_elem = _find_child(elem, "redirect")
            redirect_target = None
            if redirect_elem is not None:
                redirect_target = redirect_elem.get("title")
            elif wikitext.lstrip()[:9].upper() == "#REDIRECT":
                rest = wikitext.lstrip()[9:]
                lo = rest.find("[[")
                hi = rest.find("]]", lo + 2)
                if lo >= 0 and hi > lo:
                    redirect_target = rest[lo + 2 : hi].split("|", 1)[0].split("#", 1)[0].strip()
            yield RawPage(
                title=title_elem.text.strip(),
                page_id=int((id_elem.text or "0").strip()) if id_elem is not None else 0,
                wikitext=wikitext,
                is_redirect=redirect_target is not None,
                redirect_target=redirect_target,
            )
            elem.clear()
            if root is not None:
                root.clear()
    except ET.ParseError as exc:
        raise DumpParseError(
            f"malformed dump XML near byte {counting.bytes_read}: {exc}",
            byte_offset=counting.bytes_read,
        ) from exc
