"""Pipelined JSON-lines client for external scorer processes.

Requests go to the child's stdin, responses come back on stdout and are
matched by id, in any order, with a bounded number left unanswered at a
time. A crashed or hung child turns into per-request error responses;
garbage on stdout is a protocol error.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
from typing import Sequence

from ..errors import ScorerError
from .protocol import ScoreRequest, ScoreResponse

_EOF = object()


class SubprocessScorer:
    """Launches ``command`` per batch and speaks the wire protocol to it."""

    def __init__(self, command: Sequence[str], max_inflight: int = 32, timeout: float = 120.0):
        if not command:
            raise ScorerError("empty scorer command")
        self.command = list(command)
        self.max_inflight = max(1, max_inflight)
        self.timeout = timeout  # seconds without any response before giving up

    def run(self, requests: Sequence[ScoreRequest]) -> list[ScoreResponse]:
        ids = [r.id for r in requests]
        if len(set(ids)) != len(ids):
            raise ScorerError("duplicate request ids in one batch")
        try:
            proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise ScorerError(f"cannot launch scorer {self.command!r}: {exc}") from exc

        lines: queue.Queue = queue.Queue()

        def _reader() -> None:
            for line in proc.stdout:
                lines.put(line)
            lines.put(_EOF)

        reader = threading.Thread(target=_reader, daemon=True)
        reader.start()

        results: dict[str, ScoreResponse] = {}
        pending: set[str] = set()
        send_iter = iter(requests)
        sent_all = False
        eof = False
        protocol_fault: ScorerError | None = None

        def _drain(block: bool) -> bool:
            """Consume one stdout line; returns False on EOF/timeout."""
            nonlocal eof, protocol_fault
            try:
                line = lines.get(timeout=self.timeout) if block else lines.get_nowait()
            except queue.Empty:
                if block:
                    eof = True  # idle timeout: treat like a dead child
                return False
            if line is _EOF:
                eof = True
                return False
            text = line.strip()
            if not text:
                return True
            try:
                payload = json.loads(text)
                response = ScoreResponse.from_dict(payload)
            except (json.JSONDecodeError, ScorerError) as exc:
                protocol_fault = ScorerError(f"malformed scorer response line: {text!r} ({exc})")
                eof = True
                return False
            if response.id in results:
                protocol_fault = ScorerError(f"duplicate response for id {response.id!r}")
                eof = True
                return False
            results[response.id] = response
            pending.discard(response.id)
            return True

        try:
            while not eof and (not sent_all or pending):
                while not sent_all and len(pending) < self.max_inflight:
                    req = next(send_iter, None)
                    if req is None:
                        sent_all = True
                        proc.stdin.close()
                        break
                    pending.add(req.id)
                    try:
                        proc.stdin.write(json.dumps(req.to_dict(), ensure_ascii=False) + "\n")
                        proc.stdin.flush()
                    except (BrokenPipeError, OSError):
                        eof = True
                        break
                if pending or not sent_all:
                    _drain(block=True)
        finally:
            if proc.poll() is None:
                proc.kill()
            proc.wait()
            while _drain(block=False):
                pass

        if protocol_fault is not None:
            raise protocol_fault

        unanswered = [r.id for r in requests if r.id not in results and r.id in pending]
        never_sent = [r.id for r in requests if r.id not in results and r.id not in pending]
        if unanswered or never_sent:
            reason = (
                f"scorer exited (code {proc.returncode}) or timed out before answering: "
                f"unanswered={unanswered[:10]}{'…' if len(unanswered) > 10 else ''}"
            )
            for rid in unanswered + never_sent:
                results[rid] = ScoreResponse(id=rid, error=reason)
        return [results[r.id] for r in requests]
