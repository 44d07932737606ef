"""Model-backed implementation of the scorer protocol verbs.

score:    natural-log probabilities of each continuation token under
          teacher forcing, conditioned on the encoder text and the
          decoder prefix.
generate: greedy decoding from the decoder prefix until the stop token,
          end-of-sequence, or the token budget.
tokenize: token count of a text under the model tokenizer.

The structural marker tokens are registered as atomic vocabulary items at
load time (with randomly initialized embeddings when the checkpoint lacks
them, matching a pre-injection base model: protocol-valid, knowledge-free).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

SPECIAL_TOKEN_SURFACES = (
    "<ent>",
    "</ent>",
    "<ent_desc>",
    "</ent_desc>",
    "<sep>",
    "<mask>",
    "</s></s>",
)

DEFAULT_MAX_NEW_TOKENS = 64


@dataclass
class AdapterConfig:
    model: str
    device: str = "cpu"
    max_length: int = 1024
    batch_size: int = 8
    seed: int = 0


class SequenceTooLong(Exception):
    pass


class Adapter:
    def __init__(self, config: AdapterConfig):
        self.config = config
        torch.manual_seed(config.seed)
        self.tokenizer = AutoTokenizer.from_pretrained(config.model)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(config.model)
        missing = [
            tok
            for tok in SPECIAL_TOKEN_SURFACES
            if self.tokenizer.convert_tokens_to_ids(tok)
            in (None, self.tokenizer.unk_token_id)
            or len(self.tokenizer.encode(tok, add_special_tokens=False)) != 1
        ]
        if missing:
            self.tokenizer.add_special_tokens({"additional_special_tokens": missing})
            self.model.resize_token_embeddings(len(self.tokenizer))
        self.model.to(config.device)
        self.model.eval()
        start = self.model.config.decoder_start_token_id
        if start is None:
            start = self.model.config.eos_token_id
        self._decoder_start = [start]
        bos = getattr(self.model.config, "forced_bos_token_id", None)
        if bos is not None:
            self._decoder_start.append(bos)

    # -------------------------------------------------------------- encoding

    def _encode_input(self, text: str) -> torch.Tensor:
        ids = self.tokenizer.encode(text, add_special_tokens=True)
        if len(ids) > self.config.max_length:
            raise SequenceTooLong(
                f"encoder input of {len(ids)} tokens exceeds the {self.config.max_length} cap"
            )
        return torch.tensor([ids], device=self.config.device)

    def _encode_fragment(self, text: str) -> list[int]:
        return self.tokenizer.encode(text, add_special_tokens=False) if text else []

    # ----------------------------------------------------------------- verbs

    def token_count(self, text: str) -> int:
        return len(self._encode_fragment(text))

    @torch.no_grad()
    def score(self, encoder_text: str, decoder_prefix: str, continuation: str) -> list[float]:
        continuation_ids = self._encode_fragment(continuation)
        if not continuation_ids:
            return []
        encoder_ids = self._encode_input(encoder_text)
        prefix_ids = self._decoder_start + self._encode_fragment(decoder_prefix)
        decoder_ids = prefix_ids + continuation_ids
        if len(decoder_ids) > self.config.max_length:
            raise SequenceTooLong(
                f"decoder input of {len(decoder_ids)} tokens exceeds the "
                f"{self.config.max_length} cap"
            )
        # logits[k] is the next-token distribution after decoder_ids[: k + 1]
        logits = self.model(
            input_ids=encoder_ids,
            decoder_input_ids=torch.tensor([decoder_ids[:-1]], device=self.config.device),
        ).logits[0]
        logprobs = torch.log_softmax(logits.float(), dim=-1)
        out = []
        for position, token_id in enumerate(continuation_ids):
            step = len(prefix_ids) - 1 + position
            out.append(float(logprobs[step, token_id]))
        return out

    @torch.no_grad()
    def generate(
        self,
        encoder_text: str,
        decoder_prefix: str,
        stop_token: str | None,
        max_new_tokens: int | None,
    ) -> str:
        encoder_ids = self._encode_input(encoder_text)
        decoder_ids = list(self._decoder_start) + self._encode_fragment(decoder_prefix)
        budget = DEFAULT_MAX_NEW_TOKENS if max_new_tokens is None else max_new_tokens
        stop_id = None
        if stop_token is not None:
            as_ids = self._encode_fragment(stop_token)
            if len(as_ids) == 1:
                stop_id = as_ids[0]
        new_ids: list[int] = []
        encoder_out = None
        for _ in range(budget):
            if len(decoder_ids) >= self.config.max_length:
                break
            outputs = self.model(
                input_ids=encoder_ids,
                decoder_input_ids=torch.tensor([decoder_ids], device=self.config.device),
                encoder_outputs=encoder_out,
            )
            encoder_out = (outputs.encoder_last_hidden_state,)
            next_id = int(outputs.logits[0, -1].argmax())
            if next_id == self.model.config.eos_token_id or (
                stop_id is not None and next_id == stop_id
            ):
                break
            decoder_ids.append(next_id)
            new_ids.append(next_id)
            if stop_id is None and stop_token is not None:
                text = self.tokenizer.decode(new_ids, skip_special_tokens=False)
                if stop_token in text:
                    return text[: text.index(stop_token)].strip()
        return self.tokenizer.decode(new_ids, skip_special_tokens=False).strip()

    # -------------------------------------------------------------- protocol

    def handle(self, request: dict) -> dict:
        rid = request.get("id", "")
        verb = request.get("verb")
        try:
            if verb == "score":
                return {
                    "id": rid,
                    "token_logprobs": self.score(
                        request.get("encoder_text", ""),
                        request.get("decoder_prefix", ""),
                        request.get("continuation", ""),
                    ),
                }
            if verb == "generate":
                return {
                    "id": rid,
                    "generated_text": self.generate(
                        request.get("encoder_text", ""),
                        request.get("decoder_prefix", ""),
                        request.get("stop_token"),
                        request.get("max_new_tokens"),
                    ),
                }
            if verb == "tokenize":
                return {"id": rid, "token_count": self.token_count(request.get("text", ""))}
            return {"id": rid, "error": f"unknown verb {verb!r}"}
        except SequenceTooLong as exc:
            return {"id": rid, "error": str(exc)}
        except Exception as exc:  # a bad request must never kill the loop
            return {"id": rid, "error": f"{type(exc).__name__}: {exc}"}


def serve(adapter: Adapter, stdin=None, stdout=None) -> None:
    """Line-oriented request loop: every input line gets exactly one
    response line; stdout carries nothing else."""
    import json

    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            stdout.write(json.dumps({"id": "", "error": f"malformed request: {exc}"}) + "\n")
            stdout.flush()
            continue
        response = adapter.handle(request)
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
        stdout.flush()
