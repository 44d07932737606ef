"""Scorer adapter: serves token log-probabilities, greedy generation and
token counts from a pretrained encoder-decoder model over the JSON-lines
wire protocol (one request object in, one response object out, matched by
id; nothing else on stdout)."""

__version__ = "0.1.0"
