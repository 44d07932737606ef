"""kilm: knowledge-infilled corpus compilation and zero-shot knowledge probing.

The pipeline turns a Wikipedia XML dump into annotated seq2seq training
samples (entity markers, inserted short descriptions, span masking, loss
weights) and builds structured prompts whose perplexity under a pluggable
scorer ranks entity candidates or elicits entity knowledge.
"""

__version__ = "0.1.0"
