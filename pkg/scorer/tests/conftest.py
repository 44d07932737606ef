"""Builds a tiny randomly initialized encoder-decoder checkpoint on disk.

A real pretrained checkpoint is not required for protocol-level testing:
an un-trained base model produces valid (if knowledge-free) scores, which
is exactly what the adapter contract promises before knowledge injection.
"""

from __future__ import annotations

import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import BartConfig, BartForConditionalGeneration, PreTrainedTokenizerFast

TEST_WORDS = (
    "the a an is was in of and near river city county tributary ohio indiana "
    "wabash joker fictional character dc universe comic book series published "
    "supervillain team state north south bridge valley lake region capital "
    "village mountain island politician actor painter writer singer company"
).split()


def build_tiny_model(target_dir: str, seed: int = 0) -> str:
    vocab = {"<s>": 0, "<pad>": 1, "</s>": 2, "<unk>": 3, "<mask>": 4}
    for word in TEST_WORDS:
        vocab.setdefault(word, len(vocab))
    backend = Tokenizer(models.WordLevel(vocab, unk_token="<unk>"))
    backend.pre_tokenizer = pre_tokenizers.Whitespace()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend,
        bos_token="<s>",
        eos_token="</s>",
        unk_token="<unk>",
        pad_token="<pad>",
        mask_token="<mask>",
    )
    torch.manual_seed(seed)
    config = BartConfig(
        vocab_size=len(tokenizer),
        d_model=32,
        encoder_layers=1,
        decoder_layers=1,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=64,
        decoder_ffn_dim=64,
        max_position_embeddings=256,
        pad_token_id=1,
        bos_token_id=0,
        eos_token_id=2,
        decoder_start_token_id=2,
        forced_bos_token_id=0,
    )
    model = BartForConditionalGeneration(config)
    tokenizer.save_pretrained(target_dir)
    model.save_pretrained(target_dir)
    return target_dir


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> str:
    return build_tiny_model(str(tmp_path_factory.mktemp("tiny-model")))
