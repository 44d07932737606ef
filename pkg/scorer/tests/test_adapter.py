import math

import pytest

from kilm_scorer.adapter import Adapter, AdapterConfig, SPECIAL_TOKEN_SURFACES


@pytest.fixture(scope="module")
def adapter(tiny_model_dir):
    return Adapter(AdapterConfig(model=tiny_model_dir, max_length=128))


def test_special_tokens_registered_atomically(adapter):
    for surface in SPECIAL_TOKEN_SURFACES:
        assert adapter.token_count(surface) == 1, surface


def test_tokenize_counts_words(adapter):
    assert adapter.token_count("the river city") == 3
    assert adapter.token_count("") == 0


def test_score_length_matches_continuation(adapter):
    logprobs = adapter.score("the <ent> wabash </ent>", "the", "river city")
    assert len(logprobs) == 2
    assert all(lp <= 0 for lp in logprobs)
    assert all(math.isfinite(lp) for lp in logprobs)


def test_score_empty_continuation(adapter):
    assert adapter.score("anything", "prefix", "") == []


def test_score_is_deterministic(adapter):
    a = adapter.score("the river", "the", "city of the county")
    b = adapter.score("the river", "the", "city of the county")
    assert a == b


def test_greedy_first_token_is_optimal(adapter):
    """The greedy continuation's first token must score at least as high as
    any single-token substitution at that position."""
    encoder_text = "the <ent> wabash </ent> <ent_desc> <mask> </ent_desc>"
    prefix = "the"
    generated = adapter.generate(encoder_text, prefix, stop_token=None, max_new_tokens=1)
    assert generated
    greedy_first = adapter.score(encoder_text, prefix, generated)[0]
    for competitor in ("river", "city", "joker", "universe", "capital"):
        other = adapter.score(encoder_text, prefix, competitor)[0]
        assert greedy_first >= other - 1e-6


def test_generate_budget_zero(adapter):
    assert adapter.generate("the river", "the", None, 0) == ""


def test_generate_respects_budget_and_is_deterministic(adapter):
    one = adapter.generate("the river in the county", "the", None, 5)
    two = adapter.generate("the river in the county", "the", None, 5)
    assert one == two
    assert len(one.split()) <= 5


def test_generate_excludes_stop_token(adapter):
    text = adapter.generate("the <ent> joker </ent>", "the", "</ent_desc>", 8)
    assert "</ent_desc>" not in text


def test_over_length_encoder_is_an_error_response(adapter):
    request = {
        "id": "long",
        "verb": "score",
        "encoder_text": "river " * 500,
        "decoder_prefix": "the",
        "continuation": "city",
    }
    response = adapter.handle(request)
    assert response["id"] == "long"
    assert "error" in response and "cap" in response["error"]


def test_over_length_decoder_is_an_error_response(adapter):
    response = adapter.handle(
        {
            "id": "d",
            "verb": "score",
            "encoder_text": "river",
            "decoder_prefix": "city " * 200,
            "continuation": "river",
        }
    )
    assert "error" in response


def test_unknown_verb_is_an_error_response(adapter):
    response = adapter.handle({"id": "x", "verb": "dance"})
    assert response == {"id": "x", "error": "unknown verb 'dance'"}


def test_unknown_words_map_to_unk_but_still_score(adapter):
    logprobs = adapter.score("zzz qqq", "yyy", "www vvv")
    assert len(logprobs) == 2
