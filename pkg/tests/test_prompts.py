import pytest

from kilm.errors import MissingKnowledgeError, PromptFormatError, SpanError
from kilm.infill import kn_infill, kn_mask
from kilm.prompts import (
    Candidate,
    ClozeInstance,
    EDInstance,
    Prompt,
    QAExemplar,
    build_appositive_prompt,
    build_desc_probe,
    build_ed_prompt,
    build_ed_prompts,
    build_lama_cloze,
    build_qa_prompt,
)
from kilm.tokens import DESC_CLOSE, DESC_OPEN, ENT_CLOSE, ENT_OPEN, MASK, detokenize

from conftest import JOKER_ENTITY


WABASH = EDInstance(
    instance_id="wabash",
    context="The Big Blue River is formed by Driftwood White, Wabash, and other streams.",
    mention_text="Wabash",
    mention_start=49,
    mention_end=55,
    candidates=[
        Candidate("Wabash River", "Tributary of the Ohio River"),
        Candidate("Wabash, Indiana", "Wabash is a city in Indiana"),
    ],
    gold_index=0,
)


def test_ed_prompt_structure():
    prompt = build_ed_prompt(WABASH, 0)
    assert prompt.is_scoring
    assert f"{ENT_OPEN} Wabash {ENT_CLOSE} {DESC_OPEN} {MASK} {DESC_CLOSE} , and" in prompt.encoder_text
    assert prompt.decoder_prefix.endswith(DESC_OPEN)
    assert prompt.continuation == "Wabash River <sep> Tributary of the Ohio River"
    assert prompt.meta["candidate_title"] == "Wabash River"


def test_ed_prompts_differ_only_in_continuation():
    prompts = build_ed_prompts(WABASH)
    assert len(prompts) == len(WABASH.candidates)
    assert prompts[0].encoder_text == prompts[1].encoder_text
    assert prompts[0].decoder_prefix == prompts[1].decoder_prefix
    assert prompts[0].continuation != prompts[1].continuation


def test_ed_prompt_matches_compile_code_path(joker_slice, joker_table):
    """The prompt surface must equal the training-side mask of the same inputs."""
    mention = next(m for m in joker_slice.mentions if m.entity == JOKER_ENTITY)
    x = kn_mask(kn_infill(joker_slice, mention, joker_table))
    context = detokenize(joker_slice.tokens)
    start = context.index("supervillain the Joker") + len("supervillain the ")
    inst = EDInstance(
        instance_id="joker",
        context=context,
        mention_text="Joker",
        mention_start=start,
        mention_end=start + 5,
        candidates=[Candidate(JOKER_ENTITY, joker_table.describe(JOKER_ENTITY))],
    )
    prompt = build_ed_prompt(inst, 0, window=len(joker_slice.tokens))
    assert prompt.encoder_text == detokenize(x.tokens)


def test_mention_span_mismatch_raises():
    with pytest.raises(SpanError):
        build_ed_prompt(
            EDInstance("x", "some context", "absent", 0, 6, [Candidate("T", "d")]), 0
        )


def test_window_bounds_mention_always_present():
    long_context = " ".join(f"w{i}" for i in range(400)) + " Wabash " + " ".join(
        f"v{i}" for i in range(400)
    )
    start = long_context.index("Wabash")
    inst = EDInstance("w", long_context, "Wabash", start, start + 6,
                      [Candidate("Wabash River", "Tributary")])
    prompt = build_ed_prompt(inst, 0, window=100)
    assert f"{ENT_OPEN} Wabash {ENT_CLOSE}" in prompt.encoder_text
    # about 100 context tokens plus the 6 structural tokens
    assert len(prompt.encoder_text.split()) <= 107


def test_appositive_prompt_is_generation_mode():
    context = "Spartans' point guard Magic Johnson."
    start = context.index("Magic Johnson")
    prompt = build_appositive_prompt(context, (start, start + len("Magic Johnson")), "ap0")
    assert not prompt.is_scoring
    assert prompt.stop_token == DESC_CLOSE
    assert f"{ENT_OPEN} Magic Johnson {ENT_CLOSE} {DESC_OPEN} {MASK} {DESC_CLOSE}" in prompt.encoder_text
    assert prompt.decoder_prefix.endswith(DESC_OPEN)


def test_appositive_entity_at_sentence_start():
    context = "Magic Johnson played."
    prompt = build_appositive_prompt(context, (0, len("Magic Johnson")), "ap1")
    assert prompt.encoder_text.startswith(f"{ENT_OPEN} Magic Johnson {ENT_CLOSE}")


def test_appositive_prompts_differ_only_in_markers():
    context = "Larry Bird faced Magic Johnson."
    a = build_appositive_prompt(context, (0, 10), "a")
    b = build_appositive_prompt(context, (17, 30), "b")
    assert a.encoder_text != b.encoder_text
    assert [t for t in a.encoder_text.split() if not t.startswith("<")] == [
        t for t in b.encoder_text.split() if not t.startswith("<")
    ]


def test_qa_prompt_single_exemplar_format():
    prompt = build_qa_prompt(
        "What did Ben Franklin invent?",
        [QAExemplar("What jobs did Ben Franklin do?", "Diplomat")],
        instance_id="qa0",
    )
    assert prompt.encoder_text == (
        "Question: What jobs did Ben Franklin do? Answer: Diplomat\n"
        "Question: What did Ben Franklin invent? Answer: <mask>"
    )
    assert prompt.decoder_prefix == (
        "Question: What jobs did Ben Franklin do? Answer: Diplomat\n"
        "Question: What did Ben Franklin invent? Answer:"
    )
    assert prompt.stop_token == "\n"


def test_qa_prompt_zero_shot():
    prompt = build_qa_prompt("Who wrote it?", [], instance_id="qa1")
    assert prompt.encoder_text == "Question: Who wrote it? Answer: <mask>"


def test_qa_prompt_five_exemplars_count():
    exemplars = [QAExemplar(f"q{i}?", f"a{i}") for i in range(5)]
    prompt = build_qa_prompt("test?", exemplars)
    assert prompt.encoder_text.count("Question:") == 6


def test_desc_probe_carries_gold(joker_slice, joker_table):
    mention = next(m for m in joker_slice.mentions if m.entity == JOKER_ENTITY)
    prompt = build_desc_probe(joker_slice, mention, joker_table, "p0")
    assert prompt.stop_token == DESC_CLOSE
    assert prompt.meta["golds"] == [
        "Joker ( character ) <sep> Fictional character throughout the DC Universe"
    ]
    assert prompt.decoder_prefix.endswith(DESC_OPEN)


def test_desc_probe_without_description_errors(joker_slice):
    from kilm.knowledge import KnowledgeTable
    from kilm.slicing import MentionSpan

    with pytest.raises(MissingKnowledgeError):
        build_desc_probe(joker_slice, MentionSpan(0, 1, "The", "Nope"), KnowledgeTable(), "p")


def test_lama_single_token_answer_passes():
    inst = ClozeInstance("The Teatr Wielki is a <MASK>.", "theatre")
    prompt = build_lama_cloze(inst, lambda text: len(text.split()), "l0")
    assert prompt is not None
    assert prompt.max_new_tokens == 1
    assert prompt.encoder_text == "The Teatr Wielki is a <mask>."
    assert prompt.decoder_prefix == "The Teatr Wielki is a"


def test_lama_multi_token_answer_filtered():
    inst = ClozeInstance("X is a <mask>.", "two words")
    assert build_lama_cloze(inst, lambda text: len(text.split()), "l1") is None


def test_lama_wrong_blank_count_errors():
    with pytest.raises(PromptFormatError):
        build_lama_cloze(ClozeInstance("no blank here.", "x"), lambda t: 1, "l2")
    with pytest.raises(PromptFormatError):
        build_lama_cloze(ClozeInstance("<mask> and <mask>.", "x"), lambda t: 1, "l3")


def test_prompt_mode_invariant_enforced():
    with pytest.raises(PromptFormatError):
        Prompt("bad", "e", "d")  # neither scoring nor generation
    with pytest.raises(PromptFormatError):
        Prompt("bad", "e", "d", continuation="c", stop_token="s")


def test_prompt_dict_round_trip():
    prompt = build_qa_prompt("q?", [], instance_id="rt")
    assert Prompt.from_dict(prompt.to_dict()).to_dict() == prompt.to_dict()
