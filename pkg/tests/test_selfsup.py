import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clinwer import (
    MASK_TOKEN,
    TASK_MASK_FILLING,
    TASK_PARAPHRASE,
    TASK_SUMMARIZATION,
    FormatError,
    PubMedRecord,
    SelfSupExample,
    SplitSpec,
    TooFewExamples,
    UnknownPmid,
    clean_records,
    gen_mask_filling,
    gen_summarization,
    pair_paraphrases,
    read_examples,
    split,
    write_examples,
)
from clinwer.corpus import load_pubmed_raw
from clinwer.selfsup import load_paraphrases

from conftest import PARAPHRASE_FIXTURE, PUBMED_FIXTURE

NINE_WORD_TITLE = "Determinants of Helicobacter pylori seroprevalence among Italian blood donors."


def fixture_records():
    cleaned, _ = clean_records(load_pubmed_raw(PUBMED_FIXTURE))
    return cleaned


def test_summarization_uses_abstract_as_input_title_as_target():
    records = fixture_records()
    examples = gen_summarization(records)
    assert len(examples) == len(records)
    by_pmid = {ex.source_pmid: ex for ex in examples}
    hpylori = by_pmid["10674418"]
    assert hpylori.input.startswith("Helicobacter pylori is a worldwide infection")
    assert hpylori.target == NINE_WORD_TITLE
    assert hpylori.task == TASK_SUMMARIZATION


def test_summarization_empty_input():
    assert gen_summarization([]) == []


def test_summarization_is_a_bijection():
    records = [PubMedRecord(str(i), f"title {i}", f"abstract {i}") for i in range(20)]
    examples = gen_summarization(records)
    assert [ex.source_pmid for ex in examples] == [r.pmid for r in records]
    assert all(ex.input == r.abstract and ex.target == r.title for ex, r in zip(examples, records))


def test_nine_word_title_gets_three_masks():
    record = PubMedRecord("1", NINE_WORD_TITLE, "abstract")
    for seed in range(5):
        (example,) = gen_mask_filling([record], seed=seed)
        assert example.input.split().count(MASK_TOKEN) == 3
        assert example.target == NINE_WORD_TITLE


def test_eight_word_title_gets_two_masks():
    record = PubMedRecord("1", "one two three four five six seven eight", "a")
    (example,) = gen_mask_filling([record], seed=0)
    assert example.input.split().count(MASK_TOKEN) == 2


def test_one_word_title_fully_masked():
    record = PubMedRecord("1", "word", "a")
    (example,) = gen_mask_filling([record], seed=0)
    assert example.input == MASK_TOKEN
    assert example.target == "word"


def test_mask_positions_preserve_unmasked_words():
    record = PubMedRecord("1", NINE_WORD_TITLE, "a")
    (example,) = gen_mask_filling([record], seed=3)
    inp, tgt = example.input.split(), example.target.split()
    assert len(inp) == len(tgt)
    for got, want in zip(inp, tgt):
        assert got == MASK_TOKEN or got == want


def test_mask_fraction_bounds():
    record = PubMedRecord("1", "a b c", "x")
    with pytest.raises(ValueError):
        gen_mask_filling([record], mask_fraction=0)
    with pytest.raises(ValueError):
        gen_mask_filling([record], mask_fraction=Fraction(5, 4))
    (example,) = gen_mask_filling([record], mask_fraction=1, seed=0)
    assert example.input == f"{MASK_TOKEN} {MASK_TOKEN} {MASK_TOKEN}"


def test_masking_deterministic_per_seed():
    records = fixture_records()
    assert gen_mask_filling(records, seed=11) == gen_mask_filling(records, seed=11)


def test_masking_is_content_keyed_not_order_keyed():
    records = fixture_records()
    straight = {ex.source_pmid: ex for ex in gen_mask_filling(records, seed=11)}
    reversed_ = {ex.source_pmid: ex for ex in gen_mask_filling(list(reversed(records)), seed=11)}
    assert straight == reversed_


@given(st.integers(1, 30), st.integers(0, 2**32))
def test_mask_count_law(n_words, seed):
    title = " ".join(f"w{i}" for i in range(n_words))
    (example,) = gen_mask_filling([PubMedRecord("1", title, "a")], seed=seed)
    assert example.input.split().count(MASK_TOKEN) == math.ceil(Fraction(1, 4) * n_words)


def test_paraphrase_pairing():
    records = fixture_records()
    mapping = load_paraphrases(PARAPHRASE_FIXTURE)
    examples = pair_paraphrases(records, mapping)
    assert len(examples) == 2
    by_pmid = {ex.source_pmid: ex for ex in examples}
    assert by_pmid["10674418"].input == (
        "Determinants of seroprevalence of Helicobacter pylori among Italian blood donors"
    )
    assert by_pmid["10674418"].target == NINE_WORD_TITLE
    assert all(ex.task == TASK_PARAPHRASE for ex in examples)


def test_paraphrase_empty_mapping():
    assert pair_paraphrases(fixture_records(), {}) == []


def test_paraphrase_unknown_pmid_named():
    with pytest.raises(UnknownPmid, match="99999"):
        pair_paraphrases(fixture_records(), {"99999": "some text"})


def test_load_paraphrases_duplicate_pmid(tmp_path):
    path = tmp_path / "p.jsonl"
    line = json.dumps({"pmid": "1", "paraphrase": "x"})
    path.write_text(line + "\n" + line + "\n", encoding="utf-8")
    with pytest.raises(FormatError, match="duplicate"):
        load_paraphrases(path)


def make_examples(n):
    return [
        SelfSupExample(TASK_MASK_FILLING, f"in {i}", f"out {i}", str(i)) for i in range(n)
    ]


def test_split_ninety_ten():
    train, evaluation = split(make_examples(10), SplitSpec(Fraction(9, 10), seed=1))
    assert len(train) == 9
    assert len(evaluation) == 1


def test_split_two_examples():
    train, evaluation = split(make_examples(2), SplitSpec(Fraction(1, 2), seed=1))
    assert len(train) == 1
    assert len(evaluation) == 1


def test_split_too_few():
    with pytest.raises(TooFewExamples):
        split(make_examples(1), SplitSpec(Fraction(1, 2), seed=1))


def test_split_fraction_validated():
    with pytest.raises(ValueError):
        SplitSpec(Fraction(0), seed=1)
    with pytest.raises(ValueError):
        SplitSpec(Fraction(1), seed=1)


def test_split_accepts_decimal_floats_exactly():
    spec = SplitSpec(0.9, seed=1)
    assert spec.train_fraction == Fraction(9, 10)


def test_split_partition():
    examples = make_examples(25)
    train, evaluation = split(examples, SplitSpec(Fraction(4, 5), seed=3))
    assert len(train) + len(evaluation) == 25
    assert set(train) | set(evaluation) == set(examples)
    assert set(train) & set(evaluation) == set()


def test_split_order_insensitive():
    examples = make_examples(30)
    spec = SplitSpec(Fraction(9, 10), seed=5)
    base_train, base_eval = split(examples, spec)
    shuffled = examples[:]
    random.Random(0).shuffle(shuffled)
    train, evaluation = split(shuffled, spec)
    assert set(train) == set(base_train)
    assert set(evaluation) == set(base_eval)


def test_split_seed_changes_membership():
    examples = make_examples(40)
    train_a, _ = split(examples, SplitSpec(Fraction(1, 2), seed=1))
    train_b, _ = split(examples, SplitSpec(Fraction(1, 2), seed=2))
    assert set(train_a) != set(train_b)


def test_split_half_of_five_rounds_to_even():
    # round() on the exact rational 5/2 rounds half to even: 2 train
    train, evaluation = split(make_examples(5), SplitSpec(Fraction(1, 2), seed=1))
    assert (len(train), len(evaluation)) == (2, 3)


def test_write_read_round_trip(tmp_path):
    examples = make_examples(6)
    path = tmp_path / "ds.jsonl"
    write_examples(examples, path)
    assert read_examples(path) == sorted(examples, key=lambda e: (e.task, e.source_pmid))


def test_write_canonical_order_and_bytes(tmp_path):
    examples = make_examples(6)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_examples(examples, a)
    write_examples(list(reversed(examples)), b)
    assert a.read_bytes() == b.read_bytes()


def test_write_fields_exact(tmp_path):
    path = tmp_path / "ds.jsonl"
    write_examples([SelfSupExample(TASK_SUMMARIZATION, "inp", "tgt", "42")], path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    assert obj == {"task": "summarization", "input": "inp", "target": "tgt", "pmid": "42"}


def test_read_rejects_unknown_task(tmp_path):
    path = tmp_path / "ds.jsonl"
    path.write_text(
        json.dumps({"task": "translation", "input": "a", "target": "b", "pmid": "1"}) + "\n",
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="task"):
        read_examples(path)


def test_read_rejects_missing_field(tmp_path):
    path = tmp_path / "ds.jsonl"
    path.write_text(
        json.dumps({"task": "summarization", "input": "a", "pmid": "1"}) + "\n",
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="line 1"):
        read_examples(path)
