import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clinwer import (
    AlignmentTrace,
    EditOp,
    EmptyCorpus,
    EmptyReference,
    align,
    corpus_wer,
    normalize,
    percent_str,
    wer,
)

from conftest import make_pair, recursive_edit_distance

tokens = st.lists(st.sampled_from("abcd"), max_size=8).map(tuple)


def test_substitution_example():
    trace = align(("a", "b", "c"), ("a", "x", "c"))
    assert (trace.substitutions, trace.deletions, trace.insertions) == (1, 0, 0)
    assert trace.matches == 2
    assert trace.ref_len == 3


def test_identity_example():
    trace = align(("a", "b"), ("a", "b"))
    assert trace.errors == 0
    assert trace.matches == 2
    assert wer(trace) == 0


def test_over_insertion_example():
    trace = align(("hello", "world"), ("hello", "there", "world", "again", "now"))
    assert (trace.substitutions, trace.deletions, trace.insertions) == (0, 0, 3)
    assert trace.matches == 2
    assert wer(trace) == Fraction(3, 2)


def test_gcd_pair_rate():
    ref = normalize("Have you noticed any changes in your weight?")
    hyp = normalize("Do you noticed any changes in your wit?")
    assert wer(align(ref, hyp)) == Fraction(2, 8)
    assert percent_str(Fraction(2, 8)) == "25.00"


def test_empty_reference_rejected():
    with pytest.raises(EmptyReference):
        wer(align((), ("a",)))


def test_empty_hypothesis_is_all_deletions():
    trace = align(("a", "b", "c"), ())
    assert trace.deletions == 3
    assert wer(trace) == 1


def test_both_empty_is_zero_cost():
    trace = align((), ())
    assert trace.errors == 0
    assert trace.ops == ()


def test_trace_validates_identity():
    with pytest.raises(ValueError):
        AlignmentTrace(
            ops=(EditOp("match", 0, 0),),
            substitutions=1,
            deletions=0,
            insertions=0,
            matches=1,
            ref_len=1,
        )


@given(tokens, tokens)
def test_matches_oracle(ref, hyp):
    assert align(ref, hyp).errors == recursive_edit_distance(ref, hyp)


@given(tokens, tokens)
def test_symmetry(ref, hyp):
    forward = align(ref, hyp)
    backward = align(hyp, ref)
    assert forward.errors == backward.errors
    assert forward.deletions == backward.insertions
    assert forward.insertions == backward.deletions
    assert forward.substitutions == backward.substitutions


@given(tokens, tokens)
def test_trace_replays_hypothesis(ref, hyp):
    trace = align(ref, hyp)
    replayed = [
        hyp[op.hyp_index] for op in trace.ops if op.kind in ("match", "substitute", "insert")
    ]
    assert tuple(replayed) == hyp


@given(tokens, tokens)
def test_trace_covers_both_sides_in_order(ref, hyp):
    trace = align(ref, hyp)
    ref_indices = [op.ref_index for op in trace.ops if op.ref_index is not None]
    hyp_indices = [op.hyp_index for op in trace.ops if op.hyp_index is not None]
    assert ref_indices == list(range(len(ref)))
    assert hyp_indices == list(range(len(hyp)))


@given(tokens, tokens)
def test_identity_and_counts(ref, hyp):
    trace = align(ref, hyp)
    assert trace.matches + trace.substitutions + trace.deletions == len(ref)
    assert trace.matches + trace.substitutions + trace.insertions == len(hyp)


@given(tokens.filter(lambda t: len(t) >= 1))
def test_one_extra_token_costs_one(ref):
    perfect = align(ref, ref)
    extended = align(ref, ref + ("zzz",))
    assert perfect.errors == 0
    assert extended.errors == 1


def test_match_preferred_over_substitute_on_ties():
    # deterministic traceback: the equal pair aligns as a match even
    # though a substitute-heavy path has the same total cost
    trace = align(("a", "b"), ("b",))
    kinds = [op.kind for op in trace.ops]
    assert "match" in kinds
    assert trace.matches == 1 and trace.deletions == 1


def test_corpus_two_perfect_files():
    pairs = [
        make_pair("f1", 0, "all good here", "all good here", "sys"),
        make_pair("f2", 0, "nothing wrong", "nothing wrong", "sys"),
    ]
    report = corpus_wer(pairs)
    assert report.macro_wer == 0
    assert report.micro_wer == 0


def test_corpus_macro_equals_micro_on_equal_n():
    pairs = [
        make_pair("f1", 0, "a b c d", "a b c x", "sys"),
        make_pair("f2", 0, "e f g h", "x f x x", "sys"),
    ]
    report = corpus_wer(pairs)
    assert report.macro_wer == Fraction(1, 2)
    assert report.micro_wer == Fraction(1, 2)


def test_corpus_macro_differs_from_micro():
    ref1 = " ".join(f"w{i}" for i in range(10))
    hyp1 = "x " + " ".join(f"w{i}" for i in range(1, 10))
    pairs = [
        make_pair("f1", 0, ref1, hyp1, "sys"),
        make_pair("f2", 0, "a b", "a x", "sys"),
    ]
    report = corpus_wer(pairs)
    assert report.macro_wer == Fraction(3, 10)
    assert report.micro_wer == Fraction(2, 12)


def test_file_grouping_concatenates_utterances():
    # a deletion at one utterance's tail can be repaired by the next
    # utterance's head only under concatenation
    pairs = [
        make_pair("f1", 0, "one two", "one two three", "sys"),
        make_pair("f1", 1, "three four", "four", "sys"),
    ]
    by_file = corpus_wer(pairs, grouping="file")
    per_utt = corpus_wer(pairs, grouping="utterance")
    assert by_file.micro_wer == 0
    assert per_utt.micro_wer == Fraction(2, 4)


def test_utterance_group_ids_name_the_pair():
    pairs = [make_pair("f1", 3, "a b", "a b", "sys")]
    report = corpus_wer(pairs, grouping="utterance")
    assert report.per_group == (("f1:3", Fraction(0)),)


def test_absent_hypothesis_counts_as_deletions():
    pairs = [make_pair("f1", 0, "a b c", None, "sys")]
    report = corpus_wer(pairs)
    assert report.micro_wer == 1


def test_mixed_systems_rejected():
    pairs = [
        make_pair("f1", 0, "a", "a", "sys1"),
        make_pair("f1", 0, "a", "a", "sys2"),
    ]
    with pytest.raises(ValueError, match="one system"):
        corpus_wer(pairs)


def test_empty_corpus_rejected():
    with pytest.raises(EmptyCorpus):
        corpus_wer([])


def test_unscoreable_reference_names_the_pair():
    pairs = [make_pair("f9", 4, "...", "words", "sys")]
    with pytest.raises(EmptyReference, match="f9:4"):
        corpus_wer(pairs)


def test_parallel_scoring_matches_serial():
    rng = random.Random(7)
    words = ["alpha", "beta", "gamma", "delta"]
    pairs = [
        make_pair(
            f"f{i % 5}",
            i,
            " ".join(rng.choices(words, k=rng.randint(1, 6))),
            " ".join(rng.choices(words, k=rng.randint(0, 6))),
            "sys",
        )
        for i in range(40)
    ]
    serial = corpus_wer(pairs, jobs=1)
    parallel = corpus_wer(pairs, jobs=2)
    assert serial == parallel


def test_order_of_pairs_does_not_matter():
    pairs = [
        make_pair("f1", 0, "a b", "a b", "sys"),
        make_pair("f1", 1, "c d", "c x", "sys"),
        make_pair("f2", 0, "e f", "e f", "sys"),
    ]
    report = corpus_wer(pairs)
    shuffled = corpus_wer(list(reversed(pairs)))
    assert report == shuffled


def test_percent_str_two_decimals():
    assert percent_str(Fraction(1, 3)) == "33.33"
    assert percent_str(Fraction(2, 3)) == "66.67"
    assert percent_str(Fraction(3, 2)) == "150.00"
    assert percent_str(0) == "0.00"
