"""Word-level edit alignment and word error rate.

The error rate of a hypothesis against a reference of N words is

    (substitutions + deletions + insertions) / N

computed over a minimal-cost word alignment with unit costs for the three
edit operations. Rates are exact rationals, are never clamped, and exceed
1 when the hypothesis inserts more words than the reference holds.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .corpus import TranscriptPair
from .errors import EmptyCorpus, EmptyReference
from .textnorm import DEFAULT_CONFIG, NormConfig, TokenSeq, normalize

OpKind = Literal["match", "substitute", "delete", "insert"]
Grouping = Literal["file", "utterance"]


@dataclass(frozen=True)
class EditOp:
    """One step of an alignment.

    Matches and substitutions carry both indices; a deletion names only
    the reference position it drops, an insertion only the hypothesis
    position it adds.
    """

    kind: OpKind
    ref_index: int | None = None
    hyp_index: int | None = None


@dataclass(frozen=True)
class AlignmentTrace:
    """An ordered edit script plus its operation counts.

    The counts always satisfy ``matches + substitutions + deletions ==
    ref_len``, and the total edit cost is minimal over all alignments.
    """

    ops: tuple[EditOp, ...]
    substitutions: int
    deletions: int
    insertions: int
    matches: int
    ref_len: int

    def __post_init__(self) -> None:
        if self.matches + self.substitutions + self.deletions != self.ref_len:
            raise ValueError("operation counts do not add up to the reference length")

    @property
    def errors(self) -> int:
        """Total edit cost: substitutions + deletions + insertions."""
        return self.substitutions + self.deletions + self.insertions


@dataclass(frozen=True)
class WerReport:
    """Corpus-level scores.

    per_group holds one (group id, rate) row per scoring group;
    macro_wer is the unweighted mean of the group rates and micro_wer
    pools operation counts over all groups before dividing.
    """

    per_group: tuple[tuple[str, Fraction], ...]
    macro_wer: Fraction
    micro_wer: Fraction


def align(ref: Sequence[str], hyp: Sequence[str]) -> AlignmentTrace:
    """Compute a minimal-cost word alignment of hypothesis against reference.

    Unit costs for substitute/delete/insert. Ties are broken in the fixed
    order match > substitute > delete > insert so the returned trace is
    deterministic.

    Args:
        ref: reference word sequence.
        hyp: hypothesis word sequence.

    Returns:
        An AlignmentTrace whose ops transform ref into hyp.
    """
    n, m = len(ref), len(hyp)
    # cost[i][j] = minimal edits aligning ref[:i] to hyp[:j]
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    back = [[""] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i
        back[i][0] = "D"
    for j in range(1, m + 1):
        cost[0][j] = j
        back[0][j] = "I"
    for i in range(1, n + 1):
        ref_tok = ref[i - 1]
        prev_row = cost[i - 1]
        row = cost[i]
        back_row = back[i]
        for j in range(1, m + 1):
            if ref_tok == hyp[j - 1]:
                best, op = prev_row[j - 1], "M"
            else:
                best, op = prev_row[j - 1] + 1, "S"
            dele = prev_row[j] + 1
            if dele < best:
                best, op = dele, "D"
            ins = row[j - 1] + 1
            if ins < best:
                best, op = ins, "I"
            row[j] = best
            back_row[j] = op

    ops: list[EditOp] = []
    subs = dels = inss = hits = 0
    i, j = n, m
    while i > 0 or j > 0:
        op = back[i][j]
        if op == "M":
            i, j = i - 1, j - 1
            ops.append(EditOp("match", ref_index=i, hyp_index=j))
            hits += 1
        elif op == "S":
            i, j = i - 1, j - 1
            ops.append(EditOp("substitute", ref_index=i, hyp_index=j))
            subs += 1
        elif op == "D":
            i -= 1
            ops.append(EditOp("delete", ref_index=i))
            dels += 1
        else:
            j -= 1
            ops.append(EditOp("insert", hyp_index=j))
            inss += 1
    ops.reverse()
    return AlignmentTrace(
        ops=tuple(ops),
        substitutions=subs,
        deletions=dels,
        insertions=inss,
        matches=hits,
        ref_len=n,
    )


def wer(trace: AlignmentTrace) -> Fraction:
    """Word error rate of an alignment, as an exact non-negative rational.

    Raises:
        EmptyReference: the trace was computed against an empty reference.
    """
    if trace.ref_len == 0:
        raise EmptyReference("reference has no words, rate is undefined")
    return Fraction(trace.errors, trace.ref_len)


def _group_counts(group: tuple[TokenSeq, TokenSeq]) -> tuple[int, int]:
    ref, hyp = group
    trace = align(ref, hyp)
    return trace.errors, trace.ref_len


def corpus_wer(
    pairs: Sequence[TranscriptPair],
    grouping: Grouping = "file",
    config: NormConfig = DEFAULT_CONFIG,
    jobs: int = 1,
) -> WerReport:
    """Score a corpus of reference/hypothesis pairs.

    With "file" grouping, each file's utterances are concatenated
    (reference side and hypothesis side separately, in utterance order)
    and aligned once per file. With "utterance" grouping every pair is its
    own group. Pairs with an absent hypothesis contribute an empty
    hypothesis side. The result is independent of evaluation order, so
    groups may be scored in parallel with ``jobs > 1``.

    Args:
        pairs: transcript pairs for a single system.
        grouping: "file" or "utterance".
        config: normalization applied to both sides before alignment.
        jobs: number of worker processes for group scoring.

    Raises:
        EmptyCorpus: no pairs were given.
        EmptyReference: some pair's reference normalizes to no words; the
            message names the offending pair.
        ValueError: the pairs mix more than one system label.
    """
    if not pairs:
        raise EmptyCorpus("no transcript pairs to score")
    systems = {p.system for p in pairs}
    if len(systems) > 1:
        raise ValueError(f"pairs mix systems {sorted(systems)}; score one system at a time")

    ordered = sorted(pairs, key=lambda p: (p.reference.file_id, p.reference.utterance_index))
    tokenized: list[tuple[TranscriptPair, TokenSeq, TokenSeq]] = []
    for pair in ordered:
        ref_tokens = normalize(pair.reference.text, config)
        pair_id = f"{pair.reference.file_id}:{pair.reference.utterance_index}"
        if not ref_tokens:
            raise EmptyReference(f"pair {pair_id}: reference normalizes to no words")
        hyp_tokens = normalize(pair.hypothesis.text, config) if pair.hypothesis else ()
        tokenized.append((pair, ref_tokens, hyp_tokens))

    groups: list[tuple[str, tuple[TokenSeq, TokenSeq]]] = []
    if grouping == "file":
        by_file: dict[str, tuple[list[str], list[str]]] = {}
        for pair, ref_tokens, hyp_tokens in tokenized:
            refs, hyps = by_file.setdefault(pair.reference.file_id, ([], []))
            refs.extend(ref_tokens)
            hyps.extend(hyp_tokens)
        for file_id in sorted(by_file):
            refs, hyps = by_file[file_id]
            groups.append((file_id, (tuple(refs), tuple(hyps))))
    elif grouping == "utterance":
        for pair, ref_tokens, hyp_tokens in tokenized:
            gid = f"{pair.reference.file_id}:{pair.reference.utterance_index}"
            groups.append((gid, (ref_tokens, hyp_tokens)))
    else:
        raise ValueError(f"unknown grouping {grouping!r}")

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            counts = list(pool.map(_group_counts, [g for _, g in groups]))
    else:
        counts = [_group_counts(g) for _, g in groups]

    per_group = tuple(
        (gid, Fraction(errors, ref_len))
        for (gid, _), (errors, ref_len) in zip(groups, counts)
    )
    macro = sum((rate for _, rate in per_group), Fraction(0)) / len(per_group)
    micro = Fraction(sum(e for e, _ in counts), sum(n for _, n in counts))
    return WerReport(per_group=per_group, macro_wer=macro, micro_wer=micro)


def percent_str(rate: Fraction | int) -> str:
    """Render a rate as a percentage with exactly two decimals.

    Works from the exact rational, so 1/4 is always "25.00". Halves round
    to even, which only matters for displayed values, never for the rates
    themselves.
    """
    cents = round(Fraction(rate) * 10000)
    return f"{cents // 100}.{cents % 100:02d}"
