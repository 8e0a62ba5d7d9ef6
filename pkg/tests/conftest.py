"""Shared test helpers: the independent edit-distance oracle and corpus builders.

The oracle deliberately avoids the production DP formulation: it is a
memoized exhaustive recursion that takes the minimum over every adjacent
operation at every state, so agreement between the two is meaningful.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from clinwer import TranscriptPair, Utterance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

DIALOGUE_FIXTURE = FIXTURES / "dialogue_sample.jsonl"
PUBMED_FIXTURE = FIXTURES / "pubmed_raw_sample.jsonl"
PARAPHRASE_FIXTURE = FIXTURES / "paraphrases_sample.jsonl"


def recursive_edit_distance(ref: tuple[str, ...], hyp: tuple[str, ...]) -> int:
    """Exhaustive unit-cost edit distance between two token sequences."""

    @lru_cache(maxsize=None)
    def best(i: int, j: int) -> int:
        if i == len(ref) and j == len(hyp):
            return 0
        options = []
        if i < len(ref) and j < len(hyp):
            step = 0 if ref[i] == hyp[j] else 1
            options.append(step + best(i + 1, j + 1))
        if i < len(ref):
            options.append(1 + best(i + 1, j))
        if j < len(hyp):
            options.append(1 + best(i, j + 1))
        return min(options)

    return best(0, 0)


def make_pair(
    file_id: str,
    utt: int,
    ref: str,
    hyp: str | None,
    system: str,
    speaker: str | None = None,
) -> TranscriptPair:
    reference = Utterance(file_id, utt, speaker, ref)
    hypothesis = None if hyp is None else Utterance(file_id, utt, speaker, hyp)
    return TranscriptPair(reference, hypothesis, system)
