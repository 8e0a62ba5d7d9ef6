"""Self-supervised dataset generation from cleaned title/abstract records.

Three task datasets can be derived from the same corpus:

* summarization: abstract in, title out.
* paraphrase: an externally produced paraphrased title in, title out.
* mask_filling: the title with a fraction of its words replaced by
  ``<mask>`` in, the intact title out.

Generation is deterministic given a seed, and independent of record
order: every record derives its own sub-seed from its content, and the
dataset writer emits records in canonical order.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .corpus import PubMedRecord
from .errors import FormatError, TooFewExamples, UnknownPmid
from .textnorm import MASK_TOKEN

logger = logging.getLogger(__name__)

TASK_SUMMARIZATION = "summarization"
TASK_PARAPHRASE = "paraphrase"
TASK_MASK_FILLING = "mask_filling"
TASKS = (TASK_SUMMARIZATION, TASK_PARAPHRASE, TASK_MASK_FILLING)


@dataclass(frozen=True)
class SelfSupExample:
    """One (input, target) training pair tagged with its task and origin."""

    task: str
    input: str
    target: str
    source_pmid: str


@dataclass(frozen=True)
class SplitSpec:
    """Deterministic train/eval split parameters."""

    train_fraction: Fraction
    seed: int

    def __post_init__(self) -> None:
        frac = _as_fraction(self.train_fraction)
        if not 0 < frac < 1:
            raise ValueError("train_fraction must be strictly between 0 and 1")
        object.__setattr__(self, "train_fraction", frac)


def _as_fraction(value: Fraction | str | float | int) -> Fraction:
    # Floats go through str() so that a caller's 0.1 means the decimal
    # 1/10, not the nearest binary double.
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def _record_seed(seed: int, *parts: str) -> int:
    digest = hashlib.blake2b(
        "\x1f".join([str(seed), *parts]).encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def gen_summarization(records: Sequence[PubMedRecord]) -> list[SelfSupExample]:
    """One example per record: abstract as input, title as target."""
    return [
        SelfSupExample(TASK_SUMMARIZATION, rec.abstract, rec.title, rec.pmid)
        for rec in records
    ]


def gen_mask_filling(
    records: Sequence[PubMedRecord],
    mask_fraction: Fraction | str | float = Fraction(1, 4),
    seed: int = 0,
) -> list[SelfSupExample]:
    """Mask a fraction of each title's words and pair it with the original.

    The number of masked words is ceil(mask_fraction * word count), at
    least 1, with positions drawn uniformly without replacement from a
    generator seeded by (seed, record content). Masked words are replaced
    in place by the literal ``<mask>``; word order is untouched, so
    substituting the target's word at each masked position reproduces the
    target exactly.
    """
    frac = _as_fraction(mask_fraction)
    if not 0 < frac <= 1:
        raise ValueError("mask_fraction must be in (0, 1]")
    examples: list[SelfSupExample] = []
    for rec in records:
        words = rec.title.split()
        if not words:
            raise ValueError(f"record {rec.pmid} has an empty title")
        n_masked = math.ceil(frac * len(words))
        rng = random.Random(_record_seed(seed, rec.pmid, rec.title))
        for pos in rng.sample(range(len(words)), n_masked):
            words[pos] = MASK_TOKEN
        examples.append(
            SelfSupExample(TASK_MASK_FILLING, " ".join(words), rec.title, rec.pmid)
        )
    return examples


def pair_paraphrases(
    records: Sequence[PubMedRecord], paraphrases: Mapping[str, str]
) -> list[SelfSupExample]:
    """Pair externally produced paraphrased titles with their originals.

    One example per mapped pmid: paraphrase as input, original title as
    target. Records without a paraphrase are skipped; the skip count is
    logged.

    Raises:
        UnknownPmid: the mapping names a pmid absent from the records.
    """
    by_pmid = {rec.pmid: rec for rec in records}
    unknown = sorted(set(paraphrases) - set(by_pmid))
    if unknown:
        raise UnknownPmid(f"paraphrases name unknown pmids: {', '.join(unknown)}")
    examples = [
        SelfSupExample(TASK_PARAPHRASE, paraphrases[rec.pmid], rec.title, rec.pmid)
        for rec in records
        if rec.pmid in paraphrases
    ]
    skipped = len(records) - len(examples)
    if skipped:
        logger.info("paraphrase pairing skipped %d records without a paraphrase", skipped)
    return examples


def split(
    examples: Sequence[SelfSupExample], spec: SplitSpec
) -> tuple[list[SelfSupExample], list[SelfSupExample]]:
    """Partition examples into train and eval sets.

    Membership depends only on the seed and each example's content, never
    on input order: examples are ranked by a keyed content hash and the
    first round(train_fraction * total) go to train.

    Raises:
        TooFewExamples: fewer than two examples.
    """
    if len(examples) < 2:
        raise TooFewExamples(f"cannot split {len(examples)} example(s)")

    def key(ex: SelfSupExample) -> bytes:
        return hashlib.blake2b(
            "\x1f".join([str(spec.seed), ex.task, ex.source_pmid, ex.input, ex.target]).encode(
                "utf-8"
            ),
            digest_size=16,
        ).digest()

    ranked = sorted(examples, key=key)
    n_train = round(spec.train_fraction * len(examples))
    return ranked[:n_train], ranked[n_train:]


def write_examples(examples: Iterable[SelfSupExample], path: str | Path) -> None:
    """Write examples to the line-delimited dataset format.

    Fields per line: ``task``, ``input``, ``target``, ``pmid``. Output is
    sorted by (task, pmid) so identical example sets serialize to
    identical bytes regardless of generation order.
    """
    ordered = sorted(examples, key=lambda ex: (ex.task, ex.source_pmid))
    with open(path, "w", encoding="utf-8") as handle:
        for ex in ordered:
            obj = {"task": ex.task, "input": ex.input, "target": ex.target, "pmid": ex.source_pmid}
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_examples(path: str | Path) -> list[SelfSupExample]:
    """Read a dataset file written by write_examples."""
    examples: list[SelfSupExample] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON ({exc.msg})", line=lineno) from exc
            if not isinstance(obj, dict) or not {"task", "input", "target", "pmid"} <= set(obj):
                raise FormatError("record must carry task, input, target and pmid", line=lineno)
            if obj["task"] not in TASKS:
                raise FormatError(f"unknown task {obj['task']!r}", line=lineno)
            examples.append(
                SelfSupExample(obj["task"], obj["input"], obj["target"], str(obj["pmid"]))
            )
    return examples


def load_paraphrases(path: str | Path) -> dict[str, str]:
    """Load a pmid to paraphrased-title mapping.

    Line-delimited objects with fields ``pmid`` and ``paraphrase``.
    """
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON ({exc.msg})", line=lineno) from exc
            if not isinstance(obj, dict):
                raise FormatError("record is not an object", line=lineno)
            pmid = obj.get("pmid")
            if isinstance(pmid, int) and not isinstance(pmid, bool):
                pmid = str(pmid)
            text = obj.get("paraphrase")
            if not isinstance(pmid, str) or not pmid or not isinstance(text, str) or not text:
                raise FormatError("record must carry non-empty pmid and paraphrase", line=lineno)
            if pmid in mapping:
                raise FormatError(f"duplicate pmid {pmid!r}", line=lineno)
            mapping[pmid] = text
    return mapping
