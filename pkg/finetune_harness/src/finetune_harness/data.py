"""Line-format readers/writers and the word-level vocabulary.

The harness exchanges data with the evaluator purely through files:
dataset examples ({task, input, target, pmid} per line) and transcript
records ({file_id, utt, speaker?, ref, hyp?, system} per line). Both
readers validate shape and report the offending line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import FormatError

KNOWN_TASKS = ("summarization", "paraphrase", "mask_filling")

PAD, BOS, EOS, UNK, MASK = "<pad>", "<s>", "</s>", "<unk>", "<mask>"
SPECIALS = (PAD, BOS, EOS, UNK, MASK)


@dataclass(frozen=True)
class Example:
    """One (input, target) training pair."""

    task: str
    input: str
    target: str
    pmid: str


@dataclass(frozen=True)
class TranscriptRecord:
    """One reference utterance with an optional system hypothesis."""

    file_id: str
    utt: int
    speaker: str | None
    ref: str
    hyp: str | None
    system: str


def _parse_line(raw: str, lineno: int) -> dict:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON ({exc.msg})", line=lineno) from exc
    if not isinstance(obj, dict):
        raise FormatError("record is not an object", line=lineno)
    return obj


def read_dataset(path: str | Path) -> list[Example]:
    """Read training examples from a dataset file.

    Raises:
        FormatError: malformed line, missing field, unknown task, or an
            empty file (nothing to train on).
    """
    examples: list[Example] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            obj = _parse_line(raw, lineno)
            missing = {"task", "input", "target", "pmid"} - set(obj)
            if missing:
                raise FormatError(f"missing fields {sorted(missing)}", line=lineno)
            task = obj["task"]
            if task not in KNOWN_TASKS:
                raise FormatError(f"unknown task {task!r}", line=lineno)
            text_in, text_out = obj["input"], obj["target"]
            if not isinstance(text_in, str) or not text_in.strip():
                raise FormatError("'input' must be non-empty text", line=lineno)
            if not isinstance(text_out, str) or not text_out.strip():
                raise FormatError("'target' must be non-empty text", line=lineno)
            examples.append(Example(task, text_in, text_out, str(obj["pmid"])))
    if not examples:
        raise FormatError(f"{path}: no examples")
    return examples


def read_transcripts(path: str | Path) -> list[TranscriptRecord]:
    """Read transcript records, preserving file order.

    A missing or blank `hyp` means the system produced nothing for the
    utterance; the record is kept with hyp None.
    """
    records: list[TranscriptRecord] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            obj = _parse_line(raw, lineno)
            missing = {"file_id", "utt", "ref", "system"} - set(obj)
            if missing:
                raise FormatError(f"missing fields {sorted(missing)}", line=lineno)
            utt = obj["utt"]
            if isinstance(utt, bool) or not isinstance(utt, int) or utt < 0:
                raise FormatError("'utt' must be a non-negative integer", line=lineno)
            hyp = obj.get("hyp")
            if hyp is not None and (not isinstance(hyp, str) or not hyp.strip()):
                hyp = None
            records.append(
                TranscriptRecord(
                    file_id=str(obj["file_id"]),
                    utt=utt,
                    speaker=obj.get("speaker"),
                    ref=str(obj["ref"]),
                    hyp=hyp,
                    system=str(obj["system"]),
                )
            )
    if not records:
        raise FormatError(f"{path}: no records")
    return records


def write_transcripts(records: list[TranscriptRecord], path: str | Path) -> None:
    """Write transcript records in the evaluator's line format."""
    with open(path, "w", encoding="utf-8") as handle:
        for rec in records:
            obj: dict = {"file_id": rec.file_id, "utt": rec.utt}
            if rec.speaker is not None:
                obj["speaker"] = rec.speaker
            obj["ref"] = rec.ref
            if rec.hyp is not None:
                obj["hyp"] = rec.hyp
            obj["system"] = rec.system
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def suffix_system(record: TranscriptRecord, suffix: str = "+model") -> TranscriptRecord:
    """Tag a record's system label so corrected output scores separately."""
    return replace(record, system=record.system + suffix)


class Vocab:
    """Word-level vocabulary with fixed special tokens.

    Ids are assigned to the sorted set of words, so the mapping depends
    only on the word set, never on text order.
    """

    def __init__(self, words: list[str]):
        self._tokens = list(SPECIALS) + [w for w in words if w not in SPECIALS]
        self._ids = {tok: i for i, tok in enumerate(self._tokens)}

    @classmethod
    def from_texts(cls, texts: list[str]) -> "Vocab":
        words = sorted({w for text in texts for w in text.split()})
        return cls(words)

    def __len__(self) -> int:
        return len(self._tokens)

    @property
    def pad_id(self) -> int:
        return self._ids[PAD]

    @property
    def bos_id(self) -> int:
        return self._ids[BOS]

    @property
    def eos_id(self) -> int:
        return self._ids[EOS]

    @property
    def unk_id(self) -> int:
        return self._ids[UNK]

    @property
    def mask_id(self) -> int:
        return self._ids[MASK]

    def encode(self, text: str, max_length: int) -> list[int]:
        """Token ids for one text: BOS + words + EOS, truncated."""
        unk = self._ids[UNK]
        body = [self._ids.get(w, unk) for w in text.split()][: max_length - 2]
        return [self.bos_id] + body + [self.eos_id]

    def decode(self, ids: list[int]) -> str:
        """Text for generated ids; scaffold tokens are dropped."""
        scaffold = {self.pad_id, self.bos_id, self.eos_id}
        return " ".join(self._tokens[i] for i in ids if i not in scaffold)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self._tokens, handle, ensure_ascii=False)

    @classmethod
    def load(cls, path: str | Path) -> "Vocab":
        with open(path, encoding="utf-8") as handle:
            tokens = json.load(handle)
        vocab = cls.__new__(cls)
        vocab._tokens = list(tokens)
        vocab._ids = {tok: i for i, tok in enumerate(vocab._tokens)}
        return vocab
