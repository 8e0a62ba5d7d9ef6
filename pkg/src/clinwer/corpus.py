"""Corpus data model, ingestion and cleaning.

Two corpus kinds flow through the toolkit: dialogue transcripts (one
reference utterance paired with one system's hypothesis per record) and
biomedical title/abstract records. Both live in line-delimited JSON files;
the exact schemas are documented on the loaders below.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import (
    DuplicateRecord,
    DuplicateUtterance,
    EmptyAfterCleaning,
    EmptyCorpus,
    FormatError,
)
from .textnorm import DEFAULT_CONFIG, NormConfig, normalize

logger = logging.getLogger(__name__)

_WS_RE = re.compile(r"\s+")
_URL_RE = re.compile(r"\b(?:(?:https?|ftp)://|www\.)\S+", re.IGNORECASE)
_BRACKET_ARTIFACT_RE = re.compile(
    r"[(\[]\s*(?:see\s+)?(?:fig(?:ure)?s?|tab(?:le)?s?|eq(?:uation)?s?)\b[^()\[\]]*[)\]]",
    re.IGNORECASE,
)
_TEX_ENV_RE = re.compile(r"\\begin\{([a-z*]+)\}.*?\\end\{\1\}", re.IGNORECASE | re.DOTALL)
_TEX_MATH_RE = re.compile(r"\$\$?[^$]+\$\$?")

# Whitespace controls are separators, not junk; everything else in the
# C* categories (control, format, surrogate, private use, unassigned) goes.
_KEPT_CONTROLS = set("\t\n\r\f\v")


@dataclass(frozen=True)
class Utterance:
    """One spoken turn inside a dialogue file."""

    file_id: str
    utterance_index: int
    speaker: str | None
    text: str


@dataclass(frozen=True)
class TranscriptPair:
    """A reference utterance matched with one system's hypothesis.

    hypothesis is None when the system produced nothing for this
    utterance (skipped audio content).
    """

    reference: Utterance
    hypothesis: Utterance | None
    system: str


@dataclass(frozen=True)
class PubMedRecord:
    """A cleaned title/abstract pair keyed by its PMID."""

    pmid: str
    title: str
    abstract: str


@dataclass(frozen=True)
class CorpusStats:
    """Headline corpus numbers; means are over normalized token counts."""

    n_files: int
    mean_utterances_per_file: Fraction
    mean_words_per_utterance: Fraction
    n_pairs: int


_DIALOGUE_FIELDS = {"file_id", "utt", "speaker", "ref", "hyp", "system"}
_PUBMED_FIELDS = {"pmid", "title", "abstract"}


def _parse_line(raw: str, lineno: int) -> dict:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON ({exc.msg})", line=lineno) from exc
    if not isinstance(obj, dict):
        raise FormatError("record is not an object", line=lineno)
    return obj


def _require_str(obj: Mapping, field: str, lineno: int) -> str:
    value = obj.get(field)
    if not isinstance(value, str):
        raise FormatError(f"field {field!r} missing or not text", line=lineno)
    return value


def load_dialogue_corpus(path: str | Path) -> list[TranscriptPair]:
    """Load a transcript corpus from a line-delimited JSON file.

    Each line is an object with fields exactly: ``file_id`` (text),
    ``utt`` (non-negative integer), ``speaker`` (optional text), ``ref``
    (text), ``hyp`` (optional text) and ``system`` (text). A missing or
    empty ``hyp`` means the system produced nothing for the utterance.
    The result is sorted by (system, file id, utterance index), so pairs
    come out grouped by system.

    Raises:
        FormatError: malformed line, named by line number.
        DuplicateUtterance: repeated (file id, utterance, system) triple.
    """
    pairs: list[TranscriptPair] = []
    seen: set[tuple[str, int, str]] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            obj = _parse_line(raw, lineno)
            unknown = set(obj) - _DIALOGUE_FIELDS
            if unknown:
                raise FormatError(f"unknown fields {sorted(unknown)}", line=lineno)
            file_id = _require_str(obj, "file_id", lineno)
            system = _require_str(obj, "system", lineno)
            ref_text = _require_str(obj, "ref", lineno)
            utt = obj.get("utt")
            if not isinstance(utt, int) or isinstance(utt, bool) or utt < 0:
                raise FormatError("field 'utt' missing or not a non-negative integer", line=lineno)
            if not file_id or not system:
                raise FormatError("'file_id' and 'system' must be non-empty", line=lineno)
            if not ref_text.strip():
                raise FormatError("'ref' must be non-empty", line=lineno)
            speaker = obj.get("speaker")
            if speaker is not None and not isinstance(speaker, str):
                raise FormatError("field 'speaker' must be text when present", line=lineno)
            hyp_text = obj.get("hyp")
            if hyp_text is not None and not isinstance(hyp_text, str):
                raise FormatError("field 'hyp' must be text when present", line=lineno)
            key = (file_id, utt, system)
            if key in seen:
                raise DuplicateUtterance(
                    f"line {lineno}: duplicate utterance {utt} of file {file_id!r}"
                    f" for system {system!r}"
                )
            seen.add(key)
            reference = Utterance(file_id, utt, speaker, ref_text)
            hypothesis = None
            if hyp_text is not None and hyp_text.strip():
                hypothesis = Utterance(file_id, utt, speaker, hyp_text)
            pairs.append(TranscriptPair(reference, hypothesis, system))
    pairs.sort(key=lambda p: (p.system, p.reference.file_id, p.reference.utterance_index))
    return pairs


def serialize_dialogue_corpus(pairs: Iterable[TranscriptPair], path: str | Path) -> None:
    """Write pairs back to the line-delimited transcript format."""
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            obj: dict = {
                "file_id": pair.reference.file_id,
                "utt": pair.reference.utterance_index,
            }
            if pair.reference.speaker is not None:
                obj["speaker"] = pair.reference.speaker
            obj["ref"] = pair.reference.text
            if pair.hypothesis is not None:
                obj["hyp"] = pair.hypothesis.text
            obj["system"] = pair.system
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_pubmed_raw(path: str | Path) -> list[dict]:
    """Load raw, pre-cleaning title/abstract records.

    Each line is an object with fields exactly ``pmid``, ``title`` and
    ``abstract``. Numeric pmids are accepted and coerced to text. Titles
    and abstracts may still be dirty; run them through clean_records.
    The result is sorted by pmid.
    """
    records: list[dict] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            obj = _parse_line(raw, lineno)
            unknown = set(obj) - _PUBMED_FIELDS
            if unknown:
                raise FormatError(f"unknown fields {sorted(unknown)}", line=lineno)
            pmid = obj.get("pmid")
            if isinstance(pmid, int) and not isinstance(pmid, bool):
                pmid = str(pmid)
            if not isinstance(pmid, str) or not pmid:
                raise FormatError("field 'pmid' missing or empty", line=lineno)
            title = obj.get("title", "")
            abstract = obj.get("abstract", "")
            if not isinstance(title, str) or not isinstance(abstract, str):
                raise FormatError("'title' and 'abstract' must be text", line=lineno)
            if pmid in seen:
                raise DuplicateRecord(f"line {lineno}: duplicate pmid {pmid!r}")
            seen.add(pmid)
            records.append({"pmid": pmid, "title": title, "abstract": abstract})
    records.sort(key=lambda r: r["pmid"])
    return records


def load_pubmed_records(path: str | Path) -> list[PubMedRecord]:
    """Load an already-cleaned title/abstract corpus.

    Same schema as load_pubmed_raw but titles and abstracts must be
    non-empty; feed raw dumps through the clean step first.
    """
    records = []
    for raw in load_pubmed_raw(path):
        if not raw["title"].strip() or not raw["abstract"].strip():
            raise FormatError(
                f"record {raw['pmid']!r} has an empty title or abstract; clean the corpus first"
            )
        records.append(PubMedRecord(raw["pmid"], raw["title"], raw["abstract"]))
    return records


def write_pubmed_records(records: Iterable[PubMedRecord], path: str | Path) -> None:
    """Write cleaned records to the line-delimited format."""
    with open(path, "w", encoding="utf-8") as handle:
        for rec in records:
            obj = {"pmid": rec.pmid, "title": rec.title, "abstract": rec.abstract}
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _drop_nonprinting(text: str) -> str:
    return "".join(
        ch
        for ch in text
        if ch in _KEPT_CONTROLS or unicodedata.category(ch)[0] != "C"
    )


def clean_title(raw: str) -> str:
    """Remove control and other non-printing characters from a title.

    Whitespace runs collapse to single spaces and the result is trimmed.

    Raises:
        EmptyAfterCleaning: nothing printable was left.
    """
    cleaned = _drop_nonprinting(raw)
    cleaned = _WS_RE.sub(" ", cleaned).strip()
    if not cleaned:
        raise EmptyAfterCleaning("title is empty after cleaning")
    return cleaned


def clean_abstract(raw: str) -> str:
    """Clean an abstract: non-printing characters, URLs and markup debris.

    Removes scheme- and www-prefixed URLs, TeX-style math and
    environments, and bracketed figure/table/equation references, then
    applies the same non-printing cleanup as titles. Removed spans are
    replaced by a space (never deleted outright) and the removal sequence
    repeats until nothing changes, so one pass cannot leave behind a
    freshly spliced removable pattern. Each change shrinks the text, so
    the loop terminates.

    Raises:
        EmptyAfterCleaning: nothing survived.
    """
    cleaned = _drop_nonprinting(raw)
    while True:
        step = _URL_RE.sub(" ", cleaned)
        step = _TEX_ENV_RE.sub(" ", step)
        step = _TEX_MATH_RE.sub(" ", step)
        step = _BRACKET_ARTIFACT_RE.sub(" ", step)
        step = _WS_RE.sub(" ", step).strip()
        if step == cleaned:
            break
        cleaned = step
    if not cleaned:
        raise EmptyAfterCleaning("abstract is empty after cleaning")
    return cleaned


def clean_records(raw_records: Iterable[Mapping]) -> tuple[list[PubMedRecord], int]:
    """Clean a batch of raw records, dropping the ones that clean to nothing.

    Returns the cleaned records and the number dropped. Drops are logged
    with the pmid and the reason; they never abort the batch.
    """
    cleaned: list[PubMedRecord] = []
    dropped = 0
    for raw in raw_records:
        pmid = str(raw["pmid"])
        try:
            title = clean_title(raw["title"])
            abstract = clean_abstract(raw["abstract"])
        except EmptyAfterCleaning as exc:
            logger.warning("dropping record %s: %s", pmid, exc)
            dropped += 1
            continue
        cleaned.append(PubMedRecord(pmid, title, abstract))
    return cleaned, dropped


def corpus_stats(
    corpus: Sequence[TranscriptPair] | Sequence[PubMedRecord],
    config: NormConfig = DEFAULT_CONFIG,
) -> CorpusStats:
    """Compute headline statistics for either corpus kind.

    For a dialogue corpus, files and utterances are counted over the
    distinct reference utterances (hypotheses from multiple systems share
    one reference). For a title/abstract corpus each record counts as one
    file holding two text units (title and abstract), and n_pairs is the
    number of title/abstract pairs.

    Raises:
        EmptyCorpus: the corpus has no records.
    """
    if not corpus:
        raise EmptyCorpus("cannot compute statistics of an empty corpus")
    first = corpus[0]
    if isinstance(first, PubMedRecord):
        n = len(corpus)
        total_tokens = sum(
            len(normalize(rec.title, config)) + len(normalize(rec.abstract, config))
            for rec in corpus
        )
        return CorpusStats(
            n_files=n,
            mean_utterances_per_file=Fraction(2),
            mean_words_per_utterance=Fraction(total_tokens, 2 * n),
            n_pairs=n,
        )
    references: dict[tuple[str, int], str] = {}
    for pair in corpus:
        key = (pair.reference.file_id, pair.reference.utterance_index)
        references[key] = pair.reference.text
    n_files = len({file_id for file_id, _ in references})
    n_refs = len(references)
    total_tokens = sum(len(normalize(text, config)) for text in references.values())
    return CorpusStats(
        n_files=n_files,
        mean_utterances_per_file=Fraction(n_refs, n_files),
        mean_words_per_utterance=Fraction(total_tokens, n_refs),
        n_pairs=len(corpus),
    )
