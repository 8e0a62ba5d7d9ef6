"""Word error rate evaluation for clinical dialogue transcripts.

The package scores automatic transcripts against human references with
exact rational arithmetic, compares transcription systems, and turns
biomedical title/abstract corpora into self-supervised training pairs
(summarization, paraphrase restoration and mask filling) for error
correction models.
"""

from .corpus import (
    CorpusStats,
    PubMedRecord,
    TranscriptPair,
    Utterance,
    clean_abstract,
    clean_records,
    clean_title,
    corpus_stats,
    load_dialogue_corpus,
    load_pubmed_raw,
    load_pubmed_records,
    serialize_dialogue_corpus,
    write_pubmed_records,
)
from .errors import (
    ClinwerError,
    DataError,
    DuplicateRecord,
    DuplicateUtterance,
    EmptyAfterCleaning,
    EmptyCorpus,
    EmptyReference,
    EmptyResults,
    FormatError,
    TooFewExamples,
    UnknownPmid,
    UsageError,
)
from .metrics import AlignmentTrace, EditOp, WerReport, align, corpus_wer, percent_str, wer
from .report import (
    EqualDifferentBreakdown,
    SystemResult,
    compare_systems,
    emit_breakdown_data,
    emit_chart_data,
    equal_different,
)
from .selfsup import (
    MASK_TOKEN,
    TASK_MASK_FILLING,
    TASK_PARAPHRASE,
    TASK_SUMMARIZATION,
    TASKS,
    SelfSupExample,
    SplitSpec,
    gen_mask_filling,
    gen_summarization,
    pair_paraphrases,
    read_examples,
    split,
    write_examples,
)
from .textnorm import DEFAULT_CONFIG, NormConfig, normalize, normalize_text

__version__ = "0.1.0"

__all__ = [
    "AlignmentTrace",
    "ClinwerError",
    "CorpusStats",
    "DataError",
    "DEFAULT_CONFIG",
    "DuplicateRecord",
    "DuplicateUtterance",
    "EditOp",
    "EmptyAfterCleaning",
    "EmptyCorpus",
    "EmptyReference",
    "EmptyResults",
    "EqualDifferentBreakdown",
    "FormatError",
    "MASK_TOKEN",
    "NormConfig",
    "PubMedRecord",
    "SelfSupExample",
    "SplitSpec",
    "SystemResult",
    "TASK_MASK_FILLING",
    "TASK_PARAPHRASE",
    "TASK_SUMMARIZATION",
    "TASKS",
    "TooFewExamples",
    "TranscriptPair",
    "UnknownPmid",
    "UsageError",
    "Utterance",
    "WerReport",
    "align",
    "clean_abstract",
    "clean_records",
    "clean_title",
    "compare_systems",
    "corpus_stats",
    "corpus_wer",
    "emit_breakdown_data",
    "emit_chart_data",
    "equal_different",
    "gen_mask_filling",
    "gen_summarization",
    "load_dialogue_corpus",
    "load_pubmed_raw",
    "load_pubmed_records",
    "normalize",
    "normalize_text",
    "pair_paraphrases",
    "percent_str",
    "read_examples",
    "serialize_dialogue_corpus",
    "split",
    "wer",
    "write_examples",
    "write_pubmed_records",
]
