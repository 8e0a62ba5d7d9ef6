"""Seq2seq fine-tuning harness for transcript error correction.

Trains small encoder-decoder models on self-supervised datasets
(summarization, paraphrase restoration, mask filling) and rewrites
transcript hypotheses with the result, exchanging all data with the
evaluator through its line-delimited file formats.
"""

from .backends import Backend, IdentityBackend, TinySeq2SeqBackend, build_backend, load_checkpoint
from .config import MODEL_LABELS, TASK_LENGTHS, TrainConfig, dump_config, load_config
from .correct import correct
from .data import (
    Example,
    TranscriptRecord,
    Vocab,
    read_dataset,
    read_transcripts,
    suffix_system,
    write_transcripts,
)
from .errors import CheckpointError, ConfigError, FormatError, HarnessError, ResourceError
from .train import EpochRow, fit, train, write_loss_log

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "CheckpointError",
    "ConfigError",
    "EpochRow",
    "Example",
    "FormatError",
    "HarnessError",
    "IdentityBackend",
    "MODEL_LABELS",
    "ResourceError",
    "TASK_LENGTHS",
    "TinySeq2SeqBackend",
    "TrainConfig",
    "TranscriptRecord",
    "Vocab",
    "build_backend",
    "correct",
    "dump_config",
    "fit",
    "load_checkpoint",
    "load_config",
    "read_dataset",
    "read_transcripts",
    "suffix_system",
    "train",
    "write_loss_log",
    "write_transcripts",
]
