"""Apply a trained checkpoint to a transcript file.

Every utterance with a hypothesis gets a model rewrite; utterances the
upstream system skipped pass through untouched. The system label is
suffixed with "+model" so corrected output can be scored side by side
with the raw system it came from.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .backends import load_checkpoint
from .data import read_transcripts, suffix_system, write_transcripts


def correct(
    checkpoint_dir: str | Path,
    transcripts_path: str | Path,
    out_path: str | Path,
) -> int:
    """Rewrite hypotheses with the checkpointed model.

    Returns:
        Number of records written (one per input record).

    Raises:
        CheckpointError: the checkpoint is missing or unreadable.
        FormatError: the transcript file is malformed or empty.
    """
    backend = load_checkpoint(checkpoint_dir)
    records = read_transcripts(transcripts_path)
    indexed = [(i, rec.hyp) for i, rec in enumerate(records) if rec.hyp is not None]
    rewritten = backend.generate([hyp for _, hyp in indexed])
    out_records = list(records)
    for (i, _), new_hyp in zip(indexed, rewritten):
        out_records[i] = replace(out_records[i], hyp=new_hyp)
    out_records = [suffix_system(rec) for rec in out_records]
    write_transcripts(out_records, out_path)
    return len(out_records)
