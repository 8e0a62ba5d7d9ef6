"""Training loop with early stopping on evaluation loss.

The loop is backend-agnostic: anything implementing the Backend
protocol can be driven, which keeps the stopping logic testable with a
scripted stub. The best-evaluation-loss checkpoint is the one on disk
when training ends.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .backends import Backend, build_backend
from .config import TrainConfig
from .data import Vocab, read_dataset
from .errors import FormatError

logger = logging.getLogger(__name__)

LOSS_LOG_NAME = "loss_log.csv"


@dataclass(frozen=True)
class EpochRow:
    """One training epoch's mean losses."""

    epoch: int
    train_loss: float
    eval_loss: float


def fit(
    backend: Backend,
    train_pairs: Sequence[tuple[str, str]],
    eval_pairs: Sequence[tuple[str, str]],
    out_dir: Path,
    max_epochs: int,
    patience: int,
) -> list[EpochRow]:
    """Run up to max_epochs, checkpointing whenever evaluation improves.

    Stops early once evaluation loss has not improved for `patience`
    consecutive epochs. Returns one row per epoch actually run.
    """
    rows: list[EpochRow] = []
    best = math.inf
    stale = 0
    for epoch in range(1, max_epochs + 1):
        train_loss = backend.fit_epoch(train_pairs)
        eval_loss = backend.eval_loss(eval_pairs)
        rows.append(EpochRow(epoch, train_loss, eval_loss))
        logger.info("epoch %d: train %.6f eval %.6f", epoch, train_loss, eval_loss)
        if eval_loss < best:
            best = eval_loss
            stale = 0
            backend.save(out_dir)
        else:
            stale += 1
            if stale >= patience:
                logger.info("stopping early after %d stale epochs", stale)
                break
    return rows


def write_loss_log(rows: Sequence[EpochRow], path: Path) -> None:
    """Write the per-epoch loss table as CSV."""
    lines = ["epoch,train_loss,eval_loss"]
    lines += [f"{r.epoch},{r.train_loss:.6f},{r.eval_loss:.6f}" for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def train(
    config: TrainConfig,
    train_path: str | Path,
    eval_path: str | Path,
    out_dir: str | Path,
) -> tuple[Path, list[EpochRow]]:
    """Fine-tune on a generated dataset and save the best checkpoint.

    Both files must hold examples of the configured task. The returned
    directory contains the checkpoint plus `loss_log.csv`.

    Raises:
        FormatError: malformed or empty dataset files, or a task mismatch.
    """
    train_examples = read_dataset(train_path)
    eval_examples = read_dataset(eval_path)
    for origin, examples in (("train", train_examples), ("eval", eval_examples)):
        tasks = {ex.task for ex in examples}
        if tasks != {config.task}:
            raise FormatError(
                f"{origin} file holds task(s) {sorted(tasks)}, config expects {config.task!r}"
            )

    texts = [ex.input for ex in train_examples + eval_examples]
    texts += [ex.target for ex in train_examples + eval_examples]
    vocab = Vocab.from_texts(texts)
    backend = build_backend(config, vocab)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = fit(
        backend,
        [(ex.input, ex.target) for ex in train_examples],
        [(ex.input, ex.target) for ex in eval_examples],
        out,
        config.max_epochs,
        config.patience,
    )
    write_loss_log(rows, out / LOSS_LOG_NAME)
    return out, rows
