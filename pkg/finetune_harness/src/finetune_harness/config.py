"""Training configuration and its key=value file format.

Sequence length defaults depend on the task: summarization reads long
abstracts and emits short titles (1024 in, 128 out); paraphrase and
mask filling are title-to-title (512/512). A config file sets one
`key=value` per line; `#` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

TASK_LENGTHS: dict[str, tuple[int, int]] = {
    "summarization": (1024, 128),
    "paraphrase": (512, 512),
    "mask_filling": (512, 512),
}

MODEL_LABELS = ("tiny", "identity")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for one fine-tuning run.

    encoder_max_length and decoder_max_length default to the task's
    standard lengths when left unset. Early stopping halts training
    once evaluation loss has not improved for `patience` epochs.
    """

    task: str
    model: str = "tiny"
    learning_rate: float = 2e-5
    batch_size: int = 16
    max_epochs: int = 40
    patience: int = 3
    encoder_max_length: int | None = None
    decoder_max_length: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        task = self.task.replace("-", "_")
        if task not in TASK_LENGTHS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {sorted(TASK_LENGTHS)}")
        object.__setattr__(self, "task", task)
        if self.model not in MODEL_LABELS:
            raise ConfigError(f"unknown model label {self.model!r}; expected one of {MODEL_LABELS}")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if self.max_epochs < 1:
            raise ConfigError("max_epochs must be at least 1")
        if self.patience < 1:
            raise ConfigError("patience must be at least 1")
        enc_default, dec_default = TASK_LENGTHS[task]
        enc = self.encoder_max_length if self.encoder_max_length is not None else enc_default
        dec = self.decoder_max_length if self.decoder_max_length is not None else dec_default
        if enc < 8 or dec < 8:
            raise ConfigError("sequence lengths must be at least 8")
        object.__setattr__(self, "encoder_max_length", enc)
        object.__setattr__(self, "decoder_max_length", dec)


_FIELD_TYPES = {f.name: f for f in fields(TrainConfig)}

_INT_FIELDS = {"batch_size", "max_epochs", "patience", "encoder_max_length", "decoder_max_length", "seed"}


def _parse_value(key: str, raw: str):
    if key == "learning_rate":
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: not a number: {raw!r}") from exc
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: not an integer: {raw!r}") from exc
    return raw


def load_config(path: str | Path) -> TrainConfig:
    """Read a TrainConfig from a key=value file.

    Raises:
        ConfigError: unknown key, malformed line, bad value, or no task.
    """
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}")
            values[key] = _parse_value(key, value)
    if "task" not in values:
        raise ConfigError("config must set task")
    return TrainConfig(**values)


def dump_config(config: TrainConfig, path: str | Path) -> None:
    """Write a TrainConfig in the key=value format load_config reads."""
    with open(path, "w", encoding="utf-8") as handle:
        for field in fields(TrainConfig):
            handle.write(f"{field.name}={getattr(config, field.name)}\n")
