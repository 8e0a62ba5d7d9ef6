"""Builders for toy datasets, transcript files and scripted backends."""

from __future__ import annotations

import json
import math
import random
from pathlib import Path

from finetune_harness import TrainConfig

MASK = "<mask>"

WORDS = [f"term{i:02d}" for i in range(40)]


def build_examples(count: int, seed: int, task: str = "mask_filling") -> list[dict]:
    """Deterministic masked-title pairs over a small closed vocabulary."""
    rng = random.Random(seed)
    rows = []
    for n in range(count):
        length = rng.randint(5, 12)
        target = [rng.choice(WORDS) for _ in range(length)]
        masked_at = set(rng.sample(range(length), math.ceil(length / 4)))
        masked = [MASK if i in masked_at else w for i, w in enumerate(target)]
        rows.append(
            {
                "task": task,
                "input": " ".join(masked),
                "target": " ".join(target),
                "pmid": str(200000 + n),
            }
        )
    return rows


def dump_jsonl(path: Path, rows: list[dict]) -> Path:
    path.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
    return path


def small_config(**overrides) -> TrainConfig:
    """Config shrunk for fast unit runs; overrides win."""
    base = dict(
        task="mask_filling",
        batch_size=4,
        max_epochs=1,
        encoder_max_length=16,
        decoder_max_length=16,
        seed=3,
    )
    base.update(overrides)
    return TrainConfig(**base)


# third record has no hypothesis, second no speaker
TRANSCRIPTS = [
    {
        "file_id": "visit_01",
        "utt": 0,
        "speaker": "clinician",
        "ref": "how are you feeling today",
        "hyp": "how are you fearing today",
        "system": "north",
    },
    {
        "file_id": "visit_01",
        "utt": 1,
        "ref": "any pain after meals",
        "hyp": "any pane after meals",
        "system": "north",
    },
    {
        "file_id": "visit_01",
        "utt": 2,
        "speaker": "patient",
        "ref": "it comes and goes",
        "system": "north",
    },
    {
        "file_id": "visit_02",
        "utt": 0,
        "speaker": "patient",
        "ref": "mostly at night",
        "hyp": "most tea at night",
        "system": "north",
    },
]


class ScriptedBackend:
    """Plays back preset loss schedules and records when saves happen."""

    def __init__(self, train_losses, eval_losses):
        self._train = list(train_losses)
        self._eval = list(eval_losses)
        self._epoch = 0
        self.saved_after: list[int] = []

    def fit_epoch(self, pairs):
        return self._train[self._epoch]

    def eval_loss(self, pairs):
        value = self._eval[self._epoch]
        self._epoch += 1
        return value

    def generate(self, texts):
        return list(texts)

    def save(self, out_dir):
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        self.saved_after.append(self._epoch)
