"""Model backends: a tiny randomly initialized seq2seq and a no-ML stub.

Every backend exposes the same four operations (fit_epoch, eval_loss,
generate, save) so the training loop and the correction path do not
care which one is running. The identity stub makes the cross-component
file contract testable without any model at all.

Checkpoint layout: `checkpoint.json` names the backend; `config.txt`,
`vocab.json` and `weights.pt` are present for model backends.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Protocol, Sequence

from .config import TrainConfig, load_config, dump_config
from .data import Vocab
from .errors import CheckpointError, ResourceError

CHECKPOINT_MANIFEST = "checkpoint.json"

_OOM_GUIDANCE = (
    "out of memory at the configured sizes; lower batch_size or the"
    " encoder/decoder max lengths and rerun"
)


class Backend(Protocol):
    """What the training loop and corrector need from a model."""

    def fit_epoch(self, pairs: Sequence[tuple[str, str]]) -> float: ...

    def eval_loss(self, pairs: Sequence[tuple[str, str]]) -> float: ...

    def generate(self, texts: Sequence[str]) -> list[str]: ...

    def save(self, out_dir: str | Path) -> None: ...


class IdentityBackend:
    """Passes inputs through unchanged; trains instantly at zero loss."""

    name = "identity"

    def fit_epoch(self, pairs: Sequence[tuple[str, str]]) -> float:
        return 0.0

    def eval_loss(self, pairs: Sequence[tuple[str, str]]) -> float:
        return 0.0

    def generate(self, texts: Sequence[str]) -> list[str]:
        return list(texts)

    def save(self, out_dir: str | Path) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / CHECKPOINT_MANIFEST).write_text(
            json.dumps({"backend": self.name}) + "\n", encoding="utf-8"
        )


class TinySeq2SeqBackend:
    """Randomly initialized small encoder-decoder trained from scratch.

    Word-level vocabulary, greedy decoding, dropout disabled so runs
    are reproducible from the seed alone. Generation never emits the
    mask token and always produces at least one word.
    """

    name = "tiny"

    def __init__(self, config: TrainConfig, vocab: Vocab, model=None):
        import torch
        from transformers import BartConfig, BartForConditionalGeneration

        self._config = config
        self._vocab = vocab
        if model is None:
            torch.manual_seed(config.seed)
            model = BartForConditionalGeneration(
                BartConfig(
                    vocab_size=len(vocab),
                    d_model=64,
                    encoder_layers=2,
                    decoder_layers=2,
                    encoder_attention_heads=2,
                    decoder_attention_heads=2,
                    encoder_ffn_dim=128,
                    decoder_ffn_dim=128,
                    # decoder positions run one past decoder_max_length
                    # because generation starts from a start token
                    max_position_embeddings=max(
                        config.encoder_max_length, config.decoder_max_length + 1
                    ),
                    dropout=0.0,
                    attention_dropout=0.0,
                    activation_dropout=0.0,
                    pad_token_id=vocab.pad_id,
                    bos_token_id=vocab.bos_id,
                    eos_token_id=vocab.eos_id,
                    decoder_start_token_id=vocab.eos_id,
                )
            )
        self._model = model
        self._optimizer = None

    def _batches(self, pairs: Sequence[tuple[str, str]]):
        import torch

        cfg = self._config
        for start in range(0, len(pairs), cfg.batch_size):
            chunk = pairs[start : start + cfg.batch_size]
            enc = [self._vocab.encode(src, cfg.encoder_max_length) for src, _ in chunk]
            dec = [self._vocab.encode(tgt, cfg.decoder_max_length) for _, tgt in chunk]
            enc_len = max(len(e) for e in enc)
            dec_len = max(len(d) for d in dec)
            pad = self._vocab.pad_id
            input_ids = torch.tensor([e + [pad] * (enc_len - len(e)) for e in enc])
            # -100 marks padding positions the loss must ignore
            labels = torch.tensor([d + [-100] * (dec_len - len(d)) for d in dec])
            yield input_ids, (input_ids != pad).long(), labels

    def fit_epoch(self, pairs: Sequence[tuple[str, str]]) -> float:
        import torch

        if self._optimizer is None:
            self._optimizer = torch.optim.AdamW(
                self._model.parameters(), lr=self._config.learning_rate
            )
        self._model.train()
        losses = []
        for input_ids, attention, labels in self._batches(pairs):
            self._optimizer.zero_grad()
            out = _guard_oom(
                lambda: self._model(
                    input_ids=input_ids, attention_mask=attention, labels=labels
                )
            )
            _guard_oom(out.loss.backward)
            self._optimizer.step()
            losses.append(out.loss.item())
        return sum(losses) / len(losses)

    def eval_loss(self, pairs: Sequence[tuple[str, str]]) -> float:
        import torch

        self._model.eval()
        losses = []
        with torch.no_grad():
            for input_ids, attention, labels in self._batches(pairs):
                out = _guard_oom(
                    lambda: self._model(
                        input_ids=input_ids, attention_mask=attention, labels=labels
                    )
                )
                losses.append(out.loss.item())
        return sum(losses) / len(losses)

    def generate(self, texts: Sequence[str]) -> list[str]:
        import torch

        cfg = self._config
        pad = self._vocab.pad_id
        self._model.eval()
        outputs: list[str] = []
        with torch.no_grad():
            for start in range(0, len(texts), cfg.batch_size):
                chunk = texts[start : start + cfg.batch_size]
                enc = [self._vocab.encode(t, cfg.encoder_max_length) for t in chunk]
                width = max(len(e) for e in enc)
                input_ids = torch.tensor([e + [pad] * (width - len(e)) for e in enc])
                # scaffold and placeholder tokens are banned outright, so
                # with min_new_tokens the output is always >= 1 real word
                banned = [
                    self._vocab.mask_id,
                    self._vocab.unk_id,
                    self._vocab.pad_id,
                    self._vocab.bos_id,
                ]
                generated = _guard_oom(
                    lambda: self._model.generate(
                        input_ids,
                        attention_mask=(input_ids != pad).long(),
                        max_new_tokens=cfg.decoder_max_length,
                        min_new_tokens=1,
                        num_beams=1,
                        do_sample=False,
                        suppress_tokens=banned,
                    )
                )
                outputs.extend(self._vocab.decode(row.tolist()) for row in generated)
        return outputs

    def save(self, out_dir: str | Path) -> None:
        import torch

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / CHECKPOINT_MANIFEST).write_text(
            json.dumps({"backend": self.name}) + "\n", encoding="utf-8"
        )
        dump_config(self._config, out_dir / "config.txt")
        self._vocab.save(out_dir / "vocab.json")
        torch.save(self._model.state_dict(), out_dir / "weights.pt")

    @classmethod
    def load(cls, ckpt_dir: Path) -> "TinySeq2SeqBackend":
        import torch

        config = load_config(ckpt_dir / "config.txt")
        vocab = Vocab.load(ckpt_dir / "vocab.json")
        backend = cls(config, vocab)
        state = torch.load(ckpt_dir / "weights.pt", map_location="cpu", weights_only=True)
        backend._model.load_state_dict(state)
        return backend


def _guard_oom(step):
    try:
        return step()
    except MemoryError as exc:
        raise ResourceError(_OOM_GUIDANCE) from exc
    except RuntimeError as exc:
        if "out of memory" in str(exc).lower():
            raise ResourceError(_OOM_GUIDANCE) from exc
        raise


def build_backend(config: TrainConfig, vocab: Vocab) -> Backend:
    """Instantiate the backend named by the config's model label."""
    if config.model == "identity":
        return IdentityBackend()
    return TinySeq2SeqBackend(config, vocab)


def load_checkpoint(ckpt_dir: str | Path) -> Backend:
    """Reload a saved backend for inference.

    Raises:
        CheckpointError: directory or manifest missing, or unknown backend.
    """
    ckpt = Path(ckpt_dir)
    manifest = ckpt / CHECKPOINT_MANIFEST
    if not manifest.is_file():
        raise CheckpointError(f"{ckpt}: not a checkpoint (no {CHECKPOINT_MANIFEST})")
    try:
        name = json.loads(manifest.read_text(encoding="utf-8"))["backend"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CheckpointError(f"{ckpt}: unreadable manifest: {exc}") from exc
    if name == IdentityBackend.name:
        return IdentityBackend()
    if name == TinySeq2SeqBackend.name:
        try:
            return TinySeq2SeqBackend.load(ckpt)
        except (OSError, ValueError, KeyError) as exc:
            raise CheckpointError(f"{ckpt}: failed to load weights: {exc}") from exc
    raise CheckpointError(f"{ckpt}: unknown backend {name!r}")
