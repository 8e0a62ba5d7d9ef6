"""Text normalization for word-level scoring.

Raw transcripts disagree on case and punctuation, which would register as
word errors even when the words match. This module reduces text to a
well-defined word sequence under an explicit, reversible configuration so
that every downstream metric operates on the same notion of "word".
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MASK_TOKEN = "<mask>"

# A normalized word sequence: non-empty tokens, no internal whitespace.
TokenSeq = tuple[str, ...]

_MASK_SPLIT_RE = re.compile(r"(<mask>)", re.IGNORECASE)
_PUNCT_RE = re.compile(r"[^\w\s']")
# Apostrophes are word-internal only; anything else becomes a separator.
_ORPHAN_APOSTROPHE_RE = re.compile(r"(?<!\w)'|'(?!\w)")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class NormConfig:
    """Switches for the normalization pipeline.

    The defaults lowercase the text, strip punctuation while keeping
    intra-word apostrophes, collapse whitespace runs, and keep the literal
    ``<mask>`` token intact as a single word so masked datasets survive a
    round trip through the normalizer.
    """

    lowercase: bool = True
    strip_punctuation: bool = True
    collapse_whitespace: bool = True
    keep_mask_token: bool = True


DEFAULT_CONFIG = NormConfig()


def _strip_punctuation(text: str) -> str:
    # Punctuation must become a space, not vanish: deleting it outright
    # would splice neighbouring words together ("well-known" -> "wellknown").
    text = _PUNCT_RE.sub(" ", text)
    return _ORPHAN_APOSTROPHE_RE.sub(" ", text)


def normalize_text(text: str, config: NormConfig = DEFAULT_CONFIG) -> str:
    """Apply the configured string-level normalization without tokenizing."""
    if config.lowercase:
        text = text.lower()
    if config.strip_punctuation:
        if config.keep_mask_token:
            parts = _MASK_SPLIT_RE.split(text)
            text = "".join(
                part if part.lower() == MASK_TOKEN else _strip_punctuation(part)
                for part in parts
            )
        else:
            text = _strip_punctuation(text)
    if config.collapse_whitespace:
        text = _WS_RE.sub(" ", text).strip()
    return text


def normalize(text: str, config: NormConfig = DEFAULT_CONFIG) -> TokenSeq:
    """Normalize raw text to its word sequence.

    Total and pure: empty input gives an empty sequence, and the same
    input with the same config always gives the same tokens. Idempotent at
    the token level: re-normalizing the joined tokens changes nothing.
    """
    return tuple(normalize_text(text, config).split())
