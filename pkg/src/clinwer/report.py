"""Comparative analyses across transcription systems.

Builds the per-system word error rate comparison, the equal/different
utterance breakdown, and writes both as delimited chart data.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Literal

from .corpus import TranscriptPair
from .errors import DataError, EmptyResults
from .metrics import Grouping, corpus_wer, percent_str
from .textnorm import DEFAULT_CONFIG, NormConfig, normalize

ChartFormat = Literal["csv", "jsonl"]


@dataclass(frozen=True)
class SystemResult:
    """One system's corpus-level scores."""

    system: str
    macro_wer: Fraction
    micro_wer: Fraction
    n_groups: int


@dataclass(frozen=True)
class EqualDifferentBreakdown:
    """How many of a system's utterances match the reference exactly."""

    system: str
    equal: int
    different: int

    @property
    def total(self) -> int:
        return self.equal + self.different


def compare_systems(
    corpora: Mapping[str, Sequence[TranscriptPair]],
    grouping: Grouping = "file",
    config: NormConfig = DEFAULT_CONFIG,
    jobs: int = 1,
) -> list[SystemResult]:
    """Score every system and rank them best (lowest macro rate) first.

    Args:
        corpora: transcript pairs keyed by system label; every system
            needs at least one scoreable pair.

    Raises:
        DataError: a system could not be scored; the message names it.
    """
    results: list[SystemResult] = []
    for system in sorted(corpora):
        try:
            report = corpus_wer(corpora[system], grouping=grouping, config=config, jobs=jobs)
        except DataError as exc:
            raise type(exc)(f"system {system!r}: {exc}") from exc
        results.append(
            SystemResult(
                system=system,
                macro_wer=report.macro_wer,
                micro_wer=report.micro_wer,
                n_groups=len(report.per_group),
            )
        )
    results.sort(key=lambda r: (r.macro_wer, r.system))
    return results


def equal_different(
    pairs: Sequence[TranscriptPair],
    source: str,
    config: NormConfig = DEFAULT_CONFIG,
) -> EqualDifferentBreakdown:
    """Count pairs whose hypothesis equals the reference after normalization.

    Equality uses the same normalizer as scoring, so a pair counts as
    equal exactly when its word error rate is zero. Pairs with an absent
    hypothesis count as different.

    Args:
        source: label for the hypothesis stream (an upstream system name
            or a corrected-output name such as "aws+model").
    """
    equal = 0
    different = 0
    for pair in pairs:
        if pair.hypothesis is not None and normalize(pair.reference.text, config) == normalize(
            pair.hypothesis.text, config
        ):
            equal += 1
        else:
            different += 1
    return EqualDifferentBreakdown(system=source, equal=equal, different=different)


def emit_chart_data(
    results: Sequence[SystemResult], fmt: ChartFormat, path: str | Path
) -> None:
    """Write the system comparison as delimited chart data.

    Columns are system, macro_wer_pct, micro_wer_pct with percentages
    rendered to two decimals. Output bytes depend only on the results.

    Raises:
        EmptyResults: nothing to write.
    """
    if not results:
        raise EmptyResults("refusing to write an empty system comparison")
    lines: list[str] = []
    if fmt == "csv":
        lines.append("system,macro_wer_pct,micro_wer_pct")
        for res in results:
            lines.append(
                f"{_csv_field(res.system)},{percent_str(res.macro_wer)},{percent_str(res.micro_wer)}"
            )
    elif fmt == "jsonl":
        for res in results:
            lines.append(
                f'{{"system": {json.dumps(res.system, ensure_ascii=False)}, '
                f'"macro_wer_pct": {percent_str(res.macro_wer)}, '
                f'"micro_wer_pct": {percent_str(res.micro_wer)}}}'
            )
    else:
        raise ValueError(f"unknown chart format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_breakdown_data(
    breakdowns: Sequence[EqualDifferentBreakdown], fmt: ChartFormat, path: str | Path
) -> None:
    """Write equal/different breakdowns as delimited chart data.

    Columns are system, equal, different, total.

    Raises:
        EmptyResults: nothing to write.
    """
    if not breakdowns:
        raise EmptyResults("refusing to write an empty breakdown")
    lines: list[str] = []
    if fmt == "csv":
        lines.append("system,equal,different,total")
        for b in breakdowns:
            lines.append(f"{_csv_field(b.system)},{b.equal},{b.different},{b.total}")
    elif fmt == "jsonl":
        for b in breakdowns:
            lines.append(
                f'{{"system": {json.dumps(b.system, ensure_ascii=False)}, '
                f'"equal": {b.equal}, "different": {b.different}, "total": {b.total}}}'
            )
    else:
        raise ValueError(f"unknown chart format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _csv_field(value: str) -> str:
    if any(ch in value for ch in ',"\n\r'):
        return '"' + value.replace('"', '""') + '"'
    return value
