"""Chart rendering for the report pipeline.

Figures are written straight to files with the Agg backend so the
package never needs a display. PNG metadata is pinned to keep output
bytes stable across runs on the same library versions.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import EmptyResults
from .report import EqualDifferentBreakdown, SystemResult

# Identifies the producer in PNG headers; fixed so reruns are byte-stable.
_PNG_METADATA = {"Software": "clinwer"}


def render_system_comparison(results: Sequence[SystemResult], path: str | Path) -> None:
    """Render grouped macro/micro error-rate bars, one group per system.

    Raises:
        EmptyResults: nothing to plot.
    """
    if not results:
        raise EmptyResults("no system results to plot")
    labels = [r.system for r in results]
    macro = [float(r.macro_wer) * 100.0 for r in results]
    micro = [float(r.micro_wer) * 100.0 for r in results]
    positions = range(len(results))
    width = 0.38

    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(results)), 4.0))
    try:
        ax.bar([p - width / 2 for p in positions], macro, width, label="macro", color="#4878cf")
        ax.bar([p + width / 2 for p in positions], micro, width, label="micro", color="#ee854a")
        ax.set_xticks(list(positions))
        ax.set_xticklabels(labels, rotation=20, ha="right")
        ax.set_ylabel("word error rate (%)")
        ax.set_title("System comparison")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    finally:
        plt.close(fig)


def render_equal_different(
    breakdowns: Sequence[EqualDifferentBreakdown], path: str | Path
) -> None:
    """Render stacked equal/different utterance counts per system.

    Raises:
        EmptyResults: nothing to plot.
    """
    if not breakdowns:
        raise EmptyResults("no breakdowns to plot")
    labels = [b.system for b in breakdowns]
    equal = [b.equal for b in breakdowns]
    different = [b.different for b in breakdowns]
    positions = range(len(breakdowns))

    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(breakdowns)), 4.0))
    try:
        ax.bar(list(positions), equal, label="equal", color="#6acc64")
        ax.bar(list(positions), different, bottom=equal, label="different", color="#d65f5f")
        ax.set_xticks(list(positions))
        ax.set_xticklabels(labels, rotation=20, ha="right")
        ax.set_ylabel("utterances")
        ax.set_title("Exact matches vs differences")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    finally:
        plt.close(fig)
