"""Command-line entry points.

Exit codes: 0 success, 1 usage errors, 2 data or precondition errors,
3 I/O and network errors. Relative input paths are resolved under
$CLINWER_DATA_DIR when that variable is set; output paths never are.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import fetch as fetch_mod
from . import report as report_mod
from . import selfsup
from .corpus import (
    clean_records,
    corpus_stats,
    load_dialogue_corpus,
    load_pubmed_raw,
    load_pubmed_records,
    write_pubmed_records,
)
from .errors import DataError, FormatError, UsageError
from .metrics import corpus_wer, percent_str
from .textnorm import NormConfig

ENV_DATA_DIR = "CLINWER_DATA_DIR"

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; route through the
    # package's usage error instead so main() can map it to exit 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _in_path(value: str) -> Path:
    path = Path(value)
    if path.is_absolute():
        return path
    base = os.environ.get(ENV_DATA_DIR)
    if base:
        return Path(base) / path
    return path


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _task_arg(text: str) -> str:
    task = text.replace("-", "_")
    if task not in selfsup.TASKS:
        raise argparse.ArgumentTypeError(
            f"unknown task {text!r}; choose from {', '.join(selfsup.TASKS)}"
        )
    return task


def _add_norm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--no-lowercase",
        action="store_true",
        help="keep the original casing when normalizing",
    )
    parser.add_argument(
        "--keep-punct",
        action="store_true",
        help="keep punctuation as part of words when normalizing",
    )


def _norm_config(args: argparse.Namespace) -> NormConfig:
    return NormConfig(
        lowercase=not args.no_lowercase,
        strip_punctuation=not args.keep_punct,
    )


def _detect_kind(path: Path) -> str:
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON ({exc.msg})", line=lineno) from exc
            if isinstance(obj, dict) and "pmid" in obj:
                return "pubmed"
            return "dialogue"
    raise FormatError("file holds no records")


def _cmd_stats(args: argparse.Namespace) -> int:
    path = _in_path(args.path)
    kind = _detect_kind(path)
    config = _norm_config(args)
    if kind == "pubmed":
        stats = corpus_stats(load_pubmed_records(path), config)
        extra = ""
    else:
        pairs = load_dialogue_corpus(path)
        stats = corpus_stats(pairs, config)
        extra = f" systems={len({p.system for p in pairs})}"
    print(
        f"kind={kind} files={stats.n_files}"
        f" utterances_per_file={float(stats.mean_utterances_per_file):.2f}"
        f" words_per_utterance={float(stats.mean_words_per_utterance):.2f}"
        f" pairs={stats.n_pairs}{extra}"
    )
    return 0


def _cmd_clean(args: argparse.Namespace) -> int:
    raw = load_pubmed_raw(_in_path(args.input))
    cleaned, dropped = clean_records(raw)
    write_pubmed_records(cleaned, args.output)
    print(f"kept={len(cleaned)} dropped={dropped} wrote {args.output}")
    return 0


def _cmd_gen_dataset(args: argparse.Namespace) -> int:
    records = load_pubmed_records(_in_path(args.input))
    if args.task == selfsup.TASK_SUMMARIZATION:
        examples = selfsup.gen_summarization(records)
    elif args.task == selfsup.TASK_PARAPHRASE:
        if args.paraphrases is None:
            raise UsageError("--paraphrases is required for the paraphrase task")
        paraphrases = selfsup.load_paraphrases(_in_path(args.paraphrases))
        examples = selfsup.pair_paraphrases(records, paraphrases)
    else:
        try:
            examples = selfsup.gen_mask_filling(records, args.mask_fraction, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.split is not None:
        try:
            spec = selfsup.SplitSpec(train_fraction=args.split, seed=args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        train, evaluation = selfsup.split(examples, spec)
        train_path = out_dir / f"{args.task}.train.jsonl"
        eval_path = out_dir / f"{args.task}.eval.jsonl"
        selfsup.write_examples(train, train_path)
        selfsup.write_examples(evaluation, eval_path)
        print(
            f"task={args.task} examples={len(examples)} train={len(train)}"
            f" eval={len(evaluation)} wrote {train_path} {eval_path}"
        )
    else:
        all_path = out_dir / f"{args.task}.all.jsonl"
        selfsup.write_examples(examples, all_path)
        print(f"task={args.task} examples={len(examples)} wrote {all_path}")
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    pairs = load_dialogue_corpus(_in_path(args.refs))
    systems = sorted({p.system for p in pairs})
    if args.system is not None:
        selected = [p for p in pairs if p.system == args.system]
        if not selected:
            raise DataError(
                f"system {args.system!r} not in corpus; available: {', '.join(systems)}"
            )
        label = args.system
    elif len(systems) == 1:
        selected = pairs
        label = systems[0]
    else:
        raise UsageError(
            f"corpus holds {len(systems)} systems ({', '.join(systems)});"
            " pick one with --system"
        )
    result = corpus_wer(
        selected, grouping=args.grouping, config=_norm_config(args), jobs=args.jobs
    )
    if args.out:
        lines = ["group,wer_pct"]
        lines.extend(
            f"{gid},{percent_str(rate)}" for gid, rate in result.per_group
        )
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(
        f"system={label} grouping={args.grouping} groups={len(result.per_group)}"
        f" macro_wer={percent_str(result.macro_wer)}%"
        f" micro_wer={percent_str(result.micro_wer)}%"
    )
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    pairs = load_dialogue_corpus(_in_path(args.refs))
    corpora: dict[str, list] = {}
    for pair in pairs:
        corpora.setdefault(pair.system, []).append(pair)
    config = _norm_config(args)
    results = report_mod.compare_systems(
        corpora, grouping=args.grouping, config=config, jobs=args.jobs
    )
    breakdowns = [
        report_mod.equal_different(corpora[system], system, config)
        for system in sorted(corpora)
    ]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        out_dir / f"system_comparison.{args.format}",
        out_dir / f"equal_different.{args.format}",
    ]
    report_mod.emit_chart_data(results, args.format, written[0])
    report_mod.emit_breakdown_data(breakdowns, args.format, written[1])
    if not args.no_figures:
        # matplotlib is slow to import; only the figure path pays for it
        from . import figures

        comparison_png = out_dir / "system_comparison.png"
        breakdown_png = out_dir / "equal_different.png"
        figures.render_system_comparison(results, comparison_png)
        figures.render_equal_different(breakdowns, breakdown_png)
        written.extend([comparison_png, breakdown_png])
    for res in results:
        print(
            f"system={res.system} macro_wer={percent_str(res.macro_wer)}%"
            f" micro_wer={percent_str(res.micro_wer)}% groups={res.n_groups}"
        )
    print(f"wrote {' '.join(str(p) for p in written)}")
    return 0


def _cmd_fetch_pubmed(args: argparse.Namespace) -> int:
    count = fetch_mod.fetch_pubmed(
        args.output,
        terms=tuple(args.terms),
        max_records=args.max_records,
        rate_limit=args.rate_limit,
        email=args.email,
        api_key=args.api_key,
    )
    print(f"wrote {count} records to {args.output}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="clinwer",
        description=(
            "Word error rate evaluation for clinical dialogue transcripts and"
            " self-supervised dataset generation from biomedical abstracts."
        ),
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log progress details"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("stats", help="print corpus statistics")
    p.add_argument("path", help="line-delimited corpus file (kind auto-detected)")
    _add_norm_flags(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("clean", help="clean raw title/abstract records")
    p.add_argument("input", help="raw records, line-delimited JSON")
    p.add_argument("output", help="where cleaned records go")
    p.set_defaults(func=_cmd_clean)

    p = sub.add_parser("gen-dataset", help="build self-supervised training pairs")
    p.add_argument("input", help="cleaned title/abstract records")
    p.add_argument("out_dir", help="directory for the generated files")
    p.add_argument(
        "--task",
        required=True,
        type=_task_arg,
        help="summarization, paraphrase or mask-filling",
    )
    p.add_argument(
        "--seed", required=True, type=int, help="base seed for masking and splitting"
    )
    p.add_argument(
        "--split",
        type=_fraction_arg,
        default=None,
        metavar="FRACTION",
        help="train fraction; when given, writes .train/.eval files instead of .all",
    )
    p.add_argument(
        "--mask-fraction",
        type=_fraction_arg,
        default=Fraction(1, 4),
        metavar="FRACTION",
        help="fraction of title words to mask (mask-filling only, default 1/4)",
    )
    p.add_argument(
        "--paraphrases",
        default=None,
        help="pmid-to-paraphrase file (paraphrase task only)",
    )
    p.set_defaults(func=_cmd_gen_dataset)

    p = sub.add_parser("score", help="score one system against its references")
    p.add_argument("--refs", required=True, help="transcript pairs, line-delimited JSON")
    p.add_argument("--system", default=None, help="system to score (needed when several)")
    p.add_argument(
        "--grouping",
        choices=("file", "utterance"),
        default="file",
        help="alignment granularity (default: file)",
    )
    p.add_argument(
        "--jobs", type=_positive_int, default=1, help="worker processes for scoring"
    )
    p.add_argument("--out", default=None, help="also write a per-group CSV table")
    _add_norm_flags(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser(
        "report", help="compare all systems; write chart data and figures"
    )
    p.add_argument("--refs", required=True, help="transcript pairs, line-delimited JSON")
    p.add_argument("--out-dir", required=True, help="directory for report files")
    p.add_argument(
        "--format",
        choices=("csv", "jsonl"),
        default="csv",
        help="chart data format (default: csv)",
    )
    p.add_argument(
        "--grouping",
        choices=("file", "utterance"),
        default="file",
        help="alignment granularity (default: file)",
    )
    p.add_argument(
        "--jobs", type=_positive_int, default=1, help="worker processes for scoring"
    )
    p.add_argument(
        "--no-figures", action="store_true", help="skip rendering the PNG figures"
    )
    _add_norm_flags(p)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("fetch-pubmed", help="download title/abstract records")
    p.add_argument("output", help="where raw records go")
    p.add_argument(
        "--terms",
        nargs="+",
        default=list(fetch_mod.DEFAULT_TERMS),
        help="search terms, joined conjunctively",
    )
    p.add_argument("--max-records", type=_positive_int, default=100)
    p.add_argument("--rate-limit", type=float, default=fetch_mod.DEFAULT_RATE_LIMIT)
    p.add_argument("--email", default=None, help="contact email passed to the service")
    p.add_argument("--api-key", default=None, help="service API key")
    p.set_defaults(func=_cmd_fetch_pubmed)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
