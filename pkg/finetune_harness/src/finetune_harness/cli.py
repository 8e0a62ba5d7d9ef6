"""Command line entry points: train and correct.

Exit codes: 1 for usage and configuration problems, 2 for malformed
data or checkpoints, 3 for I/O failures and resource exhaustion.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import load_config
from .correct import correct
from .errors import CheckpointError, ConfigError, FormatError, ResourceError
from .train import train


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _cmd_train(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    overrides = {}
    if args.max_epochs is not None:
        overrides["max_epochs"] = args.max_epochs
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        config = replace(config, **overrides)
    out_dir, rows = train(config, args.train, args.eval, args.out)
    for row in rows:
        print(f"epoch={row.epoch} train_loss={row.train_loss:.6f} eval_loss={row.eval_loss:.6f}")
    print(f"saved checkpoint to {out_dir}")
    return 0


def _cmd_correct(args: argparse.Namespace) -> int:
    count = correct(args.checkpoint, args.transcripts, args.out)
    print(f"wrote {count} records to {args.out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="finetune-harness",
        description=(
            "Fine-tune a seq2seq model on generated self-supervised datasets"
            " and rewrite transcript hypotheses with the result."
        ),
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("train", help="fine-tune on a train/eval dataset pair")
    p.add_argument("--config", required=True, help="key=value training config file")
    p.add_argument("--train", required=True, help="training dataset file")
    p.add_argument("--eval", required=True, help="evaluation dataset file")
    p.add_argument("--out", required=True, help="checkpoint output directory")
    p.add_argument("--max-epochs", type=int, default=None, help="override the config value")
    p.add_argument("--seed", type=int, default=None, help="override the config value")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("correct", help="rewrite hypotheses with a checkpoint")
    p.add_argument("--checkpoint", required=True, help="checkpoint directory")
    p.add_argument("--transcripts", required=True, help="transcript records to correct")
    p.add_argument("--out", required=True, help="corrected transcript output file")
    p.set_defaults(func=_cmd_correct)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, CheckpointError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
