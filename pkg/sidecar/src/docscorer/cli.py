"""Command line entry points.

Usage:
  docscorer train --data labeled/ --out model/ [--seed 1] [--lr 2e-5]
                  [--epochs 3] [--batch-size 32] [--dim 64] [--layers 2]
  docscorer serve --model model/
"""

import argparse
import logging
import sys
from pathlib import Path

from .model import ModelConfig
from .serve import serve
from .train import TrainConfig, train

EXIT_USAGE = 2
EXIT_FAILURE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="docscorer")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a scorer from labeled JSONL")
    p_train.add_argument("--data", type=Path, required=True,
                         help="labeled JSONL file or export directory")
    p_train.add_argument("--out", type=Path, required=True)
    p_train.add_argument("--seed", type=int, default=1)
    p_train.add_argument("--lr", type=float, default=2e-5)
    p_train.add_argument("--epochs", type=int, default=3)
    p_train.add_argument("--batch-size", type=int, default=32)
    p_train.add_argument("--dim", type=int, default=64)
    p_train.add_argument("--layers", type=int, default=2)
    p_train.add_argument("--max-len", type=int, default=128)

    p_serve = sub.add_parser("serve", help="serve scores over stdin/stdout")
    p_serve.add_argument("--model", type=Path, required=True)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = TrainConfig(
                lr=args.lr,
                epochs=args.epochs,
                batch_size=args.batch_size,
                seed=args.seed,
                model=ModelConfig(dim=args.dim, layers=args.layers, max_len=args.max_len),
            )
            metrics = train(args.data, args.out, config)
            print(f"auc_valid={metrics['auc_valid']:.4f} "
                  f"accuracy_valid={metrics['accuracy_valid']:.4f}")
            return 0
        return serve(args.model)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
