"""Command-line entry point.

Usage:
    forge pipeline --config pipeline.json
    forge extract --out runs/r1 --langs python,go corpus/
    forge clean --out runs/r1
    forge score --out runs/r1 [--backend baseline]
    forge dedup --out runs/r1 --holdout holdout.jsonl [--exact-confirm]
    forge split --out runs/r1 --seed 7
    forge stats --out runs/r1 data.jsonl [...]
    forge export-holdout --out holdout.jsonl --code-field canonical_solution bench.jsonl

Exit codes: 0 success, 2 config error, 3 stage failure, 4 data-quality
failure (more than 1% malformed input lines).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import pipeline as pl
from .filters import FilterConfig
from .gate import GateConfig
from .languages import parse_language
from .stats import MalformedDataError, compute_stats, export_holdout, write_stats

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3
EXIT_DATA_QUALITY = 4


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="pipeline config JSON")
    p.add_argument("--out", type=Path, help="output / run directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--langs", help="comma-separated language names")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="forge", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name in ("extract", "clean", "score", "dedup", "split", "stats", "pipeline"):
        p = sub.add_parser(name)
        _add_common(p)
        if name == "extract":
            p.add_argument("roots", nargs="*", type=Path)
        if name == "score":
            p.add_argument("--backend", choices=("baseline", "sidecar"), default="baseline")
            p.add_argument("--sidecar-cmd", help="command line for the scorer child process")
            p.add_argument("--threshold", type=float, default=0.5)
            p.add_argument("--fail-open", action="store_true")
        if name == "dedup":
            p.add_argument("--holdout", type=Path)
            p.add_argument("--threshold", type=float, default=0.8)
            p.add_argument("--exact-confirm", action="store_true")
        if name == "stats":
            p.add_argument("files", nargs="*", type=Path)
        if name == "pipeline":
            p.add_argument("--resume", action="store_true")
            p.add_argument("roots", nargs="*", type=Path)

    p = sub.add_parser("export-holdout")
    _add_common(p)
    p.add_argument("benchmark", type=Path)
    p.add_argument("--code-field", default="code")
    p.add_argument("--key-field")
    p.add_argument("--lang-field", default="lang")
    return ap


def _load_config(args: argparse.Namespace, need_roots: bool = False) -> pl.PipelineConfig:
    overrides = {}
    if args.out:
        overrides["out_dir"] = str(args.out)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.jobs:
        overrides["jobs"] = args.jobs
    if args.config:
        cfg = pl.PipelineConfig.from_file(args.config, overrides)
    else:
        roots = [Path(r) for r in getattr(args, "roots", []) or []]
        if need_roots and not roots:
            raise pl.ConfigError("corpus roots required (positional or --config)")
        if not args.out:
            raise pl.ConfigError("--out is required without --config")
        cfg = pl.PipelineConfig(
            corpus_roots=roots,
            out_dir=args.out,
            seed=args.seed if args.seed is not None else 1,
            jobs=args.jobs,
        )
    if args.langs:
        langs = []
        for name in args.langs.split(","):
            lang = parse_language(name.strip())
            if lang is None:
                raise pl.ConfigError(f"unknown language: {name.strip()}")
            langs.append(lang)
        cfg.languages = langs
    if not cfg.languages and not args.config:
        from .languages import LanguageId

        cfg.languages = list(LanguageId)
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.cmd == "pipeline":
            cfg = _load_config(args, need_roots=True)
            run_dir = pl.run_pipeline(cfg, resume=getattr(args, "resume", False))
            print(f"pipeline complete: {run_dir}")
            return EXIT_OK

        if args.cmd in ("extract", "clean", "score", "dedup", "split"):
            cfg = _load_config(args, need_roots=(args.cmd == "extract"))
            if args.cmd == "score":
                cfg.gate = GateConfig(
                    threshold=args.threshold,
                    backend=args.backend,
                    sidecar_cmd=args.sidecar_cmd.split() if args.sidecar_cmd else None,
                    fail_open=args.fail_open,
                )
            if args.cmd == "dedup":
                if args.holdout:
                    cfg.holdout_path = args.holdout
                cfg.dedup_threshold = args.threshold
                cfg.exact_confirm = args.exact_confirm
            stage = {"score": "gate"}.get(args.cmd, args.cmd)
            counts = pl._STAGE_FNS[stage](cfg, Path(cfg.out_dir))
            print(json.dumps({stage: counts}, indent=2, sort_keys=True))
            return EXIT_OK

        if args.cmd == "stats":
            files = args.files or [Path(args.out) / "d_paired.jsonl"]
            stats = compute_stats(files)
            if args.out:
                write_stats(stats, args.out)
            print(json.dumps(stats.to_dict(), indent=2, sort_keys=True))
            return EXIT_OK

        if args.cmd == "export-holdout":
            if not args.out:
                raise pl.ConfigError("--out is required")
            field_map = {"code": args.code_field, "lang": args.lang_field}
            if args.key_field:
                field_map["key"] = args.key_field
            n = export_holdout(args.benchmark, args.out, field_map)
            print(f"wrote {n} holdout records to {args.out}")
            return EXIT_OK

        raise pl.ConfigError(f"unknown command: {args.cmd}")
    except pl.ConfigError as exc:
        logger.error("config error: %s", exc)
        return EXIT_CONFIG
    except MalformedDataError as exc:
        logger.error("data quality: %s", exc)
        return EXIT_DATA_QUALITY
    except (pl.StageError, OSError, KeyError) as exc:
        logger.error("stage failure: %s", exc)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
