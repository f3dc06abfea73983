"""End-to-end staged pipeline driver.

Stages run in order — extract, clean, gate, dedup, split, stats — each
persisting its JSONL output under the run directory, so a crashed run can
resume from the last completed stage. A run manifest records the config,
seed, and per-stage accounting (input = kept + dropped for every stage).
One seed drives every stochastic step, so identical config + seed
reproduces byte-identical outputs.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import minhash
from .extract import (
    ExtractCounters,
    extract_inline_blocks,
    extract_units,
    tokenize_text,
)
from .docstyle import analyze_docstring
from .filters import FilterConfig, clean_inline, clean_pair, filter_report, write_report
from .gate import GateConfig, SidecarClient, lexical_overlap_score
from .ingest import ScanCounters, scan_corpus
from .languages import LanguageId, parse_language
from .split import SplitSample, apply_split, sample_subsets, split_by_repo, write_sample_assignments
from .stats import compute_stats, write_stats
from .syntax import ParseFailure, parse_file

logger = logging.getLogger(__name__)

STAGES = ("extract", "clean", "gate", "dedup", "split", "stats")


class ConfigError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


@dataclass
class PipelineConfig:
    corpus_roots: List[Path]
    out_dir: Path
    languages: List[LanguageId] = field(default_factory=list)
    seed: int = 1
    filter_config: FilterConfig = field(default_factory=FilterConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    holdout_path: Optional[Path] = None
    dedup_threshold: float = 0.8
    exact_confirm: bool = False
    split_fractions: Dict[str, float] = field(
        default_factory=lambda: {"train": 0.8, "valid": 0.1, "test": 0.1}
    )
    jobs: int = 1

    def validate(self) -> None:
        if not self.corpus_roots:
            raise ConfigError("at least one corpus root is required")
        for root in self.corpus_roots:
            if not Path(root).is_dir():
                raise ConfigError(f"corpus root not found: {root}")
        if not self.languages:
            raise ConfigError("language set must not be empty")
        if abs(sum(self.split_fractions.values()) - 1.0) > 1e-9:
            raise ConfigError("split fractions must sum to 1")

    @classmethod
    def from_file(cls, path: Path, overrides: Optional[dict] = None) -> "PipelineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        raw.update(overrides or {})
        langs = []
        for name in raw.get("languages", []):
            lang = parse_language(name)
            if lang is None:
                raise ConfigError(f"unknown language: {name}")
            langs.append(lang)
        filter_cfg = (
            FilterConfig.from_file(raw["filter_config"])
            if raw.get("filter_config")
            else FilterConfig()
        )
        gate_raw = raw.get("gate", {})
        gate_cfg = GateConfig(
            threshold=gate_raw.get("threshold", 0.5),
            backend=gate_raw.get("backend", "baseline"),
            sidecar_cmd=gate_raw.get("sidecar_cmd"),
            fail_open=gate_raw.get("fail_open", False),
        )
        return cls(
            corpus_roots=[Path(p) for p in raw["corpus_roots"]],
            out_dir=Path(raw["out_dir"]),
            languages=langs,
            seed=int(raw.get("seed", 1)),
            filter_config=filter_cfg,
            gate=gate_cfg,
            holdout_path=Path(raw["holdout"]) if raw.get("holdout") else None,
            dedup_threshold=float(raw.get("dedup_threshold", 0.8)),
            exact_confirm=bool(raw.get("exact_confirm", False)),
            split_fractions=raw.get(
                "split_fractions", {"train": 0.8, "valid": 0.1, "test": 0.1}
            ),
            jobs=int(raw.get("jobs", 1)),
        )

    def fingerprint(self) -> dict:
        d = {
            "corpus_roots": [str(p) for p in self.corpus_roots],
            "languages": [l.value for l in self.languages],
            "seed": self.seed,
            "dedup_threshold": self.dedup_threshold,
            "exact_confirm": self.exact_confirm,
            "split_fractions": self.split_fractions,
            "gate_threshold": self.gate.threshold,
            "gate_backend": self.gate.backend,
            "holdout": str(self.holdout_path) if self.holdout_path else None,
        }
        return d


# ---------------------------------------------------------------------------
# JSONL helpers


def _write_jsonl(path: Path, records: List[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
    tmp.replace(path)


def _read_jsonl(path: Path) -> List[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def _pair_key(rec: dict) -> str:
    return f"{rec['repo']}/{rec['path']}:{rec['identifier']}@{rec['span'][0]}"


# ---------------------------------------------------------------------------
# stages


def _stage_extract(config: PipelineConfig, run_dir: Path) -> Dict[str, int]:
    scan = ScanCounters()
    counters = ExtractCounters()
    pairs: List[dict] = []
    unimodal: List[dict] = []
    blocks: List[dict] = []
    parse_failures = 0
    for src in scan_corpus(config.corpus_roots, set(config.languages), counters=scan):
        try:
            tree = parse_file(src)
        except ParseFailure as exc:
            parse_failures += 1
            logger.warning("parse failure %s/%s: %s", src.repo_id, src.rel_path, exc)
            continue
        units = extract_units(tree, src, counters)
        for u in units:
            rec = {
                "repo": u.repo_id,
                "path": u.rel_path,
                "lang": u.language.value,
                "kind": u.kind,
                "identifier": u.identifier,
                "code": u.code,
                "span": list(u.code_span),
                "code_tokens": u.code_tokens,
                "tokenizer_fallback": u.tokenizer_fallback,
            }
            if u.docstring_raw:
                rec["docstring_raw"] = u.docstring_raw
                pairs.append(rec)
            else:
                unimodal.append(rec)
        for b in extract_inline_blocks(tree, src, counters):
            blocks.append(
                {
                    "repo": b.repo_id,
                    "path": b.rel_path,
                    "lang": b.language.value,
                    "comment": b.comment,
                    "comment_tokens": b.comment_tokens,
                    "prev_context": b.prev_context,
                    "next_context": b.next_context,
                    "enclosing": b.enclosing_identifier,
                }
            )
    _write_jsonl(run_dir / "extracted_pairs.jsonl", pairs)
    _write_jsonl(run_dir / "d_unimodal.jsonl", unimodal)
    _write_jsonl(run_dir / "extracted_blocks.jsonl", blocks)
    return {
        "files_in": scan.emitted + scan.skipped,
        "files_kept": scan.emitted - parse_failures,
        "files_dropped": scan.skipped + parse_failures,
        "pairs_out": len(pairs),
        "unimodal_out": len(unimodal),
        "blocks_out": len(blocks),
        "dropped_class_token_limit": counters.dropped_class_token_limit,
    }


def _stage_clean(config: PipelineConfig, run_dir: Path) -> Dict[str, int]:
    from .extract import ExtractedUnit, InlineSample

    pairs_in = _read_jsonl(run_dir / "extracted_pairs.jsonl")
    blocks_in = _read_jsonl(run_dir / "extracted_blocks.jsonl")
    traces = []
    totals: Dict[str, int] = {}
    pairs_out: List[dict] = []
    for rec in pairs_in:
        lang = parse_language(rec["lang"])
        totals[rec["lang"]] = totals.get(rec["lang"], 0) + 1
        unit = ExtractedUnit(
            repo_id=rec["repo"],
            rel_path=rec["path"],
            language=lang,
            kind=rec["kind"],
            identifier=rec["identifier"],
            code=rec["code"],
            code_span=tuple(rec["span"]),
            code_tokens=rec["code_tokens"],
            docstring_raw=rec["docstring_raw"],
            tokenizer_fallback=rec.get("tokenizer_fallback", False),
        )
        cleaned, trace = clean_pair(unit, config.filter_config)
        traces.append(trace)
        if cleaned is None:
            continue
        meta = analyze_docstring(cleaned.docstring, lang)
        out = dict(rec)
        out["docstring"] = cleaned.docstring
        out["docstring_tokens"] = cleaned.docstring_tokens
        out["style"] = meta.style.value
        out["short_docstring"] = meta.short_docstring
        pairs_out.append(out)
    blocks_out: List[dict] = []
    for rec in blocks_in:
        lang = parse_language(rec["lang"])
        totals[rec["lang"]] = totals.get(rec["lang"], 0) + 1
        sample = InlineSample(
            repo_id=rec["repo"],
            rel_path=rec["path"],
            language=lang,
            comment=rec["comment"],
            comment_tokens=rec["comment_tokens"],
            prev_context=rec["prev_context"],
            next_context=rec["next_context"],
            enclosing_identifier=rec.get("enclosing"),
        )
        cleaned, trace = clean_inline(sample, config.filter_config)
        traces.append(trace)
        if cleaned is None:
            continue
        out = dict(rec)
        out["comment"] = cleaned.comment
        out["comment_tokens"] = cleaned.comment_tokens
        blocks_out.append(out)
    _write_jsonl(run_dir / "clean_pairs.jsonl", pairs_out)
    _write_jsonl(run_dir / "d_block.jsonl", blocks_out)
    report = filter_report(traces, totals)
    write_report(report, run_dir / "filter_report.json", run_dir / "filter_report.csv")
    return {
        "pairs_in": len(pairs_in),
        "pairs_kept": len(pairs_out),
        "pairs_dropped": len(pairs_in) - len(pairs_out),
        "blocks_in": len(blocks_in),
        "blocks_kept": len(blocks_out),
        "blocks_dropped": len(blocks_in) - len(blocks_out),
    }


def _stage_gate(config: PipelineConfig, run_dir: Path) -> Dict[str, int]:
    pairs = _read_jsonl(run_dir / "clean_pairs.jsonl")
    client: Optional[SidecarClient] = None
    if config.gate.backend == "sidecar":
        if not config.gate.sidecar_cmd:
            raise StageError("gate", "sidecar backend needs sidecar_cmd")
        client = SidecarClient(
            config.gate.sidecar_cmd,
            timeout_s=config.gate.timeout_s,
            fail_open=config.gate.fail_open,
        )
    kept: List[dict] = []
    try:
        if client is not None:
            bs = config.gate.batch_size
            for start in range(0, len(pairs), bs):
                chunk = pairs[start : start + bs]
                scores = client.score_batch(
                    [(r["code"], r["docstring"], r["lang"]) for r in chunk]
                )
                for rec, score in zip(chunk, scores):
                    rec["gate_score"] = round(score, 6)
                    if score >= config.gate.threshold:
                        kept.append(rec)
        else:
            for rec in pairs:
                score = lexical_overlap_score(rec["code"], rec["docstring"])
                rec["gate_score"] = round(score, 6)
                if score >= config.gate.threshold:
                    kept.append(rec)
    finally:
        if client is not None:
            client.close()
    _write_jsonl(run_dir / "gated_pairs.jsonl", kept)
    return {
        "pairs_in": len(pairs),
        "pairs_kept": len(kept),
        "pairs_dropped": len(pairs) - len(kept),
    }


def _stage_dedup(config: PipelineConfig, run_dir: Path) -> Dict[str, int]:
    pairs = _read_jsonl(run_dir / "gated_pairs.jsonl")
    excluded_keys: List[str] = []
    if config.holdout_path:
        corpus = {_pair_key(r): r["code_tokens"] for r in pairs}
        holdout_recs = _read_jsonl(Path(config.holdout_path))
        holdout = {r["key"]: r["code_tokens"] for r in holdout_recs}
        _, excluded = minhash.exclude_leaked(
            corpus,
            holdout,
            seed=config.seed,
            jaccard_threshold=config.dedup_threshold,
            exact_confirm=config.exact_confirm,
        )
        excluded_keys = sorted(excluded)
        _write_jsonl(
            run_dir / "dedup_excluded.jsonl",
            [{"key": k, "holdout": excluded[k]} for k in excluded_keys],
        )
        excluded_set = set(excluded_keys)
        pairs = [r for r in pairs if _pair_key(r) not in excluded_set]
    else:
        _write_jsonl(run_dir / "dedup_excluded.jsonl", [])
    _write_jsonl(run_dir / "d_paired.jsonl", pairs)
    return {
        "pairs_in": len(pairs) + len(excluded_keys),
        "pairs_kept": len(pairs),
        "pairs_dropped": len(excluded_keys),
    }


def _stage_split(config: PipelineConfig, run_dir: Path) -> Dict[str, int]:
    pairs = _read_jsonl(run_dir / "d_paired.jsonl")
    samples = [
        SplitSample(_pair_key(r), r["repo"], len(r["code_tokens"])) for r in pairs
    ]
    manifest = split_by_repo(samples, config.seed, config.split_fractions)
    by_split = apply_split(samples, manifest)
    train_samples = [s for s in samples if manifest.assignment[s.repo_id] == "train"]
    subsets = sample_subsets(train_samples, config.seed)
    write_sample_assignments(
        run_dir / "split_manifest.jsonl", samples, manifest, subsets
    )
    counts = {f"{name}_out": len(keys) for name, keys in by_split.items()}
    counts["pairs_in"] = len(samples)
    counts["small_out"] = len(subsets["small"])
    counts["medium_out"] = len(subsets["medium"])
    return counts


def _stage_stats(config: PipelineConfig, run_dir: Path) -> Dict[str, int]:
    stats = compute_stats(
        [run_dir / "d_paired.jsonl", run_dir / "d_unimodal.jsonl"]
    )
    write_stats(stats, run_dir)
    return {"records_in": stats.n_records, "malformed": stats.n_malformed}


_STAGE_FNS = {
    "extract": _stage_extract,
    "clean": _stage_clean,
    "gate": _stage_gate,
    "dedup": _stage_dedup,
    "split": _stage_split,
    "stats": _stage_stats,
}

_STAGE_OUTPUTS = {
    "extract": ("extracted_pairs.jsonl", "d_unimodal.jsonl", "extracted_blocks.jsonl"),
    "clean": ("clean_pairs.jsonl", "d_block.jsonl", "filter_report.json"),
    "gate": ("gated_pairs.jsonl",),
    "dedup": ("d_paired.jsonl", "dedup_excluded.jsonl"),
    "split": ("split_manifest.jsonl",),
    "stats": ("stats.json", "stats.csv"),
}


def run_pipeline(config: PipelineConfig, resume: bool = False) -> Path:
    """Run all stages; returns the run directory. With resume=True, stages
    whose outputs and manifest entries already exist are skipped."""
    config.validate()
    run_dir = Path(config.out_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = run_dir / "run_manifest.json"
    manifest: dict = {
        "schema": 1,
        "config": config.fingerprint(),
        "stages": {},
    }
    if resume and manifest_path.exists():
        with open(manifest_path, "r", encoding="utf-8") as fh:
            prev = json.load(fh)
        if prev.get("config") == manifest["config"]:
            manifest["stages"] = prev.get("stages", {})
        else:
            logger.warning("config changed; ignoring previous run state")

    for stage in STAGES:
        done = stage in manifest["stages"] and all(
            (run_dir / f).exists() for f in _STAGE_OUTPUTS[stage]
        )
        if resume and done:
            logger.info("stage %s already complete; skipping", stage)
            continue
        logger.info("running stage %s", stage)
        try:
            counts = _STAGE_FNS[stage](config, run_dir)
        except (ConfigError, StageError):
            raise
        except Exception as exc:  # persisted progress stays on disk
            raise StageError(stage, str(exc)) from exc
        manifest["stages"][stage] = counts
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return run_dir
