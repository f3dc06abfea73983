"""Dataset analytics over the pipeline's JSONL outputs.

Per-language sample/repo counts, exact unique-token cardinalities,
token-length histograms on fixed bin edges, and docstring-style counts.
Also exports benchmark files into the dedup-holdout format.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from .extract import tokenize_code_ex, tokenize_text
from .languages import LanguageId, parse_language

logger = logging.getLogger(__name__)

HIST_EDGES = (0, 8, 16, 32, 64, 128, 256, 512, 1024)
MALFORMED_LIMIT = 0.01


def histogram_bin(n: int) -> int:
    """Index of n in the fixed bins [0,8), [8,16), ... [1024, inf)."""
    for i in range(len(HIST_EDGES) - 1):
        if n < HIST_EDGES[i + 1]:
            return i
    return len(HIST_EDGES) - 1


@dataclass
class LanguageStats:
    n_total: int = 0
    n_with_docstring: int = 0
    repos: set = field(default_factory=set)
    unique_code_tokens: set = field(default_factory=set)
    unique_docstring_tokens: set = field(default_factory=set)
    unique_identifiers: set = field(default_factory=set)
    code_len_hist: List[int] = field(default_factory=lambda: [0] * len(HIST_EDGES))
    doc_len_hist: List[int] = field(default_factory=lambda: [0] * len(HIST_EDGES))
    style_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_total": self.n_total,
            "n_with_docstring": self.n_with_docstring,
            "n_repos": len(self.repos),
            "unique_code_tokens": len(self.unique_code_tokens),
            "unique_docstring_tokens": len(self.unique_docstring_tokens),
            "unique_identifiers": len(self.unique_identifiers),
            "code_len_hist": list(self.code_len_hist),
            "doc_len_hist": list(self.doc_len_hist),
            "style_counts": dict(sorted(self.style_counts.items())),
        }


@dataclass
class DatasetStats:
    per_language: Dict[str, LanguageStats] = field(default_factory=dict)
    n_records: int = 0
    n_malformed: int = 0

    def language(self, lang: str) -> LanguageStats:
        return self.per_language.setdefault(lang, LanguageStats())

    def malformed_fraction(self) -> float:
        seen = self.n_records + self.n_malformed
        return self.n_malformed / seen if seen else 0.0

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n_records": self.n_records,
            "n_malformed": self.n_malformed,
            "hist_edges": list(HIST_EDGES),
            "languages": {
                lang: st.to_dict() for lang, st in sorted(self.per_language.items())
            },
        }


class MalformedDataError(Exception):
    """Raised when more than 1% of input lines fail to parse."""


def _iter_jsonl(paths: Sequence[Path], stats: DatasetStats) -> Iterable[dict]:
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    if not isinstance(rec, dict):
                        raise ValueError("record is not an object")
                except ValueError:
                    stats.n_malformed += 1
                    logger.warning("malformed line %s:%d", path, lineno)
                    continue
                yield rec


def compute_stats(paths: Sequence[Path]) -> DatasetStats:
    """Aggregate pair/unimodal records. Each record needs lang, code or
    code_tokens; docstring fields are optional. Raises MalformedDataError
    when over 1% of lines fail to parse."""
    stats = DatasetStats()
    for rec in _iter_jsonl([Path(p) for p in paths], stats):
        lang = str(rec.get("lang") or rec.get("language") or "unknown")
        st = stats.language(lang)
        stats.n_records += 1
        st.n_total += 1
        if rec.get("repo"):
            st.repos.add(rec["repo"])

        code_tokens = rec.get("code_tokens")
        if code_tokens is None and rec.get("code") is not None:
            lang_id = parse_language(lang)
            code_tokens, _ = tokenize_code_ex(rec["code"], lang_id or LanguageId.PYTHON)
        code_tokens = code_tokens or []
        st.unique_code_tokens.update(code_tokens)
        st.code_len_hist[histogram_bin(len(code_tokens))] += 1
        if rec.get("identifier"):
            st.unique_identifiers.add(rec["identifier"])

        doc = rec.get("docstring")
        if doc:
            st.n_with_docstring += 1
            doc_tokens = rec.get("docstring_tokens") or tokenize_text(doc)
            st.unique_docstring_tokens.update(doc_tokens)
            st.doc_len_hist[histogram_bin(len(doc_tokens))] += 1
        style = rec.get("style")
        if style:
            st.style_counts[style] = st.style_counts.get(style, 0) + 1
    if stats.malformed_fraction() > MALFORMED_LIMIT:
        raise MalformedDataError(
            f"{stats.n_malformed} malformed lines "
            f"({stats.malformed_fraction():.1%} > {MALFORMED_LIMIT:.0%})"
        )
    return stats


def write_stats(stats: DatasetStats, out_dir: Path) -> None:
    """JSON blob plus a flat per-language CSV."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "stats.json", "w", encoding="utf-8") as fh:
        json.dump(stats.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    cols = [
        "language",
        "n_total",
        "n_with_docstring",
        "n_repos",
        "unique_code_tokens",
        "unique_docstring_tokens",
        "unique_identifiers",
    ]
    with open(out_dir / "stats.csv", "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for lang, st in sorted(stats.per_language.items()):
            d = st.to_dict()
            fh.write(",".join([lang] + [str(d[c]) for c in cols[1:]]) + "\n")


def export_holdout(
    benchmark_path: Path,
    out_path: Path,
    field_map: Optional[Dict[str, str]] = None,
) -> int:
    """Convert a benchmark JSONL into holdout records the dedup stage
    consumes: {"key", "code_tokens"}. field_map maps our field names to
    the benchmark's ("code" -> ..., optional "key" -> ..., "lang" -> ...)."""
    field_map = dict(field_map or {})
    code_field = field_map.get("code", "code")
    key_field = field_map.get("key")
    lang_field = field_map.get("lang", "lang")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    written = 0
    with open(benchmark_path, "r", encoding="utf-8") as src, open(
        out_path, "w", encoding="utf-8"
    ) as dst:
        for lineno, line in enumerate(src, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            missing = [f for f in (code_field,) if f not in rec]
            if key_field and key_field not in rec:
                missing.append(key_field)
            if missing:
                raise KeyError(
                    f"{benchmark_path}:{lineno} missing field(s): {missing}"
                )
            lang_id = parse_language(str(rec.get(lang_field, ""))) or LanguageId.PYTHON
            tokens, _ = tokenize_code_ex(rec[code_field], lang_id)
            key = str(rec[key_field]) if key_field else f"holdout:{lineno}"
            dst.write(
                json.dumps({"key": key, "code_tokens": tokens}, sort_keys=True) + "\n"
            )
            written += 1
    return written
