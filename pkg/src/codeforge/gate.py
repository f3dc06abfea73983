"""Code-docstring consistency gating.

Self-supervised labeled data via intra-language shuffled pairing, a lexical
baseline scorer, a wire-protocol client for the neural sidecar, threshold
gating at 0.5, and exact rank-based AUC.
"""

from __future__ import annotations

import json
import logging
import math
import random
import re
import subprocess
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

PROTO_VERSION = 1


@dataclass(frozen=True)
class LabeledPair:
    code: str
    docstring: str
    language: str
    label: int  # 1 consistent, 0 inconsistent
    origin: str  # "natural" | "shuffled"


@dataclass
class ScoreRecord:
    key: str
    score: float
    backend: str  # "baseline" | "sidecar"
    decision: str  # "keep" | "drop"


@dataclass
class GateConfig:
    threshold: float = 0.5
    backend: str = "baseline"
    sample_fraction: float = 0.12
    negative_ratio: float = 1.0
    split_ratio: Tuple[int, int, int] = (3, 1, 1)
    sidecar_cmd: Optional[List[str]] = None
    fail_open: bool = False
    batch_size: int = 64
    timeout_s: float = 120.0

    def __post_init__(self) -> None:
        if not (0.0 < self.threshold < 1.0):
            raise ValueError("threshold must be in (0, 1)")
        if not (0.0 < self.sample_fraction <= 1.0):
            raise ValueError("sample_fraction must be in (0, 1]")


# ---------------------------------------------------------------------------
# negative sampling


def _derangement(n: int, rng: random.Random) -> List[int]:
    """Seeded permutation of range(n) with no fixed points (n >= 2)."""
    perm = list(range(n))
    rng.shuffle(perm)
    for i in range(n):
        if perm[i] == i:
            j = (i + 1) % n
            perm[i], perm[j] = perm[j], perm[i]
    return perm


def generate_negatives(
    pairs: Sequence[Tuple[str, str, str]],
    seed: int,
    ratio: float = 1.0,
) -> List[LabeledPair]:
    """All natural pairs labeled 1 plus ceil(ratio * n) shuffled pairs per
    language labeled 0; shuffles never reunite a code with its own docstring."""
    by_lang: Dict[str, List[Tuple[int, str, str]]] = {}
    for idx, (code, doc, lang) in enumerate(pairs):
        by_lang.setdefault(lang, []).append((idx, code, doc))

    out: List[LabeledPair] = []
    for lang in sorted(by_lang):
        bucket = by_lang[lang]
        n = len(bucket)
        if n < 2:
            logger.warning(
                "language %s has %d pair(s); skipped (no valid derangement)", lang, n
            )
            continue
        for _, code, doc in bucket:
            out.append(LabeledPair(code, doc, lang, 1, "natural"))
        want = math.ceil(ratio * n)
        rng = random.Random(f"{seed}:{lang}")
        made = 0
        round_no = 0
        while made < want:
            perm = _derangement(n, rng)
            for i in range(n):
                if made >= want:
                    break
                code = bucket[i][1]
                doc = bucket[perm[i]][2]
                out.append(LabeledPair(code, doc, lang, 0, "shuffled"))
                made += 1
            round_no += 1
            if round_no > 10 * (int(ratio) + 1):
                break
    return out


# ---------------------------------------------------------------------------
# baseline lexical scorer

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_CAMEL_RE = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def split_identifier(ident: str) -> List[str]:
    """snake_case and camelCase split, lowercased."""
    parts: List[str] = []
    for chunk in ident.split("_"):
        if not chunk:
            continue
        parts.extend(p.lower() for p in _CAMEL_RE.split(chunk) if p)
    return parts


def _code_word_set(code: str) -> set:
    words = set()
    for ident in _IDENT_RE.findall(code):
        words.update(split_identifier(ident))
    return words


def _doc_word_set(docstring: str) -> set:
    return {w.lower() for w in re.findall(r"[A-Za-z]+|\d+", docstring)}


def lexical_overlap_score(code: str, docstring: str) -> float:
    """Smoothed set-overlap in [0, 1]: mean of the two containment
    fractions between docstring words and identifier-split code words."""
    doc_words = _doc_word_set(docstring)
    code_words = _code_word_set(code)
    if not doc_words or not code_words:
        return 0.0
    inter = len(doc_words & code_words)
    return 0.5 * (inter / len(doc_words)) + 0.5 * (inter / len(code_words))


def score_pair(code: str, docstring: str, backend="baseline") -> float:
    """Score one pair with the baseline or a connected sidecar client."""
    if backend == "baseline" or backend is None:
        return lexical_overlap_score(code, docstring)
    if isinstance(backend, SidecarClient):
        return backend.score_batch([(code, docstring, "")])[0]
    raise ValueError(f"unknown backend: {backend!r}")


# ---------------------------------------------------------------------------
# gating and evaluation


def gate(
    samples: Sequence[str],
    scores: Dict[str, float],
    threshold: float = 0.5,
) -> Tuple[List[str], List[str]]:
    """Partition sample keys into (kept, dropped); keep iff score >= threshold."""
    missing = [k for k in samples if k not in scores]
    if missing:
        raise KeyError(f"missing scores for {len(missing)} sample(s): {missing[:5]}")
    kept = [k for k in samples if scores[k] >= threshold]
    dropped = [k for k in samples if scores[k] < threshold]
    return kept, dropped


def evaluate_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Exact rank-based AUC (Mann-Whitney); ties count one half."""
    if len(scores) != len(labels):
        raise ValueError("scores and labels must have equal length")
    n_pos = sum(1 for l in labels if l == 1)
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes must be present")
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    rank_sum_pos = sum(r for r, l in zip(ranks, labels) if l == 1)
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def stratify_by_confidence(
    keys: Sequence[str],
    scores: Dict[str, float],
    languages: Dict[str, str],
    per_group: int = 100,
) -> Dict[str, Dict[str, List[str]]]:
    """Per-language audit sample: highest-scoring (consistent), lowest
    (inconsistent), and closest-to-0.5 (uncertain) keys."""
    by_lang: Dict[str, List[str]] = {}
    for k in keys:
        by_lang.setdefault(languages[k], []).append(k)
    out: Dict[str, Dict[str, List[str]]] = {}
    for lang, ks in sorted(by_lang.items()):
        ranked = sorted(ks, key=lambda k: (-scores[k], k))
        uncertain = sorted(ks, key=lambda k: (abs(scores[k] - 0.5), k))
        out[lang] = {
            "consistent": ranked[:per_group],
            "inconsistent": ranked[::-1][:per_group],
            "uncertain": uncertain[:per_group],
        }
    return out


# ---------------------------------------------------------------------------
# training-data export

_SPLIT_NAMES = ("train", "valid", "test")


def _split_of(index: int, seed: int, ratio: Tuple[int, int, int]) -> str:
    import hashlib

    h = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    bucket = int.from_bytes(h, "big") % sum(ratio)
    if bucket < ratio[0]:
        return "train"
    if bucket < ratio[0] + ratio[1]:
        return "valid"
    return "test"


def export_labeled(
    pairs: Iterable[LabeledPair],
    out_dir: Path,
    seed: int,
    ratio: Tuple[int, int, int] = (3, 1, 1),
) -> Dict[str, int]:
    """Write train/valid/test JSONL of labeled pairs, split by seeded hash."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    handles = {
        name: open(out_dir / f"{name}.jsonl", "w", encoding="utf-8")
        for name in _SPLIT_NAMES
    }
    counts = {name: 0 for name in _SPLIT_NAMES}
    try:
        for idx, p in enumerate(pairs):
            split = _split_of(idx, seed, ratio)
            handles[split].write(
                json.dumps(
                    {
                        "code": p.code,
                        "docstring": p.docstring,
                        "lang": p.language,
                        "label": p.label,
                        "origin": p.origin,
                    },
                    separators=(",", ":"),
                )
                + "\n"
            )
            counts[split] += 1
    finally:
        for fh in handles.values():
            fh.close()
    return counts


# ---------------------------------------------------------------------------
# sidecar client


class SidecarError(Exception):
    pass


class SidecarClient:
    """Newline-delimited-JSON client for the neural scorer child process.

    Requests carry ids; responses may arrive out of order and are
    re-associated by id.
    """

    def __init__(
        self,
        cmd: List[str],
        timeout_s: float = 120.0,
        fail_open: bool = False,
    ) -> None:
        self._cmd = cmd
        self._timeout = timeout_s
        self._fail_open = fail_open
        self._proc: Optional[subprocess.Popen] = None
        self._next_id = 0
        self._lock = threading.Lock()

    def start(self) -> None:
        self._proc = subprocess.Popen(
            self._cmd,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._send({"op": "hello", "proto": PROTO_VERSION})
        reply = self._recv()
        if not reply or not reply.get("ok") or reply.get("proto") != PROTO_VERSION:
            raise SidecarError(f"handshake failed: {reply!r}")

    def close(self) -> None:
        if self._proc is not None:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.wait(timeout=10)
            self._proc = None

    def __enter__(self) -> "SidecarClient":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _send(self, obj: dict) -> None:
        assert self._proc is not None and self._proc.stdin is not None
        self._proc.stdin.write(json.dumps(obj, separators=(",", ":")) + "\n")
        self._proc.stdin.flush()

    def _recv(self) -> Optional[dict]:
        assert self._proc is not None and self._proc.stdout is not None
        line = self._proc.stdout.readline()
        if not line:
            return None
        return json.loads(line)

    def score_batch(self, pairs: Sequence[Tuple[str, str, str]]) -> List[float]:
        """Score (code, docstring, lang) triples; order-preserving."""
        if not pairs:
            return []
        if self._proc is None:
            try:
                self.start()
            except (OSError, SidecarError) as exc:
                if self._fail_open:
                    logger.warning("sidecar unreachable (%s); failing open", exc)
                    return [1.0] * len(pairs)
                raise SidecarError(f"sidecar unreachable: {exc}") from exc
        with self._lock:
            ids = []
            for code, doc, lang in pairs:
                rid = self._next_id
                self._next_id += 1
                ids.append(rid)
                self._send(
                    {"id": rid, "op": "score", "code": code, "docstring": doc, "lang": lang}
                )
            got: Dict[int, float] = {}
            while len(got) < len(ids):
                reply = self._recv()
                if reply is None:
                    if self._fail_open:
                        logger.warning("sidecar closed mid-batch; failing open")
                        return [got.get(rid, 1.0) for rid in ids]
                    raise SidecarError("sidecar closed the stream mid-batch")
                if reply.get("id") is None:
                    raise SidecarError(f"sidecar error: {reply.get('error')}")
                got[int(reply["id"])] = float(reply["score"])
        return [got[rid] for rid in ids]
