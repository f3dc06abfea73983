"""Near-duplicate detection with MinHash + banded LSH.

Samples are shingled over code tokens (w=5) and hashed into
256-permutation signatures; 32 bands of 8 rows propose candidates against
a holdout set (benchmark validation/test material), and every corpus
sample whose signature agreement reaches the threshold (default 0.8) is
marked excluded. `exact_confirm` swaps the agreement estimate for a
brute-force Jaccard over shingles.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

logger = logging.getLogger(__name__)

NUM_PERM = 256
SHINGLE_W = 5
BANDS = 32
ROWS = 8
DEFAULT_THRESHOLD = 0.8
_EMPTY_SLOT = np.uint64(0xFFFFFFFFFFFFFFFF)


def _perm_params(seed: int, num_perm: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    # odd 64-bit multipliers; multiply-shift hashing relies on the
    # natural uint64 wraparound to scramble the ordering of inputs
    a = rng.integers(0, 1 << 63, size=num_perm, dtype=np.uint64) * 2 + 1
    b = rng.integers(0, 1 << 63, size=num_perm, dtype=np.uint64)
    return a, b


def shingles(tokens: Sequence[str], w: int = SHINGLE_W) -> Set[str]:
    """Contiguous w-grams joined with a unit separator; short token lists
    yield a single shingle of everything."""
    if not tokens:
        return set()
    if len(tokens) <= w:
        return {"\x1f".join(tokens)}
    return {"\x1f".join(tokens[i : i + w]) for i in range(len(tokens) - w + 1)}


def _base_hashes(shingle_set: Set[str]) -> np.ndarray:
    vals = np.empty(len(shingle_set), dtype=np.uint64)
    for i, s in enumerate(sorted(shingle_set)):
        d = hashlib.blake2b(s.encode("utf-8"), digest_size=8).digest()
        vals[i] = int.from_bytes(d, "big")
    return vals


@dataclass
class MinHasher:
    """Signature generator; permutations fixed by seed for reproducibility."""

    seed: int = 1
    num_perm: int = NUM_PERM

    def __post_init__(self) -> None:
        self._a, self._b = _perm_params(self.seed, self.num_perm)

    def signature(self, tokens: Sequence[str]) -> np.ndarray:
        sh = shingles(tokens)
        if not sh:
            return np.full(self.num_perm, _EMPTY_SLOT, dtype=np.uint64)
        h = _base_hashes(sh)
        with np.errstate(over="ignore"):
            vals = self._a[:, None] * h[None, :] + self._b[:, None]
        return vals.min(axis=1)

    def sign_all(self, docs: Dict[str, Sequence[str]]) -> Dict[str, np.ndarray]:
        return {k: self.signature(toks) for k, toks in docs.items()}


def estimate_jaccard(sig_a: np.ndarray, sig_b: np.ndarray) -> float:
    """Fraction of agreeing signature slots."""
    if sig_a.shape != sig_b.shape:
        raise ValueError("signature length mismatch")
    return float(np.count_nonzero(sig_a == sig_b)) / len(sig_a)


def exact_jaccard(tokens_a: Sequence[str], tokens_b: Sequence[str]) -> float:
    sa, sb = shingles(tokens_a), shingles(tokens_b)
    if not sa and not sb:
        return 1.0
    union = len(sa | sb)
    return len(sa & sb) / union if union else 0.0


def _band_buckets(
    signatures: Dict[str, np.ndarray], bands: int, rows: int
) -> Dict[Tuple[int, bytes], List[str]]:
    buckets: Dict[Tuple[int, bytes], List[str]] = {}
    for key in sorted(signatures):
        sig = signatures[key]
        for band in range(bands):
            chunk = sig[band * rows : (band + 1) * rows].tobytes()
            buckets.setdefault((band, chunk), []).append(key)
    return buckets


def find_near_duplicates(
    corpus_sigs: Dict[str, np.ndarray],
    holdout_sigs: Dict[str, np.ndarray],
    bands: int = BANDS,
    rows: int = ROWS,
    jaccard_threshold: float = DEFAULT_THRESHOLD,
    corpus_tokens: Optional[Dict[str, Sequence[str]]] = None,
    holdout_tokens: Optional[Dict[str, Sequence[str]]] = None,
) -> List[Tuple[str, str, float]]:
    """(corpus key, holdout key, similarity) triples for corpus samples that
    collide with a holdout sample in some LSH band and whose similarity is
    >= the threshold. Passing both token dicts turns on exact-Jaccard
    confirmation instead of the signature-agreement estimate."""
    num_perm = None
    for sig in list(corpus_sigs.values()) + list(holdout_sigs.values()):
        if num_perm is None:
            num_perm = len(sig)
        elif len(sig) != num_perm:
            raise ValueError("mixed signature lengths")
    if num_perm is not None and bands * rows != num_perm:
        raise ValueError(f"bands*rows = {bands * rows} but signatures have {num_perm} slots")
    if not holdout_sigs or not corpus_sigs:
        return []

    exact = corpus_tokens is not None and holdout_tokens is not None
    holdout_buckets = _band_buckets(holdout_sigs, bands, rows)
    hits: Dict[Tuple[str, str], float] = {}
    for corpus_key in sorted(corpus_sigs):
        sig = corpus_sigs[corpus_key]
        seen: Set[str] = set()
        for band in range(bands):
            chunk = sig[band * rows : (band + 1) * rows].tobytes()
            for holdout_key in holdout_buckets.get((band, chunk), ()):
                if holdout_key in seen:
                    continue
                seen.add(holdout_key)
                if exact:
                    sim = exact_jaccard(
                        corpus_tokens[corpus_key], holdout_tokens[holdout_key]
                    )
                else:
                    sim = estimate_jaccard(sig, holdout_sigs[holdout_key])
                if sim >= jaccard_threshold:
                    hits[(corpus_key, holdout_key)] = sim
    return sorted((c, h, s) for (c, h), s in hits.items())


def exclude_leaked(
    corpus: Dict[str, Sequence[str]],
    holdout: Dict[str, Sequence[str]],
    seed: int = 1,
    bands: int = BANDS,
    rows: int = ROWS,
    jaccard_threshold: float = DEFAULT_THRESHOLD,
    exact_confirm: bool = False,
) -> Tuple[List[str], Dict[str, str]]:
    """Drop every corpus sample near-duplicated by a holdout sample.

    Returns (kept keys, excluded_key -> closest holdout key)."""
    hasher = MinHasher(seed=seed)
    matches = find_near_duplicates(
        hasher.sign_all(corpus),
        hasher.sign_all(holdout),
        bands=bands,
        rows=rows,
        jaccard_threshold=jaccard_threshold,
        corpus_tokens=corpus if exact_confirm else None,
        holdout_tokens=holdout if exact_confirm else None,
    )
    excluded: Dict[str, Tuple[str, float]] = {}
    for corpus_key, holdout_key, sim in matches:
        prev = excluded.get(corpus_key)
        if prev is None or sim > prev[1]:
            excluded[corpus_key] = (holdout_key, sim)
    kept = [k for k in sorted(corpus) if k not in excluded]
    return kept, {k: v[0] for k, v in sorted(excluded.items())}
