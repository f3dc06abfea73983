"""Repository-disjoint train/valid/test splitting and nested subset sampling.

Whole repositories are assigned to splits (no repo straddles two splits),
targeting 80/10/10 sample counts while keeping the code-length distribution
of each split close to the global one (two-sample KS distance <= 0.1).
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

logger = logging.getLogger(__name__)

SPLIT_NAMES = ("train", "valid", "test")
DEFAULT_FRACTIONS = {"train": 0.8, "valid": 0.1, "test": 0.1}
KS_TARGET = 0.1
_MAX_SWAPS = 1000


@dataclass(frozen=True)
class SplitSample:
    key: str
    repo_id: str
    code_token_count: int


@dataclass
class SplitManifest:
    seed: int
    fractions: Dict[str, float]
    assignment: Dict[str, str]  # repo_id -> split
    counts: Dict[str, int]
    ks: Dict[str, float]

    def write(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(
                json.dumps(
                    {
                        "seed": self.seed,
                        "fractions": self.fractions,
                        "counts": self.counts,
                        "ks": self.ks,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
            for repo in sorted(self.assignment):
                fh.write(
                    json.dumps({"repo": repo, "split": self.assignment[repo]}) + "\n"
                )


def ks_distance(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    """Two-sample Kolmogorov-Smirnov statistic."""
    if not sample_a or not sample_b:
        return 1.0
    a = sorted(sample_a)
    b = sorted(sample_b)
    i = j = 0
    d = 0.0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x = a[i] if a[i] <= b[j] else b[j]
        while i < na and a[i] == x:
            i += 1
        while j < nb and b[j] == x:
            j += 1
        d = max(d, abs(i / na - j / nb))
    return d


def _split_lengths(
    samples: Sequence[SplitSample], assignment: Dict[str, str]
) -> Dict[str, List[int]]:
    out: Dict[str, List[int]] = {name: [] for name in SPLIT_NAMES}
    for s in samples:
        out[assignment[s.repo_id]].append(s.code_token_count)
    return out


def split_by_repo(
    samples: Sequence[SplitSample],
    seed: int,
    fractions: Dict[str, float] = None,
) -> SplitManifest:
    """Assign whole repos to splits: greedy largest-repo-first into the
    split with the biggest remaining deficit, then a local-swap pass that
    lowers per-split KS distance against the full length distribution."""
    fractions = dict(fractions or DEFAULT_FRACTIONS)
    if abs(sum(fractions.values()) - 1.0) > 1e-9:
        raise ValueError("split fractions must sum to 1")

    repo_sizes: Dict[str, int] = {}
    for s in samples:
        repo_sizes[s.repo_id] = repo_sizes.get(s.repo_id, 0) + 1
    total = len(samples)
    rng = random.Random(seed)
    repos = sorted(repo_sizes)
    rng.shuffle(repos)
    repos.sort(key=lambda r: -repo_sizes[r])

    counts = {name: 0 for name in SPLIT_NAMES}
    assignment: Dict[str, str] = {}
    for repo in repos:
        deficits = {
            name: fractions[name] * total - counts[name] for name in SPLIT_NAMES
        }
        target = max(SPLIT_NAMES, key=lambda n: deficits[n])
        assignment[repo] = target
        counts[target] += repo_sizes[repo]

    all_lengths = sorted(s.code_token_count for s in samples)

    def worst_ks() -> Tuple[float, Dict[str, float]]:
        lens = _split_lengths(samples, assignment)
        per = {name: ks_distance(lens[name], all_lengths) for name in SPLIT_NAMES}
        return max(per.values()), per

    current, per_split = worst_ks()
    swaps = 0
    tolerance = 0.01  # keep counts within about one percent of target
    while current > KS_TARGET and swaps < _MAX_SWAPS:
        improved = False
        candidates = list(repos)
        rng.shuffle(candidates)
        for repo in candidates:
            old = assignment[repo]
            size = repo_sizes[repo]
            for new in SPLIT_NAMES:
                if new == old:
                    continue
                if abs(counts[new] + size - fractions[new] * total) > tolerance * total:
                    continue
                if abs(counts[old] - size - fractions[old] * total) > tolerance * total:
                    continue
                assignment[repo] = new
                counts[old] -= size
                counts[new] += size
                cand, cand_per = worst_ks()
                if cand < current - 1e-9:
                    current, per_split = cand, cand_per
                    improved = True
                    break
                assignment[repo] = old
                counts[old] += size
                counts[new] -= size
            swaps += 1
            if current <= KS_TARGET or swaps >= _MAX_SWAPS:
                break
        if not improved:
            break
    if current > KS_TARGET:
        logger.warning("KS distance %.3f above %.2f after %d swaps", current, KS_TARGET, swaps)

    return SplitManifest(
        seed=seed,
        fractions=fractions,
        assignment=assignment,
        counts=counts,
        ks=per_split,
    )


def apply_split(
    samples: Sequence[SplitSample], manifest: SplitManifest
) -> Dict[str, List[str]]:
    out: Dict[str, List[str]] = {name: [] for name in SPLIT_NAMES}
    for s in samples:
        out[manifest.assignment[s.repo_id]].append(s.key)
    return out


def write_sample_assignments(
    path: Path,
    samples: Sequence[SplitSample],
    manifest: SplitManifest,
    subsets: Dict[str, List[str]] = None,
    excluded: Iterable[str] = (),
) -> None:
    """Per-sample JSONL: key, split (train/valid/test/excluded), and
    small/medium subset flags on train samples."""
    small = set((subsets or {}).get("small", ()))
    medium = set((subsets or {}).get("medium", ()))
    excluded_set = set(excluded)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for s in sorted(samples, key=lambda x: x.key):
            if s.key in excluded_set:
                rec = {"key": s.key, "split": "excluded"}
            else:
                split = manifest.assignment[s.repo_id]
                rec = {"key": s.key, "split": split}
                if split == "train":
                    rec["small"] = s.key in small
                    rec["medium"] = s.key in medium
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def sample_subsets(
    train_samples: Sequence[SplitSample],
    seed: int,
    small_frac: float = 0.05,
    medium_frac: float = 0.20,
) -> Dict[str, List[str]]:
    """Nested 'small' (5%) and 'medium' (20%) training subsets, still
    repo-disjoint from valid/test by construction (drawn from train only)
    and nested: small is a subset of medium. Repos are accumulated in
    seeded-shuffle order until each size target (within 1%) is met."""
    repo_keys: Dict[str, List[str]] = {}
    for s in train_samples:
        repo_keys.setdefault(s.repo_id, []).append(s.key)
    total = len(train_samples)
    repos = sorted(repo_keys)
    random.Random(seed).shuffle(repos)

    targets = {"small": small_frac * total, "medium": medium_frac * total}
    out: Dict[str, List[str]] = {"small": [], "medium": []}
    for repo in repos:
        size = len(repo_keys[repo])
        in_medium = len(out["medium"]) + size <= targets["medium"] + 0.01 * total
        if in_medium:
            out["medium"].extend(repo_keys[repo])
            # only repos already in medium are eligible for small, so
            # the small subset is always nested inside the medium one
            if len(out["small"]) + size <= targets["small"] + 0.01 * total:
                out["small"].extend(repo_keys[repo])
        if all(len(out[n]) >= targets[n] - 0.01 * total for n in out):
            break
    for name in out:
        got = len(out[name])
        if abs(got - targets[name]) > 0.01 * total:
            logger.warning(
                "subset %s has %d samples (target %.0f)", name, got, targets[name]
            )
    return out
