"""MinHash signatures, LSH candidate generation, holdout exclusion."""

import random

import pytest

from codeforge.minhash import (
    MinHasher,
    estimate_jaccard,
    exact_jaccard,
    exclude_leaked,
    find_near_duplicates,
    shingles,
)


def _random_tokens(rng, n, vocab):
    return [rng.choice(vocab) for _ in range(n)]


def test_signature_deterministic():
    tokens = ["a", "b", "c", "d", "e", "f", "g"]
    h1, h2 = MinHasher(seed=3), MinHasher(seed=3)
    assert (h1.signature(tokens) == h2.signature(tokens)).all()


def test_identical_lists_agree_fully():
    tokens = [f"t{i}" for i in range(50)]
    h = MinHasher(seed=1)
    assert estimate_jaccard(h.signature(tokens), h.signature(list(tokens))) == 1.0


def test_disjoint_vocab_near_zero():
    rng = random.Random(2)
    h = MinHasher(seed=1)
    a = _random_tokens(rng, 100, [f"a{i}" for i in range(40)])
    b = _random_tokens(rng, 100, [f"b{i}" for i in range(40)])
    assert estimate_jaccard(h.signature(a), h.signature(b)) <= 0.05
    assert exact_jaccard(a, b) == 0.0


def test_half_jaccard_unbiased_across_seeds():
    # two shingle-disjoint halves glued to a shared half: exact Jaccard known
    rng = random.Random(9)
    estimates = []
    a = [f"s{i}" for i in range(61)]       # 57 shingles at w=5
    b = a[:30] + [f"x{i}" for i in range(31)]
    target = exact_jaccard(a, b)
    for seed in range(100):
        h = MinHasher(seed=seed)
        estimates.append(estimate_jaccard(h.signature(a), h.signature(b)))
    assert abs(sum(estimates) / len(estimates) - target) <= 0.05


def test_short_list_single_shingle():
    assert shingles(["a", "b"]) == {"a\x1fb"}
    assert shingles([]) == set()


def test_find_identical_reports_one():
    tokens = [f"w{i}" for i in range(30)]
    h = MinHasher(seed=1)
    hits = find_near_duplicates({"c": h.signature(tokens)}, {"h": h.signature(tokens)})
    assert hits == [("c", "h", 1.0)]


def test_find_empty_holdout():
    h = MinHasher(seed=1)
    sigs = {"c": h.signature(["a", "b", "c", "d", "e", "f"])}
    assert find_near_duplicates(sigs, {}) == []


def test_incompatible_banding_rejected():
    h = MinHasher(seed=1)
    sigs = {"c": h.signature([f"w{i}" for i in range(20)])}
    with pytest.raises(ValueError):
        find_near_duplicates(sigs, sigs, bands=10, rows=10)


def test_planted_duplicate_recall():
    rng = random.Random(4)
    vocab = [f"tok{i}" for i in range(5000)]
    corpus = {
        f"c{i}": _random_tokens(rng, rng.randint(40, 120), vocab) for i in range(1000)
    }
    holdout = {}
    planted = []
    for j in range(20):
        key = f"c{j * 37}"
        base = list(corpus[key])
        # perturb a couple of tokens: stays >= 0.9 exact Jaccard? keep literal copy
        holdout[f"h{j}"] = base
        planted.append(key)
    kept, excluded = exclude_leaked(corpus, holdout, seed=1, jaccard_threshold=0.8)
    assert set(planted) <= set(excluded), sorted(set(planted) - set(excluded))


def test_exclude_exact_confirm_matches_oracle():
    rng = random.Random(8)
    vocab = [f"v{i}" for i in range(200)]
    corpus = {f"c{i}": _random_tokens(rng, 60, vocab) for i in range(50)}
    holdout = {"h": list(corpus["c5"])}
    kept, excluded = exclude_leaked(corpus, holdout, exact_confirm=True)
    assert "c5" in excluded
    for k in kept:
        assert exact_jaccard(corpus[k], holdout["h"]) < 0.8
