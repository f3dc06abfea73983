"""Consistency gate: negative sampling, baseline scoring, AUC, gating."""

import math
import random

import pytest

from codeforge.gate import (
    LabeledPair,
    evaluate_auc,
    gate,
    generate_negatives,
    lexical_overlap_score,
    score_pair,
    stratify_by_confidence,
)


def brute_force_auc(scores, labels):
    """O(n^2) pairwise oracle: P(random positive outranks random negative)."""
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos) * len(neg))


# ---------------------------------------------------------------------------
# negative sampling


def test_negatives_two_pairs_only_derangement():
    pairs = [("c1", "d1", "python"), ("c2", "d2", "python")]
    out = generate_negatives(pairs, seed=1, ratio=1.0)
    negs = {(p.code, p.docstring) for p in out if p.label == 0}
    assert negs == {("c1", "d2"), ("c2", "d1")}


def test_negatives_empty():
    assert generate_negatives([], seed=1) == []


def test_negatives_thousand_no_self_pairs():
    pairs = [(f"code{i}", f"doc{i}", "go") for i in range(1000)]
    out = generate_negatives(pairs, seed=7, ratio=1.0)
    negs = [p for p in out if p.label == 0]
    assert len(negs) == 1000
    for p in negs:
        assert p.code.removeprefix("code") != p.docstring.removeprefix("doc")
        assert p.language == "go"


def test_negatives_intra_language_only():
    pairs = [(f"pc{i}", f"pd{i}", "python") for i in range(5)] + [
        (f"jc{i}", f"jd{i}", "java") for i in range(5)
    ]
    out = generate_negatives(pairs, seed=3, ratio=1.0)
    for p in out:
        if p.label == 0:
            assert p.code[0] == p.docstring[0]  # same language prefix


def test_negatives_ratio_ceiling():
    pairs = [(f"c{i}", f"d{i}", "rust") for i in range(10)]
    out = generate_negatives(pairs, seed=1, ratio=0.25)
    assert sum(1 for p in out if p.label == 0) == math.ceil(0.25 * 10)


def test_negatives_singleton_bucket_skipped():
    out = generate_negatives([("c", "d", "php")], seed=1)
    assert out == []


# ---------------------------------------------------------------------------
# baseline scorer


def test_score_overlapping_identifier():
    assert score_pair("def add_two_numbers(): ...", "add two numbers") > 0.5


def test_score_disjoint_zero():
    assert score_pair("def foo(): pass", "unrelated words entirely") == 0.0


def test_score_identical_full():
    text = "compute the rolling mean"
    assert lexical_overlap_score(text, text) == 1.0


def test_score_camel_case_split():
    assert lexical_overlap_score("function parseConfigFile() {}", "parse config file") > 0.5


# ---------------------------------------------------------------------------
# gating


def test_gate_boundary_kept_by_ge():
    keys = ["a", "b", "c"]
    scores = {"a": 0.4, "b": 0.5, "c": 0.9}
    kept, dropped = gate(keys, scores, threshold=0.5)
    assert kept == ["b", "c"]
    assert dropped == ["a"]


def test_gate_zero_threshold_keeps_all():
    keys = ["a", "b"]
    kept, dropped = gate(keys, {"a": 0.0, "b": 0.1}, threshold=0.0)
    assert dropped == [] and kept == keys


def test_gate_missing_score_raises():
    with pytest.raises(KeyError):
        gate(["a", "b"], {"a": 0.9})


def test_gate_monotone_in_threshold():
    rng = random.Random(5)
    keys = [f"k{i}" for i in range(100)]
    scores = {k: rng.random() for k in keys}
    prev = None
    for t in (0.1, 0.3, 0.5, 0.7, 0.9):
        kept, _ = gate(keys, scores, threshold=t)
        if prev is not None:
            assert set(kept) <= prev
        prev = set(kept)


# ---------------------------------------------------------------------------
# AUC


def test_auc_perfect():
    assert evaluate_auc([0.9, 0.1], [1, 0]) == 1.0


def test_auc_all_ties():
    assert evaluate_auc([0.5, 0.5], [1, 0]) == 0.5


def test_auc_single_class_rejected():
    with pytest.raises(ValueError):
        evaluate_auc([0.1, 0.2], [1, 1])


def test_auc_matches_brute_force_oracle():
    rng = random.Random(11)
    for trial in range(5):
        n = 200
        scores = [round(rng.random(), 2) for _ in range(n)]  # rounding forces ties
        labels = [rng.randint(0, 1) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0] = 1 - labels[0]
        assert evaluate_auc(scores, labels) == pytest.approx(
            brute_force_auc(scores, labels), abs=1e-12
        )


# ---------------------------------------------------------------------------
# stratification


def test_stratify_groups():
    keys = [f"k{i}" for i in range(30)]
    scores = {k: i / 30 for i, k in enumerate(keys)}
    langs = {k: "python" for k in keys}
    groups = stratify_by_confidence(keys, scores, langs, per_group=5)
    g = groups["python"]
    assert len(g["consistent"]) == 5 and len(g["inconsistent"]) == 5
    assert scores[g["consistent"][0]] == max(scores.values())
    assert scores[g["inconsistent"][0]] == min(scores.values())
    assert all(abs(scores[k] - 0.5) <= 0.1 for k in g["uncertain"])
