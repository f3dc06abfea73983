"""Training loop for the consistency scorer.

Consumes labeled JSONL as exported by the dataset pipeline (records with
"code", "docstring", "label") — either a single file split 3:1:1 here, or
a directory already containing train.jsonl / valid.jsonl.

The paper this mirrors does not state the classifier's hyperparameters;
the defaults below (lr 2e-5, 3 epochs, batch 32) are plain choices and
all overridable.
"""

import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

import torch
from torch import nn

from .model import ConsistencyScorer, ModelConfig

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    lr: float = 2e-5
    epochs: int = 3
    batch_size: int = 32
    seed: int = 1
    model: ModelConfig = dataclasses.field(default_factory=ModelConfig)


def _read_jsonl(path: Path) -> List[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def load_labeled(data: Path) -> Tuple[List[dict], List[dict]]:
    """(train, valid) records from a directory export or a single file."""
    data = Path(data)
    if data.is_dir():
        return _read_jsonl(data / "train.jsonl"), _read_jsonl(data / "valid.jsonl")
    records = _read_jsonl(data)
    train, valid = [], []
    for i, rec in enumerate(records):
        h = hashlib.blake2b(f"{i}".encode(), digest_size=8).digest()
        (valid if int.from_bytes(h, "big") % 5 == 3 else train).append(rec)
    return train, valid


def rank_auc(scores: List[float], labels: List[int]) -> float:
    """Rank-based AUC with ties counted half."""
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and scores[order[j]] == scores[order[i]]:
            j += 1
        mid = (i + j + 1) / 2  # average 1-based rank across the tie run
        for k in range(i, j):
            ranks[order[k]] = mid
        i = j
    n_pos = sum(labels)
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes")
    rank_sum = sum(r for r, l in zip(ranks, labels) if l == 1)
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def _batches(model: ConsistencyScorer, records: List[dict], size: int, gen=None):
    idx = list(range(len(records)))
    if gen is not None:
        idx = torch.randperm(len(records), generator=gen).tolist()
    for start in range(0, len(idx), size):
        chunk = [records[i] for i in idx[start : start + size]]
        ids = model._collate([(r["code"], r["docstring"]) for r in chunk])
        labels = torch.tensor([float(r["label"]) for r in chunk])
        yield ids, labels


@torch.no_grad()
def _evaluate(model: ConsistencyScorer, records: List[dict]) -> Dict[str, float]:
    model.eval()
    scores = model.predict_batch([(r["code"], r["docstring"]) for r in records])
    labels = [int(r["label"]) for r in records]
    correct = sum((s >= 0.5) == (l == 1) for s, l in zip(scores, labels))
    return {
        "auc_valid": rank_auc(scores, labels),
        "accuracy_valid": correct / len(records),
    }


def train(data: Path, out_dir: Path, config: TrainConfig = None) -> Dict[str, float]:
    """Train, evaluate on the validation split, write a checkpoint.

    Returns the metrics dict written to metrics.json.
    """
    config = config or TrainConfig()
    train_recs, valid_recs = load_labeled(data)
    if not train_recs:
        raise ValueError("no samples")
    labels = {int(r["label"]) for r in train_recs}
    if len(labels) < 2:
        raise ValueError(f"training data has a single class: {labels}")
    if not valid_recs:
        raise ValueError("no validation samples")

    torch.manual_seed(config.seed)
    gen = torch.Generator().manual_seed(config.seed)
    model = ConsistencyScorer(config.model)
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    loss_fn = nn.BCEWithLogitsLoss()

    for epoch in range(config.epochs):
        model.train()
        total, n = 0.0, 0
        for ids, y in _batches(model, train_recs, config.batch_size, gen):
            opt.zero_grad()
            loss = loss_fn(model(ids), y)
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(y)
            n += len(y)
        metrics = _evaluate(model, valid_recs)
        logger.info(
            "epoch %d: loss %.4f auc_valid %.4f acc_valid %.4f",
            epoch + 1, total / n, metrics["auc_valid"], metrics["accuracy_valid"],
        )

    model.save(Path(out_dir), metrics)
    return metrics
