import json
import random
from pathlib import Path

import pytest

from docscorer.model import ModelConfig
from docscorer.train import TrainConfig, train

VERBS = [
    "add", "remove", "parse", "merge", "fetch", "cache", "render", "split",
    "load", "store", "check", "update", "reset", "scan", "count", "filter",
]
NOUNS = [
    "user", "config", "token", "entry", "buffer", "record", "index", "path",
    "queue", "cache", "header", "field", "row", "node", "batch", "stream",
]


def synth_records(n: int, seed: int):
    """n labeled pairs: half natural, half shuffled-docstring negatives."""
    rng = random.Random(seed)
    pos = []
    for _ in range(n // 2):
        v, noun, extra = rng.choice(VERBS), rng.choice(NOUNS), rng.choice(NOUNS)
        code = f"def {v}_{noun}({extra}):\n    return {extra}.{v}()"
        doc = f"{v.capitalize()} the {noun} using the given {extra}."
        pos.append((code, doc))
    shuffled = [d for _, d in pos]
    rng.shuffle(shuffled)
    recs = []
    for (code, doc), neg_doc in zip(pos, shuffled):
        recs.append({"code": code, "docstring": doc, "lang": "python",
                     "label": 1, "origin": "natural"})
        recs.append({"code": code, "docstring": neg_doc, "lang": "python",
                     "label": 0, "origin": "shuffled"})
    rng.shuffle(recs)
    return recs


def write_jsonl(path: Path, records) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, separators=(",", ":")) + "\n")
    return path


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> Path:
    """A quickly trained checkpoint shared by inference/protocol tests."""
    base = tmp_path_factory.mktemp("tiny")
    data = write_jsonl(base / "labeled.jsonl", synth_records(2000, seed=3))
    out = base / "model"
    config = TrainConfig(
        lr=1e-3, epochs=1, batch_size=64, seed=1,
        model=ModelConfig(dim=32, heads=4, layers=1, ffn=64,
                          max_len=48, doc_budget=20),
    )
    train(data, out, config)
    return out
