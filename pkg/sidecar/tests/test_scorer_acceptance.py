"""Release gate for the scorer: AUC target, batching, protocol round trip."""

import json
import subprocess
import sys

import pytest

from conftest import synth_records, write_jsonl
from docscorer.model import ModelConfig, load_scorer
from docscorer.train import TrainConfig, train


@pytest.fixture(scope="module")
def desk_scale_model(tmp_path_factory):
    """Train on 50k synthetic-labeled pairs; labels true by construction."""
    base = tmp_path_factory.mktemp("desk")
    data = write_jsonl(base / "labeled.jsonl", synth_records(50_000, seed=11))
    out = base / "model"
    config = TrainConfig(
        lr=1e-3, epochs=2, batch_size=64, seed=1,
        model=ModelConfig(max_len=64, doc_budget=24),
    )
    metrics = train(data, out, config)
    return out, metrics


def test_acceptance_auc_at_desk_scale(desk_scale_model):
    _, metrics = desk_scale_model
    assert metrics["auc_valid"] >= 0.85, metrics
    print(f"[PASS] scorer validation AUC {metrics['auc_valid']:.4f} >= 0.85")


def test_acceptance_aligned_pair_scores_high(desk_scale_model):
    model_dir, _ = desk_scale_model
    model = load_scorer(model_dir)
    aligned = ("def parse_config(path):\n    return path.parse()",
               "Parse the config using the given path.")
    misaligned = ("def parse_config(path):\n    return path.parse()",
                  "Remove the user using the given stream.")
    hi, lo = model.predict_batch([aligned, misaligned])
    assert hi > 0.5, f"aligned pair scored {hi:.3f}"
    assert hi > lo
    print(f"[PASS] aligned pair {hi:.3f} > 0.5, misaligned {lo:.3f}")


def test_acceptance_batching_equivalence(desk_scale_model):
    model_dir, _ = desk_scale_model
    model = load_scorer(model_dir)
    pairs = [(r["code"], r["docstring"]) for r in synth_records(1000, seed=21)]
    batched = model.predict_batch(pairs)
    single = [model.predict_batch([p])[0] for p in pairs]
    worst = max(abs(a - b) for a, b in zip(batched, single))
    assert worst <= 1e-5, f"max difference {worst:.2e}"
    print(f"[PASS] batching equivalence, max diff {worst:.2e} <= 1e-5")


def test_acceptance_wire_round_trip(desk_scale_model):
    model_dir, _ = desk_scale_model
    proc = subprocess.Popen(
        [sys.executable, "-m", "docscorer.cli", "serve", "--model", str(model_dir)],
        stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1,
    )
    proc.stdin.write(json.dumps({"op": "hello", "proto": 1}) + "\n")
    proc.stdin.flush()
    assert json.loads(proc.stdout.readline()) == {"ok": True, "proto": 1}
    n = 1000
    for rid in range(n):
        proc.stdin.write(
            json.dumps({"id": rid, "op": "score",
                        "code": f"def cache_row(batch):\n    return batch.cache()  # {rid}",
                        "docstring": "Cache the row using the given batch.",
                        "lang": "python"}) + "\n"
        )
    proc.stdin.flush()
    seen = set()
    for _ in range(n):
        reply = json.loads(proc.stdout.readline())
        assert reply["id"] not in seen
        assert 0.0 < reply["score"] < 1.0
        seen.add(reply["id"])
    assert seen == set(range(n))
    proc.stdin.close()
    assert proc.wait(timeout=30) == 0
    print(f"[PASS] {n} wire requests each answered exactly once")
