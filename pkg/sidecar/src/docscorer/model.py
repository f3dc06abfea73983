"""Encoder with a linear scoring head, plus checkpoint load/save.

A small transformer encoder stands in for a full pretrained code/text
model: embeddings over a hashing vocabulary, learned positions, and a
single linear layer over the start-token representation feeding a
sigmoid.  Checkpoints are a directory of {weights.pt, config.json,
metrics.json}.
"""

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import torch
from torch import nn

from .framing import N_SPECIAL, PAD_ID, frame


@dataclass
class ModelConfig:
    vocab_size: int = 8192
    dim: int = 64
    layers: int = 2
    heads: int = 4
    ffn: int = 128
    max_len: int = 128
    doc_budget: int = 48
    dropout: float = 0.1
    batch_size: int = 64

    def validate(self) -> None:
        if self.doc_budget > self.max_len - 2:
            raise ValueError("doc_budget must leave room for CLS and SEP")
        if self.dim % self.heads:
            raise ValueError("dim must be divisible by heads")


class ConsistencyScorer(nn.Module):
    def __init__(self, config: ModelConfig) -> None:
        super().__init__()
        config.validate()
        self.config = config
        self.tok_emb = nn.Embedding(
            config.vocab_size + N_SPECIAL, config.dim, padding_idx=PAD_ID
        )
        self.pos_emb = nn.Embedding(config.max_len, config.dim)
        layer = nn.TransformerEncoderLayer(
            d_model=config.dim,
            nhead=config.heads,
            dim_feedforward=config.ffn,
            dropout=config.dropout,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            layer, num_layers=config.layers, enable_nested_tensor=False
        )
        self.head = nn.Linear(config.dim, 1)

    def forward(self, ids: torch.Tensor) -> torch.Tensor:
        """Logits for a padded batch of id sequences, shape (B, L)."""
        pos = torch.arange(ids.shape[1], device=ids.device)
        x = self.tok_emb(ids) + self.pos_emb(pos)[None, :, :]
        pad_mask = ids == PAD_ID
        x = self.encoder(x, src_key_padding_mask=pad_mask)
        return self.head(x[:, 0, :]).squeeze(-1)

    # ------------------------------------------------------------------
    # inference

    def _collate(self, pairs: Sequence[Tuple[str, str]]) -> torch.Tensor:
        cfg = self.config
        frames = [frame(c, d, cfg.vocab_size, cfg.max_len, cfg.doc_budget) for c, d in pairs]
        width = max(len(f) for f in frames)
        ids = torch.full((len(frames), width), PAD_ID, dtype=torch.long)
        for i, f in enumerate(frames):
            ids[i, : len(f)] = torch.tensor(f, dtype=torch.long)
        return ids

    @torch.no_grad()
    def predict_batch(self, pairs: Sequence[Tuple[str, str]]) -> List[float]:
        """Scores in (0, 1), order-preserving; batches bounded by config."""
        if not pairs:
            return []
        self.eval()
        out: List[float] = []
        for start in range(0, len(pairs), self.config.batch_size):
            chunk = pairs[start : start + self.config.batch_size]
            logits = self.forward(self._collate(chunk))
            probs = torch.sigmoid(logits).clamp(1e-6, 1 - 1e-6)
            out.extend(float(p) for p in probs)
        return out

    # ------------------------------------------------------------------
    # checkpointing

    def save(self, out_dir: Path, metrics: dict) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        torch.save(self.state_dict(), out_dir / "weights.pt")
        (out_dir / "config.json").write_text(
            json.dumps(dataclasses.asdict(self.config), indent=2) + "\n"
        )
        (out_dir / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")


def load_scorer(model_dir: Path) -> ConsistencyScorer:
    model_dir = Path(model_dir)
    config = ModelConfig(**json.loads((model_dir / "config.json").read_text()))
    model = ConsistencyScorer(config)
    model.load_state_dict(torch.load(model_dir / "weights.pt", weights_only=True))
    model.eval()
    return model
