"""Sentence encoders with mean pooling over the final layer.

Two backends share one interface: a self-contained "tiny" transformer with
a hashing word tokenizer (no downloads, deterministic), and any Hugging
Face masked-LM checkpoint (e.g. roberta-base) when the `transformers`
package and its weights are available.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import numpy as np
import torch
from torch import nn

_TOKEN_RE = re.compile(r"[^0-9a-z]+")


class HashTokenizer:
    """Word-level tokenizer mapping each word to a stable hash bucket."""

    PAD = 0

    def __init__(self, vocab_size: int = 4096, max_tokens: int = 256):
        if vocab_size < 2:
            raise ValueError("vocab_size must be >= 2")
        self.vocab_size = vocab_size
        self.max_tokens = max_tokens

    def _bucket(self, word: str) -> int:
        digest = hashlib.blake2b(word.encode("utf-8"), digest_size=8).digest()
        return 1 + int.from_bytes(digest, "little") % (self.vocab_size - 1)

    def encode(self, text: str) -> list[int]:
        words = [w for w in _TOKEN_RE.split(text.lower()) if w]
        return [self._bucket(w) for w in words[: self.max_tokens]]

    def batch(self, texts: list[str]) -> tuple[torch.Tensor, torch.Tensor]:
        encoded = [self.encode(t) or [self.PAD] for t in texts]
        width = max(len(e) for e in encoded)
        ids = torch.full((len(texts), width), self.PAD, dtype=torch.long)
        mask = torch.zeros((len(texts), width))
        for i, e in enumerate(encoded):
            ids[i, : len(e)] = torch.tensor(e)
            mask[i, : len(e)] = 1.0
        return ids, mask


def mean_pool(hidden: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    weights = mask.unsqueeze(-1)
    denom = weights.sum(dim=1).clamp(min=1.0)
    return (hidden * weights).sum(dim=1) / denom


class SentenceEncoder(nn.Module):
    """Small transformer encoder pooled to one vector per sentence."""

    def __init__(self, vocab_size=4096, dim=768, n_layers=2, n_heads=4,
                 ff_dim=512, max_tokens=256, dropout=0.1):
        super().__init__()
        self.config = {
            "vocab_size": vocab_size, "dim": dim, "n_layers": n_layers,
            "n_heads": n_heads, "ff_dim": ff_dim, "max_tokens": max_tokens,
            "dropout": dropout,
        }
        self.tokenizer = HashTokenizer(vocab_size, max_tokens)
        self.embed = nn.Embedding(vocab_size, dim, padding_idx=HashTokenizer.PAD)
        self.pos = nn.Embedding(max_tokens, dim)
        layer = nn.TransformerEncoderLayer(
            d_model=dim, nhead=n_heads, dim_feedforward=ff_dim,
            dropout=dropout, batch_first=True,
        )
        self.layers = nn.TransformerEncoder(layer, num_layers=n_layers)
        self.dropout = nn.Dropout(dropout)
        # pooled output = token embeddings + scaled contextual mix; starting
        # small keeps lexical overlap informative before any fine-tuning
        self.mix = nn.Parameter(torch.tensor(0.1))

    @property
    def dim(self) -> int:
        return self.config["dim"]

    def forward(self, ids: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(ids.shape[1], device=ids.device)
        tokens = self.dropout(self.embed(ids))
        mixed = self.layers(tokens + self.pos(positions),
                            src_key_padding_mask=mask == 0)
        return mean_pool(tokens + self.mix * mixed, mask)

    def encode(self, texts: list[str], batch_size: int = 32) -> np.ndarray:
        self.eval()
        out = []
        with torch.no_grad():
            for i in range(0, len(texts), batch_size):
                ids, mask = self.tokenizer.batch(texts[i : i + batch_size])
                out.append(self(ids, mask).numpy())
        return np.vstack(out).astype(np.float32)


class HFEncoder:
    """Mean-pooled wrapper around a Hugging Face checkpoint."""

    def __init__(self, model_name: str, max_tokens: int = 256):
        from transformers import AutoModel, AutoTokenizer

        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name)
        self.max_tokens = max_tokens
        self.dim = int(self.model.config.hidden_size)

    def encode(self, texts: list[str], batch_size: int = 32) -> np.ndarray:
        self.model.eval()
        out = []
        with torch.no_grad():
            for i in range(0, len(texts), batch_size):
                enc = self.tokenizer(
                    texts[i : i + batch_size], padding=True, truncation=True,
                    max_length=self.max_tokens, return_tensors="pt",
                )
                hidden = self.model(**enc).last_hidden_state
                out.append(mean_pool(hidden, enc["attention_mask"].float()).numpy())
        return np.vstack(out).astype(np.float32)


def save_model(encoder: SentenceEncoder, out_dir) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(encoder.state_dict(), out_dir / "weights.pt")
    (out_dir / "config.json").write_text(json.dumps(encoder.config))


def load_model(model_dir) -> SentenceEncoder:
    model_dir = Path(model_dir)
    config = json.loads((model_dir / "config.json").read_text())
    encoder = SentenceEncoder(**config)
    encoder.load_state_dict(torch.load(model_dir / "weights.pt", weights_only=True))
    return encoder


def build_encoder(model: str = "tiny", seed: int = 0, **kwargs):
    """Resolve a model spec: "tiny", a saved model directory, or a HF name."""
    if model == "tiny":
        torch.manual_seed(seed)
        return SentenceEncoder(**kwargs)
    if Path(model).is_dir():
        return load_model(model)
    try:
        return HFEncoder(model, max_tokens=kwargs.get("max_tokens", 256))
    except Exception as exc:
        raise RuntimeError(
            f"could not load model {model!r}: {exc}. Use 'tiny', a saved "
            "model directory, or an available Hugging Face checkpoint."
        ) from exc
