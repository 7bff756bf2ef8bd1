"""Unsupervised contrastive fine-tuning with dropout-induced positives.

Each sentence is encoded twice with dropout active; the two noisy copies
form a positive pair and the rest of the batch serves as in-batch
negatives for a temperature-scaled cross-entropy loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from pybridge.encoder import SentenceEncoder, build_encoder


@dataclass(frozen=True)
class FinetuneConfig:
    base_model: str = "roberta-base"
    max_tokens: int = 256
    batch_size: int = 128
    lr: float = 1e-5
    warmup: float = 0.5  # fraction of first-epoch batches
    epochs: int = 1
    temperature: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 2:
            raise ValueError("batch_size must be >= 2 for in-batch negatives")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0.0 <= self.warmup <= 1.0:
            raise ValueError("warmup must be in [0, 1]")


def contrastive_loss(z1: torch.Tensor, z2: torch.Tensor, temperature: float):
    z1 = nn.functional.normalize(z1, dim=1)
    z2 = nn.functional.normalize(z2, dim=1)
    logits = z1 @ z2.T / temperature
    labels = torch.arange(z1.shape[0])
    return nn.functional.cross_entropy(logits, labels)


def finetune(
    sentences: list[str],
    cfg: FinetuneConfig,
    encoder: SentenceEncoder | None = None,
) -> tuple[SentenceEncoder, list[float]]:
    """Train and return the encoder together with the per-batch loss curve."""
    if len(sentences) < cfg.batch_size:
        raise ValueError(
            f"need at least batch_size={cfg.batch_size} sentences, "
            f"got {len(sentences)}"
        )
    torch.manual_seed(cfg.seed)
    if encoder is None:
        encoder = build_encoder(cfg.base_model, seed=cfg.seed,
                                max_tokens=cfg.max_tokens)
    if not isinstance(encoder, nn.Module):
        raise ValueError("fine-tuning requires a torch encoder")

    optim = torch.optim.AdamW(encoder.parameters(), lr=cfg.lr)
    batches_per_epoch = len(sentences) // cfg.batch_size
    warmup_steps = max(1, int(batches_per_epoch * cfg.warmup))

    generator = torch.Generator().manual_seed(cfg.seed)
    losses: list[float] = []
    step = 0
    encoder.train()
    for _epoch in range(cfg.epochs):
        order = torch.randperm(len(sentences), generator=generator).tolist()
        for b in range(batches_per_epoch):
            batch = [sentences[i] for i in
                     order[b * cfg.batch_size : (b + 1) * cfg.batch_size]]
            scale = min(1.0, (step + 1) / warmup_steps)
            for group in optim.param_groups:
                group["lr"] = cfg.lr * scale
            ids, mask = encoder.tokenizer.batch(batch)
            try:
                z1 = encoder(ids, mask)
                z2 = encoder(ids, mask)  # second dropout draw = positive pair
                loss = contrastive_loss(z1, z2, cfg.temperature)
                optim.zero_grad()
                loss.backward()
                optim.step()
            except torch.cuda.OutOfMemoryError as exc:
                raise RuntimeError(
                    "out of memory during fine-tuning; retry with a smaller "
                    "batch_size or max_tokens"
                ) from exc
            losses.append(float(loss.detach()))
            step += 1
    encoder.eval()
    return encoder, losses
