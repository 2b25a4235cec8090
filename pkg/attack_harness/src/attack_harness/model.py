"""The adversary: a small seeded CNN (2 conv blocks + 2 dense layers).

Trained only on clean digits with standard supervised learning; inputs are
normalized by global statistics of the clean training set, so the model has
no per-image renormalization to hide distribution shifts behind.  Training
is seeded and deterministic up to framework nondeterminism (single-threaded
CPU torch is reproducible in practice; the tests allow a 0.5% tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn


@dataclass(frozen=True)
class NormStats:
    mean: float
    std: float

    @classmethod
    def from_images(cls, images: np.ndarray) -> "NormStats":
        scaled = images.astype(np.float64) / 255.0
        return cls(mean=float(scaled.mean()), std=float(scaled.std()))


class SmallCNN(nn.Module):
    def __init__(self, size: int):
        super().__init__()
        self.input_side = size
        self.net = nn.Sequential(
            nn.Conv2d(1, 8, 3, padding=1), nn.BatchNorm2d(8), nn.ReLU(), nn.MaxPool2d(2),
            nn.Conv2d(8, 16, 3, padding=1), nn.BatchNorm2d(16), nn.ReLU(), nn.MaxPool2d(2),
            nn.Flatten(),
            nn.Linear(16 * (size // 4) ** 2, 64), nn.ReLU(),
            nn.Linear(64, 10),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)


def _to_tensor(images: np.ndarray, stats: NormStats) -> torch.Tensor:
    scaled = (images.astype(np.float32) / 255.0 - stats.mean) / stats.std
    return torch.tensor(scaled, dtype=torch.float32)[:, None]


def train_cnn(
    images: np.ndarray, labels: np.ndarray, stats: NormStats,
    epochs: int, seed: int, batch_size: int = 64, lr: float = 1e-3,
) -> SmallCNN:
    torch.manual_seed(seed)
    model = SmallCNN(size=images.shape[1])
    x = _to_tensor(images, stats)
    y = torch.tensor(labels, dtype=torch.long)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    loss_fn = nn.CrossEntropyLoss()
    shuffler = torch.Generator().manual_seed(seed)
    model.train()
    for _ in range(epochs):
        order = torch.randperm(len(x), generator=shuffler)
        for start in range(0, len(x), batch_size):
            idx = order[start:start + batch_size]
            optimizer.zero_grad()
            loss_fn(model(x[idx]), y[idx]).backward()
            optimizer.step()
    model.eval()
    return model


def evaluate(model: SmallCNN, images: np.ndarray, labels: np.ndarray, stats: NormStats) -> float:
    if images.shape[1] != model.input_side or images.shape[2] != model.input_side:
        raise ValueError(
            f"images are {images.shape[1]}x{images.shape[2]} but the model was "
            f"trained on {model.input_side}x{model.input_side}"
        )
    x = _to_tensor(images, stats)
    with torch.no_grad():
        predictions = model(x).argmax(dim=1).numpy()
    return float((predictions == labels).mean())
