"""Attack experiment orchestration.

Protocol: train the small CNN on clean digits only; encrypt the held-out
test set through the securepix CLI under (a) a random 16-level key with
process variation (the cipher as deployed) and (b) a uniform top-level key
without variation (a pure tone map - the negative control separating
"encryption" from "any transformation"); report all accuracies as JSON:

    {"clean_acc": ..., "encrypted_acc": ..., "uniform_key_acc": ..., "seed": ...}
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import torch

from .dataset import DigitSplits, load_dataset
from .encryptor import encrypt_set, generate_random_key, write_uniform_key
from .model import NormStats, SmallCNN, evaluate, train_cnn


@dataclass(frozen=True)
class AttackConfig:
    train_count: int = 1397
    test_count: int = 400
    epochs: int = 20
    seed: int = 0
    size: int = 16
    levels: int = 16
    data_dir: Path | None = None  # MNIST IDX directory; None = bundled digits
    tone_lo: int = 0
    tone_hi: int = 255
    workers: int = 4


def train_baseline(
    config: AttackConfig, splits: DigitSplits
) -> tuple[SmallCNN, NormStats, float]:
    """Train on clean digits; returns (model, normalization, clean accuracy)."""
    stats = NormStats.from_images(splits.train_x)
    model = train_cnn(
        splits.train_x, splits.train_y, stats, epochs=config.epochs, seed=config.seed
    )
    clean_acc = evaluate(model, splits.test_x, splits.test_y, stats)
    return model, stats, clean_acc


def evaluate_encrypted(model: SmallCNN, stats: NormStats, images, labels) -> float:
    return evaluate(model, images, labels, stats)


def run_attack(config: AttackConfig, workdir: Path) -> dict:
    torch.set_num_threads(max(1, config.workers))
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    splits = load_dataset(
        config.data_dir, config.train_count, config.test_count, config.seed,
        size=config.size, tone_lo=config.tone_lo, tone_hi=config.tone_hi,
    )
    model, stats, clean_acc = train_baseline(config, splits)

    random_key = workdir / "random.spk"
    uniform_key = workdir / "uniform.spk"
    generate_random_key(random_key, splits.size, config.levels, seed=config.seed + 99)
    write_uniform_key(uniform_key, splits.size, config.levels, level=config.levels)

    encrypted = encrypt_set(
        splits.test_x, random_key, workdir / "enc_random",
        variation=True, seed_base=1000, workers=config.workers,
    )
    control = encrypt_set(
        splits.test_x, uniform_key, workdir / "enc_uniform",
        variation=False, seed_base=0, workers=config.workers,
    )

    results = {
        "clean_acc": clean_acc,
        "encrypted_acc": evaluate_encrypted(model, stats, encrypted, splits.test_y),
        "uniform_key_acc": evaluate_encrypted(model, stats, control, splits.test_y),
        "seed": config.seed,
    }
    (workdir / "results.json").write_text(json.dumps(results, indent=2) + "\n")
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="securepix-attack",
        description="Evaluate a clean-trained CNN on securepix-encrypted digits.",
    )
    parser.add_argument("--workdir", default="attack_out")
    parser.add_argument("--train-count", type=int, default=1397)
    parser.add_argument("--test-count", type=int, default=400)
    parser.add_argument("--epochs", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--size", type=int, default=16)
    parser.add_argument("--data-dir", default=None, help="directory with MNIST IDX files")
    parser.add_argument("--tone-lo", type=int, default=0,
                        help="darkest rendered code (contrast experiment)")
    parser.add_argument("--tone-hi", type=int, default=255,
                        help="brightest rendered code (contrast experiment)")
    parser.add_argument("--workers", type=int, default=4)
    args = parser.parse_args(argv)

    config = AttackConfig(
        train_count=args.train_count,
        test_count=args.test_count,
        epochs=args.epochs,
        seed=args.seed,
        size=args.size,
        data_dir=Path(args.data_dir) if args.data_dir else None,
        tone_lo=args.tone_lo,
        tone_hi=args.tone_hi,
        workers=args.workers,
    )
    results = run_attack(config, Path(args.workdir))
    print(json.dumps(results, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
