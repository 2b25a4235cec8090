"""Drive the securepix CLI to produce encrypted digit sets.

The harness never re-implements any part of the cipher: keys come from
`securepix keygen`, uniform-key files are written in the documented .spk
text format, and every image goes through `securepix encrypt` as a PGM
file.  Encryption jobs are independent, so they fan out over a small
process pool; per-image variation seeds keep results deterministic.
"""

from __future__ import annotations

import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

SECUREPIX = [sys.executable, "-m", "securepix"]


def _run(args: list[str]) -> None:
    result = subprocess.run(
        SECUREPIX + args, capture_output=True, text=True, check=False
    )
    if result.returncode != 0:
        raise RuntimeError(
            f"securepix {' '.join(args)} failed with {result.returncode}: "
            f"{result.stderr.strip()}"
        )


def write_pgm(path: Path, image: np.ndarray) -> None:
    rows, cols = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(image.astype(np.uint8).tobytes())


def read_pgm(path: Path) -> np.ndarray:
    blob = path.read_bytes()
    tokens: list[bytes] = []
    i = 0
    while len(tokens) < 4:
        if blob[i:i + 1] == b"#":
            i = blob.index(b"\n", i) + 1
        elif blob[i:i + 1].isspace():
            i += 1
        else:
            j = i
            while not blob[j:j + 1].isspace():
                j += 1
            tokens.append(blob[i:j])
            i = j
    i += 1
    cols, rows = int(tokens[1]), int(tokens[2])
    return np.frombuffer(blob[i:i + rows * cols], dtype=np.uint8).reshape(rows, cols).copy()


def generate_random_key(path: Path, size: int, levels: int, seed: int) -> None:
    _run([
        "keygen", "--rows", str(size), "--cols", str(size),
        "--levels", str(levels), "--seed", str(seed), "--out", str(path),
    ])


def write_uniform_key(path: Path, size: int, levels: int, level: int) -> None:
    """Uniform keys are degenerate (zero entropy), so keygen does not make
    them; write the documented .spk format directly."""
    lines = ["SECUREPIX-KEY 1", f"{size} {size} {levels} 1.3 2.8"]
    lines += [" ".join([str(level)] * size) for _ in range(size)]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def encrypt_set(
    images: np.ndarray,
    key_path: Path,
    out_dir: Path,
    variation: bool,
    seed_base: int = 0,
    workers: int = 4,
) -> np.ndarray:
    """Encrypt every image through the CLI; returns the encrypted stack."""
    out_dir.mkdir(parents=True, exist_ok=True)

    def job(index: int) -> None:
        plain = out_dir / f"plain_{index:05d}.pgm"
        enc = out_dir / f"enc_{index:05d}.pgm"
        write_pgm(plain, images[index])
        args = [
            "encrypt", str(plain), str(enc),
            "--key", str(key_path), "--seed", str(seed_base + index),
        ]
        if not variation:
            args.append("--no-variation")
        _run(args)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(job, range(len(images))))
    return np.stack(
        [read_pgm(out_dir / f"enc_{i:05d}.pgm") for i in range(len(images))]
    )
