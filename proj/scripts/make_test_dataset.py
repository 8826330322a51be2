#!/usr/bin/env python3
"""Regenerates tests/data/{images,labels}.idx.gz.

Builds a 10000-sample, 28x28 handwritten-digit corpus in the classic IDX
layout (magic 2051/2049, big-endian) from the scikit-learn digits set:
each 8x8 digit is upscaled with bicubic interpolation, contrast-shaped so
stroke width and ink coverage sit in the usual MNIST range, and augmented
to 10000 samples with small seeded translations. Output is gzipped; the
loaders sniff the gzip magic and decompress on the fly.

Requires: numpy, scikit-learn, opencv-python. Run from the repo root:

    python3 scripts/make_test_dataset.py
"""

import gzip
import struct
from pathlib import Path

import cv2
import numpy as np
from sklearn.datasets import load_digits

SEED = 20240817
TARGET_COUNT = 10000
SIZE = 28
OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"


def upscale(img8: np.ndarray) -> np.ndarray:
    # 8x8 values are 0..16; bicubic to 24x24 then pad to 28x28 so digits
    # keep the margin MNIST digits have.
    norm = (img8 / 16.0).astype(np.float32)
    big = cv2.resize(norm, (22, 22), interpolation=cv2.INTER_CUBIC)
    big = np.clip(big, 0.0, 1.0)
    # Gamma > 1 suppresses the wide bicubic skirt and thins the strokes
    # toward typical MNIST ink coverage.
    big = big ** 3.2
    out = np.zeros((SIZE, SIZE), dtype=np.float32)
    out[3:25, 3:25] = big
    pix = np.rint(out * 255.0).astype(np.int32)
    pix[pix < 40] = 0
    return np.clip(pix, 0, 255).astype(np.uint8)


def shift(img: np.ndarray, dy: int, dx: int) -> np.ndarray:
    out = np.zeros_like(img)
    src_y = slice(max(0, -dy), SIZE - max(0, dy))
    src_x = slice(max(0, -dx), SIZE - max(0, dx))
    dst_y = slice(max(0, dy), SIZE - max(0, -dy))
    dst_x = slice(max(0, dx), SIZE - max(0, -dx))
    out[dst_y, dst_x] = img[src_y, src_x]
    return out


def main() -> None:
    rng = np.random.default_rng(SEED)
    base = load_digits()
    images = [upscale(im) for im in base.images]
    labels = list(base.target)

    order = rng.permutation(TARGET_COUNT)
    out_images = np.zeros((TARGET_COUNT, SIZE, SIZE), dtype=np.uint8)
    out_labels = np.zeros(TARGET_COUNT, dtype=np.uint8)
    for slot, k in enumerate(order):
        i = int(k) % len(images)
        if int(k) < len(images):
            img = images[i]
        else:
            dy, dx = rng.integers(-2, 3, size=2)
            img = shift(images[i], int(dy), int(dx))
        out_images[slot] = img
        out_labels[slot] = labels[i]

    ink = (out_images > 0).sum(axis=(1, 2))
    print(f"ink pixels per image: mean={ink.mean():.1f} min={ink.min()} max={ink.max()}")

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    img_blob = struct.pack(">iiii", 2051, TARGET_COUNT, SIZE, SIZE) + out_images.tobytes()
    lbl_blob = struct.pack(">ii", 2049, TARGET_COUNT) + out_labels.tobytes()
    assert len(img_blob) == 16 + TARGET_COUNT * SIZE * SIZE
    assert len(lbl_blob) == 8 + TARGET_COUNT

    for name, blob in (("images.idx.gz", img_blob), ("labels.idx.gz", lbl_blob)):
        path = OUT_DIR / name
        with open(path, "wb") as raw:
            with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
                gz.write(blob)
        print(f"wrote {path} ({path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
