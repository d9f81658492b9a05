#!/usr/bin/env python3
"""Build IDX files from the 5,000-image MNIST subset shipped inside the mlxtend wheel.

The subset is the first 500 MNIST training images of each digit, stored sorted
by class. Images are shuffled with a fixed seed, then split into 4,000 training
and 1,000 test images.

    pip download mlxtend --no-deps -d /tmp/mlx
    python3 tools/make_mnist5k.py /tmp/mlx/mlxtend-*.whl data/mnist5k
"""
import gzip
import io
import struct
import sys
import zipfile
from pathlib import Path

import numpy as np

SEED = 20190601
TRAIN_COUNT = 4000


def write_images(path, images):
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        f.write(images.astype(np.uint8).tobytes())


def write_labels(path, labels):
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(labels.astype(np.uint8).tobytes())


def main():
    wheel, out = sys.argv[1], Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    raw = zipfile.ZipFile(wheel).read("mlxtend/data/data/mnist_5k.csv.gz")
    table = np.loadtxt(io.StringIO(gzip.decompress(raw).decode()), delimiter=",").astype(np.int64)
    images, labels = table[:, :784], table[:, 784]
    order = np.random.default_rng(SEED).permutation(len(labels))
    images, labels = images[order], labels[order]
    write_images(out / "train-images-idx3-ubyte", images[:TRAIN_COUNT])
    write_labels(out / "train-labels-idx1-ubyte", labels[:TRAIN_COUNT])
    write_images(out / "test-images-idx3-ubyte", images[TRAIN_COUNT:])
    write_labels(out / "test-labels-idx1-ubyte", labels[TRAIN_COUNT:])


if __name__ == "__main__":
    main()
