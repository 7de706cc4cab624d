#!/usr/bin/env python3
# Copyright 2026 The wfl Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes an MNIST subset (first N images of each class) as IDX files.

Source is either a pair of full MNIST IDX files or the 5000-sample MNIST
CSV shipped inside the mlxtend wheel (``mlxtend/data/data/mnist_5k.csv.gz``).
"""
import argparse
import gzip
import io
import struct
import zipfile

import numpy as np


def read_mlxtend(wheel):
    with zipfile.ZipFile(wheel) as z:
        raw = gzip.decompress(z.read("mlxtend/data/data/mnist_5k.csv.gz"))
    table = np.loadtxt(io.BytesIO(raw), delimiter=",")
    return table[:, :-1].astype(np.uint8), table[:, -1].astype(np.uint8)


def read_idx(images, labels):
    with open(images, "rb") as f:
        magic, n, rows, cols = struct.unpack(">IIII", f.read(16))
        assert magic == 0x803
        x = np.frombuffer(f.read(), dtype=np.uint8).reshape(n, rows * cols)
    with open(labels, "rb") as f:
        magic, n = struct.unpack(">II", f.read(8))
        assert magic == 0x801
        y = np.frombuffer(f.read(), dtype=np.uint8)
    return x, y


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mlxtend-wheel")
    ap.add_argument("--images")
    ap.add_argument("--labels")
    ap.add_argument("--per-class", type=int, default=100)
    ap.add_argument("--out-prefix", default="data/mnist-1k")
    args = ap.parse_args()

    if args.mlxtend_wheel:
        x, y = read_mlxtend(args.mlxtend_wheel)
    else:
        x, y = read_idx(args.images, args.labels)

    keep = np.concatenate(
        [np.flatnonzero(y == c)[: args.per_class] for c in range(10)])
    keep.sort()
    x, y = x[keep], y[keep]

    with open(args.out_prefix + "-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(x), 28, 28))
        f.write(x.tobytes())
    with open(args.out_prefix + "-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(y)))
        f.write(y.tobytes())
    print(f"wrote {len(x)} samples, per-class counts {np.bincount(y)}")


if __name__ == "__main__":
    main()
