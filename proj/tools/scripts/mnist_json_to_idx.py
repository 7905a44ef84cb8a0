#!/usr/bin/env python3
# Copyright (C) 2026 loralab contributors
# SPDX-License-Identifier: Apache-2.0
"""Convert the per-digit JSON files shipped in the npm `mnist` package to IDX.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 mnist_json_to_idx.py package/src/digits out/

Samples are interleaved round-robin across digits so a prefix is balanced.
"""

import argparse
import json
import struct
from pathlib import Path


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("digits_dir", type=Path)
    ap.add_argument("out_dir", type=Path)
    args = ap.parse_args()

    per_digit = []
    for d in range(10):
        flat = json.loads((args.digits_dir / f"{d}.json").read_text())["data"]
        if len(flat) % 784:
            raise SystemExit(f"{d}.json: length {len(flat)} is not a multiple of 784")
        per_digit.append([flat[i : i + 784] for i in range(0, len(flat), 784)])

    images, labels = bytearray(), bytearray()
    longest = max(len(v) for v in per_digit)
    for i in range(longest):
        for d in range(10):
            if i < len(per_digit[d]):
                images.extend(min(255, max(0, round(p * 255))) for p in per_digit[d][i])
                labels.append(d)

    n = len(labels)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "images.idx3-ubyte").write_bytes(struct.pack(">IIII", 2051, n, 28, 28) + images)
    (args.out_dir / "labels.idx1-ubyte").write_bytes(struct.pack(">II", 2049, n) + labels)
    print(f"wrote {n} samples to {args.out_dir}")


if __name__ == "__main__":
    main()
