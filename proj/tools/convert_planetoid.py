#!/usr/bin/env python3
"""Convert Planetoid-style citation files into the plain-text dataset
directory consumed by the spgat CLI.

Expects the eight standard files (ind.<name>.x, .y, .tx, .ty, .allx,
.ally, .graph, .test.index) and writes edges.csv, features.csv,
labels.csv and split.json with the public split: the first len(y) nodes
for training, the next 500 for validation, and the reindexed test set.

Requires numpy and scipy.

Usage:
    python3 tools/convert_planetoid.py --input raw/ --name cora --out data/cora
"""

import argparse
import json
import pickle
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load_part(directory: Path, name: str, suffix: str):
    with open(directory / f"ind.{name}.{suffix}", "rb") as f:
        return pickle.load(f, encoding="latin1")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True, help="directory with the ind.<name>.* files")
    ap.add_argument("--name", required=True, help="dataset name, e.g. cora")
    ap.add_argument("--out", required=True, help="output dataset directory")
    args = ap.parse_args()

    src = Path(args.input)
    x, y, tx, ty, allx, ally, graph = (
        load_part(src, args.name, s) for s in ("x", "y", "tx", "ty", "allx", "ally", "graph")
    )
    test_idx = np.array(
        [int(line) for line in open(src / f"ind.{args.name}.test.index")], dtype=np.int64
    )
    test_sorted = np.sort(test_idx)

    # Reassemble features/labels in node order; isolated test nodes that are
    # missing from tx (citeseer) become zero rows.
    full_range = np.arange(test_sorted[0], test_sorted[-1] + 1)
    tx_full = sp.lil_matrix((len(full_range), x.shape[1]))
    ty_full = np.zeros((len(full_range), y.shape[1]))
    tx_full[test_sorted - test_sorted[0], :] = tx
    ty_full[test_sorted - test_sorted[0], :] = ty

    features = sp.vstack([allx, tx_full.tocsr()]).toarray()
    labels_onehot = np.vstack([ally, ty_full])
    order = np.concatenate([np.arange(allx.shape[0]), full_range])
    inv = np.argsort(order)
    features = features[inv]
    labels_onehot = labels_onehot[inv]
    labels = labels_onehot.argmax(axis=1)
    n = features.shape[0]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    edges = set()
    for i, nbrs in graph.items():
        for j in nbrs:
            if i == j or i >= n or j >= n:
                continue
            edges.add((min(i, j), max(i, j)))
    with open(out / "edges.csv", "w", newline="\n") as f:
        for i, j in sorted(edges):
            f.write(f"{i},{j}\n")

    with open(out / "features.csv", "w", newline="\n") as f:
        for row in features:
            f.write(",".join(repr(float(v)) for v in row) + "\n")

    with open(out / "labels.csv", "w", newline="\n") as f:
        for v in labels:
            f.write(f"{int(v)}\n")

    train = list(range(y.shape[0]))
    val = list(range(y.shape[0], y.shape[0] + 500))
    split = {"train": train, "val": val, "test": [int(v) for v in np.sort(test_idx)]}
    with open(out / "split.json", "w", newline="\n") as f:
        json.dump(split, f, separators=(",", ":"))
        f.write("\n")

    print(f"wrote {out}: n={n}, edges={len(edges)}, classes={labels_onehot.shape[1]}")


if __name__ == "__main__":
    main()
