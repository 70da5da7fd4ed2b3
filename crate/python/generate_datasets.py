#!/usr/bin/env python3
"""Regenerate the bundled benchmark datasets under data/.

iris and wine are the classic UCI tables, taken verbatim from the copies
that ship inside scikit-learn. sonar, breast and testset are seeded
synthetic stand-ins with the same shape and class balance as their UCI
namesakes (see data/README.md); they exist so the benchmark suite runs
offline with no downloads.

The output is deterministic: rerunning this script reproduces the
committed files byte for byte.
"""

import os

import numpy as np
from sklearn.datasets import load_iris, load_wine

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def write_libsvm(path, features, labels):
    """Dense LIBSVM text: `<label> 1:v 2:v ...` with 1-based indices."""
    with open(path, "w") as fh:
        for row, label in zip(features, labels):
            cells = " ".join(f"{j + 1}:{fmt(v)}" for j, v in enumerate(row))
            fh.write(f"{int(label)} {cells}\n")


def fmt(v):
    # Shortest decimal text that round-trips; integers stay bare.
    f = float(v)
    if f == int(f) and abs(f) < 1e15:
        return str(int(f))
    return repr(f)


def gaussian_binary(rng, n_per_class, dim, separation, scale=1.0):
    """Two Gaussian clusters along a random unit direction."""
    direction = rng.standard_normal(dim)
    direction /= np.linalg.norm(direction)
    rows, labels = [], []
    for cls, n in enumerate(n_per_class):
        center = direction * (separation / 2.0) * (1.0 if cls == 0 else -1.0)
        pts = center + rng.standard_normal((n, dim)) * scale
        rows.append(pts)
        labels.extend([cls] * n)
    x = np.vstack(rows)
    y = np.array(labels)
    order = rng.permutation(len(y))
    return np.round(x[order], 6), y[order]


def main():
    os.makedirs(DATA, exist_ok=True)

    iris = load_iris()
    write_libsvm(os.path.join(DATA, "iris.libsvm"), iris.data, iris.target)

    wine = load_wine()
    write_libsvm(os.path.join(DATA, "wine.libsvm"), wine.data, wine.target)

    # sonar stand-in: 208 x 60, 2 classes (111/97), heavily overlapping.
    rng = np.random.default_rng(20240601)
    x, y = gaussian_binary(rng, (111, 97), 60, separation=1.6)
    write_libsvm(os.path.join(DATA, "sonar.libsvm"), x, y)

    # breast stand-in: 277 x 9, 2 classes (196/81), moderate overlap.
    rng = np.random.default_rng(20240602)
    x, y = gaussian_binary(rng, (196, 81), 9, separation=2.0)
    write_libsvm(os.path.join(DATA, "breast.libsvm"), x, y)

    # testset stand-in: 100 x 2, 2 balanced, cleanly separable clusters.
    rng = np.random.default_rng(20240603)
    x, y = gaussian_binary(rng, (50, 50), 2, separation=8.0)
    write_libsvm(os.path.join(DATA, "testset.libsvm"), x, y)

    for name in ("iris", "wine", "sonar", "breast", "testset"):
        path = os.path.join(DATA, f"{name}.libsvm")
        with open(path) as fh:
            n = sum(1 for _ in fh)
        print(f"{name}: {n} rows -> {path}")


if __name__ == "__main__":
    main()
