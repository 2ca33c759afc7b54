"""Writes the synthetic ratings file used by the CLI acceptance tests.

Ratings follow a small latent-factor model on [-10, 10] with two decimals.
The first ten items are densely rated and the rest sparsely, so the
top-rated selection has a clear cut and some voters are incomplete.

    python3 scripts/gen_ratings.py > crates/cli/tests/data/ratings.csv
"""

import csv
import sys

import numpy as np

VOTERS = 600
ITEMS = 20
FACTORS = 3
SEED = 20240601


def main() -> None:
    rng = np.random.default_rng(SEED)
    users = rng.normal(size=(VOTERS, FACTORS))
    items = rng.normal(size=(ITEMS, FACTORS))
    bias = rng.normal(scale=2.0, size=ITEMS)
    raw = users @ items.T * 2.5 + bias + rng.normal(scale=2.0, size=(VOTERS, ITEMS))
    ratings = np.clip(np.round(raw, 2), -10.0, 10.0)
    density = np.where(np.arange(ITEMS) < 10, 0.97, 0.45)
    rated = rng.random((VOTERS, ITEMS)) < density

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["voter"] + [f"item{j:02d}" for j in range(ITEMS)])
    for i in range(VOTERS):
        cells = [f"{ratings[i, j]:.2f}" if rated[i, j] else "" for j in range(ITEMS)]
        out.writerow([i] + cells)


if __name__ == "__main__":
    main()
