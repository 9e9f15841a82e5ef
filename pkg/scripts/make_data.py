"""Regenerate the bundled benchmark stand-ins under data/.

Shapes and contamination rates follow the usual small anomaly
benchmarks (glass 214x7, wbc 223x9, stamps 340x9).  Seeds are pinned;
rerunning this script must reproduce the committed files byte for byte.
"""

from __future__ import annotations

import pathlib

from labelbudget import generate_clustered
from labelbudget.data import write_dataset_csv

SPECS = (
    ("glass", 214, 7, 0.0421, 2),
    ("wbc", 223, 9, 0.0448, 1),
    ("stamps", 340, 9, 0.0912, 3),
)


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "data"
    out_dir.mkdir(exist_ok=True)
    for name, n, d, gamma, seed in SPECS:
        ds = generate_clustered(n, d, gamma, seed=seed, name=name)
        path = write_dataset_csv(ds, out_dir / f"{name}.csv")
        print(f"{path} n={n} d={d} anomalies={int(ds.truth_labels.sum())}")


if __name__ == "__main__":
    main()
