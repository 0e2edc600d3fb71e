"""Write the dense-oracle trajectory for the Hadamard walk on a 4-cycle.

The oracle evolves a vector in C^{2n} (index 2*site + chirality) under the
step operator directly, independently of the category-algebra code path.

    python scripts/make_walk_fixture.py [--n 4] [--steps 3] [--out data/hadamard4_oracle.csv]
"""
from __future__ import annotations

import argparse
import csv
import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]


def step_operator(n: int, coin: np.ndarray) -> np.ndarray:
    p = np.diag([1.0, 0.0])
    q = np.diag([0.0, 1.0])
    u = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        u[2 * ((i + 1) % n) : 2 * ((i + 1) % n) + 2, 2 * i : 2 * i + 2] += p @ coin
        u[2 * ((i - 1) % n) : 2 * ((i - 1) % n) + 2, 2 * i : 2 * i + 2] += q @ coin
    return u


def oracle_rows(n: int, coin: np.ndarray, site: int, coin_state, steps: int) -> list[tuple]:
    u = step_operator(n, coin)
    psi = np.zeros(2 * n, dtype=complex)
    psi[2 * site : 2 * site + 2] = coin_state
    psi /= np.linalg.norm(psi)
    rows = []
    for t in range(steps + 1):
        prob = np.abs(psi) ** 2
        for i in range(n):
            rows.append((t, f"site:{i}", prob[2 * i] + prob[2 * i + 1], 0.0))
        rows.append((t, "chirality:P", prob[0::2].sum(), 0.0))
        rows.append((t, "chirality:Q", prob[1::2].sum(), 0.0))
        psi = u @ psi
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "data" / "hadamard4.json"))
    ap.add_argument("--steps", type=int, default=3)
    ap.add_argument("--out", default=str(ROOT / "data" / "hadamard4_oracle.csv"))
    args = ap.parse_args()
    cfg = json.loads(Path(args.config).read_text())
    assert cfg.get("coin", "hadamard") == "hadamard"
    coin = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    cs = [complex(*z) if isinstance(z, list) else complex(z) for z in cfg.get("coin_state", [1, 0])]
    rows = oracle_rows(int(cfg["n"]), coin, int(cfg.get("site", 0)), cs, args.steps)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "observable", "re", "im"])
        for t, name, re, im in rows:
            w.writerow([t, name, repr(float(re)), repr(float(im))])
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
