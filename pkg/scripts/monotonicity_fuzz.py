"""Random two-outcome local channels: does the average I5 go down or up?"""
import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from threequbit.slocc import FUZZ_HEADER, SENSES, fuzz_monotonicity


@dataclass
class FuzzConfig:
    trials: int = 10_000
    seed: int = 42
    sense: str = "nonincreasing"
    out: Path = Path("results/fuzz.csv")


def run(cfg: FuzzConfig):
    rows = fuzz_monotonicity(cfg.trials, cfg.seed, sense=cfg.sense)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(FUZZ_HEADER)
        w.writerows(rows)
    margins = np.array([r[5] for r in rows])
    for cls in sorted({r[2] for r in rows}):
        m = np.array([r[5] for r in rows if r[2] == cls])
        print(f"{cls:20s} n={len(m):5d}  min margin {m.min():+.3e}  median {np.median(m):+.3e}")
    print(f"sense={cfg.sense}: {np.sum(margins < -1e-9)} of {len(rows)} trials below -1e-9")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--sense", choices=SENSES, default="nonincreasing")
    ap.add_argument("--out", type=Path, default=Path("results/fuzz.csv"))
    a = ap.parse_args()
    run(FuzzConfig(a.trials, a.seed, a.sense, a.out))


if __name__ == "__main__":
    main()
