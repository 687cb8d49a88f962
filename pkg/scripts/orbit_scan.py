"""Follow the diagonal SLOCC orbit of a reference state on both branches."""
import argparse
import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from threequbit.acin import to_acin
from threequbit.slocc import ORBIT_HEADER, orbit_scan, printed_t_bound
from threequbit.statecore import preset_state


@dataclass
class OrbitConfig:
    alpha: float = math.pi
    t_max: float = 2.0
    points: int = 101
    out: Path = Path("results/orbit.csv")


def run(cfg: OrbitConfig):
    p = to_acin(preset_state("PSI_ALPHA", cfg.alpha)).params
    ts = np.linspace(printed_t_bound(p), cfg.t_max, cfg.points)
    rows = orbit_scan(p, ts, "plus") + orbit_scan(p, ts, "minus")
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ORBIT_HEADER)
        w.writerows(rows)
    cols = {k: np.array([r[i] for r in rows]) for i, k in enumerate(ORBIT_HEADER) if k != "branch"}
    for k in ("norm", "tau3", "c12", "c23", "i5"):
        print(f"{k:5s} spread {np.ptp(cols[k]):.3e}")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=math.pi)
    ap.add_argument("--t-max", type=float, default=2.0)
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--out", type=Path, default=Path("results/orbit.csv"))
    a = ap.parse_args()
    run(OrbitConfig(a.alpha, a.t_max, a.points, a.out))


if __name__ == "__main__":
    main()
