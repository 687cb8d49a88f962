"""Sweep the constant-tangle family for several angles of the reference state.

Writes one CSV per angle plus a JSON summary of the lambda4 intervals.
"""
import argparse
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from threequbit.errors import EmptyInterval
from threequbit.family import reference_target, scan


@dataclass
class SweepConfig:
    alphas: list = field(default_factory=lambda: [math.pi, math.pi / 2, math.pi / 4, 0.0])
    points: int = 200
    out_dir: Path = Path("results/family")


def run(cfg: SweepConfig) -> dict:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    summary = {}
    for alpha in cfg.alphas:
        key = f"{alpha:.6f}"
        try:
            table = scan(reference_target(alpha), cfg.points)
        except EmptyInterval as exc:
            summary[key] = {"error": str(exc)}
            continue
        with open(cfg.out_dir / f"alpha_{key}.csv", "w", newline="") as fh:
            table.write_csv(fh)
        i5 = table.column("i5")
        summary[key] = {
            "segments": table.interval.segments,
            "degenerate": table.degenerate,
            "i5_min": float(np.min(i5)),
            "i5_max": float(np.max(i5)),
        }
        print(f"alpha={key}  segments={table.interval.segments}  I5 in [{i5.min():.6f}, {i5.max():.6f}]")
    (cfg.out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    return summary


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, action="append", help="repeatable; defaults to pi, pi/2, pi/4, 0")
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--out-dir", type=Path, default=Path("results/family"))
    a = ap.parse_args()
    cfg = SweepConfig(points=a.points, out_dir=a.out_dir)
    if a.alpha:
        cfg.alphas = a.alpha
    run(cfg)


if __name__ == "__main__":
    main()
