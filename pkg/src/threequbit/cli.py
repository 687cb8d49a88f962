"""Command-line front end.

Exit codes: 0 ok, 1 monotonicity violation found by ``fuzz``, 2 bad input,
3 numeric failure, 4 empty admissible interval.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .acin import to_acin
from .errors import EmptyInterval, InputError, NumericError
from .family import TangleTarget, scan, validity_interval
from .invariants import RECORD_FIELDS, grassl, tangle_vector
from .sampling import ENSEMBLES, sample_scatter, scatter_csv
from .slocc import (
    FUZZ_HEADER,
    ORBIT_HEADER,
    SENSES,
    fuzz_monotonicity,
    identity_branch,
    orbit_scan,
    printed_t_bound,
)
from .statecore import load_state, preset_state

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NUMERIC, EXIT_EMPTY = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    preset: Optional[str] = None
    state: Optional[str] = None
    alpha: Optional[float] = None
    tau3: Optional[float] = None
    c12: Optional[float] = None
    c13: Optional[float] = None
    c23: Optional[float] = None
    points: int = 200
    trials: int = 10_000
    ensemble: str = "GHZ_CLASS"
    sense: str = "nonincreasing"
    branch: Optional[str] = None
    t_min: Optional[float] = None
    t_max: float = 2.0
    seed: int = 42
    tol: float = 1e-9
    format: Optional[str] = None
    out: Optional[str] = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        known = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        return cls(**known)


def _finite(name, v):
    if v is not None and not math.isfinite(v):
        raise InputError(f"--{name} must be finite")


def _validate(cfg: RunConfig) -> None:
    for name in ("alpha", "tau3", "c12", "c13", "c23", "t_min", "t_max", "tol"):
        _finite(name.replace("_", "-"), getattr(cfg, name))
    if not cfg.tol > 0:
        raise InputError("--tol must be positive")
    if cfg.points < 2 and cfg.command in ("family", "orbit"):
        raise InputError("--points must be >= 2")
    if cfg.points < 1:
        raise InputError("--points must be >= 1")
    if cfg.trials < 1:
        raise InputError("--trials must be >= 1")


def _state(cfg: RunConfig):
    if cfg.state and cfg.preset:
        raise InputError("give either --state or --preset, not both")
    if cfg.state:
        return load_state(cfg.state)
    if cfg.preset:
        return preset_state(cfg.preset, cfg.alpha)
    if cfg.alpha is not None:
        return preset_state("PSI_ALPHA", cfg.alpha)
    raise InputError("a state is required: --preset NAME or --state FILE")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _matrix(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def cmd_invariants(cfg: RunConfig) -> int:
    st = _state(cfg)
    red = to_acin(st)
    tv = tangle_vector(st).with_grassl(grassl(red.params))
    if cfg.format == "csv":
        header = RECORD_FIELDS + ("l0", "l1", "l2", "l3", "l4", "phi")
        row = [*tv.to_record().values(), *red.params.as_array()]
        _emit(cfg, _table(header, [[float(v) for v in row]]))
    else:
        rec = tv.to_record()
        _emit(cfg, _json({
            "tangles": {k: rec[k] for k in RECORD_FIELDS[:9]},
            "acin": red.params.to_dict(),
            "grassl": {"re": rec["re_ig"], "im": rec["im_ig"]},
        }))
    return EXIT_OK


def cmd_acin(cfg: RunConfig) -> int:
    red = to_acin(_state(cfg))
    if cfg.format == "csv":
        header = ("l0", "l1", "l2", "l3", "l4", "phi", "residual")
        _emit(cfg, _table(header, [[*map(float, red.params.as_array()), red.residual]]))
    else:
        _emit(cfg, _json({
            "params": red.params.to_dict(),
            "u1": _matrix(red.u1.entries),
            "u2": _matrix(red.u2.entries),
            "u3": _matrix(red.u3.entries),
            "residual": red.residual,
        }))
    return EXIT_OK


def _target(cfg: RunConfig) -> TangleTarget:
    given = [getattr(cfg, k) for k in ("tau3", "c12", "c13", "c23")]
    if all(v is not None for v in given):
        return TangleTarget(*given)
    if any(v is not None for v in given):
        raise InputError("a target needs all of --tau3 --c12 --c13 --c23")
    if cfg.alpha is not None or cfg.preset or cfg.state:
        return TangleTarget.of_state(_state(cfg))
    raise InputError("give --tau3 --c12 --c13 --c23, --alpha, or a state")


def cmd_family(cfg: RunConfig) -> int:
    target = _target(cfg)
    iv = validity_interval(target)
    table = scan(target, cfg.points, iv)
    sidecar = {"target": asdict(target), "tau11": target.tau11, "interval": iv.to_dict()}
    if iv.degenerate:
        pts = ", ".join(f"{a:.12g}" for a, _ in iv.segments)
        print(f"degenerate interval: isolated lambda4 point(s) {pts}", file=sys.stderr)
    if cfg.format == "json":
        rows = [dict(zip(("lambda4", "l0", "l1", "l2", "l3", "phi", "cosphi", *RECORD_FIELDS), map(float, r.as_tuple())))
                for r in table.rows]
        _emit(cfg, _json({**sidecar, "rows": rows}))
        return EXIT_OK
    _emit(cfg, table.to_csv())
    if cfg.out:
        Path(str(cfg.out) + ".interval.json").write_text(_json(sidecar))
    else:
        sys.stderr.write(_json(sidecar))
    return EXIT_OK


def cmd_scatter(cfg: RunConfig) -> int:
    ens = cfg.ensemble.upper()
    rows = sample_scatter(ens, cfg.points, cfg.seed)
    if cfg.format == "json":
        _emit(cfg, _json([dict(zip(("index", "tau3", "i5", "c12", "c13", "c23", "class"), r.as_tuple())) for r in rows]))
    else:
        _emit(cfg, scatter_csv(rows))
    return EXIT_OK


def cmd_fuzz(cfg: RunConfig) -> int:
    rows = fuzz_monotonicity(cfg.trials, cfg.seed, cfg.sense)
    _emit(cfg, _table(FUZZ_HEADER, rows))
    margins = np.array([r[5] for r in rows])
    bad = int(np.sum(margins < -cfg.tol))
    print(
        f"{cfg.trials} trials ({cfg.sense}): min margin {margins.min():.6e}, violations {bad}",
        file=sys.stderr,
    )
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_orbit(cfg: RunConfig) -> int:
    params = to_acin(_state(cfg)).params
    bound = printed_t_bound(params)
    lo = cfg.t_min if cfg.t_min is not None else bound
    if not math.isfinite(lo) or lo > cfg.t_max:
        raise InputError(f"empty t range [{lo}, {cfg.t_max}] (orbit bound {bound:.6g})")
    branch = cfg.branch or identity_branch(params)
    rows = orbit_scan(params, np.linspace(lo, cfg.t_max, cfg.points), branch)
    _emit(cfg, _table(ORBIT_HEADER, rows))
    return EXIT_OK


def cmd_conformance(cfg: RunConfig) -> int:
    from .conformance import report_records

    _emit(cfg, _json(report_records()))
    return EXIT_OK


COMMANDS = {
    "invariants": cmd_invariants,
    "acin": cmd_acin,
    "family": cmd_family,
    "scatter": cmd_scatter,
    "fuzz": cmd_fuzz,
    "orbit": cmd_orbit,
    "conformance": cmd_conformance,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output file (default stdout)")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--preset", help="GHZ, W, PRODUCT000 or PSI_ALPHA")
    state.add_argument("--state", help="JSON file with 8 [re, im] pairs")
    state.add_argument("--alpha", type=float, help="phase of PSI_ALPHA in radians")

    p = argparse.ArgumentParser(prog="threequbit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common, state], help="tangles, I5, Acin form, Grassl")
    sub.add_parser("acin", parents=[common, state], help="Acin reduction with local unitaries")

    fam = sub.add_parser("family", parents=[common, state], help="fixed-tangle family sweep")
    for name in ("tau3", "c12", "c13", "c23"):
        fam.add_argument(f"--{name}", type=float)
    fam.add_argument("--points", type=int, default=200)

    sc = sub.add_parser("scatter", parents=[common], help="I5 versus tau3 samples")
    sc.add_argument("--ensemble", default="GHZ_CLASS", type=str.upper, choices=ENSEMBLES)
    sc.add_argument("--points", type=int, default=5000)

    fz = sub.add_parser("fuzz", parents=[common], help="I5 monotonicity under random channels")
    fz.add_argument("--trials", type=int, default=10_000)
    fz.add_argument("--sense", choices=SENSES, default="nonincreasing")

    ob = sub.add_parser("orbit", parents=[common, state], help="norm-preserving diagonal orbit")
    ob.add_argument("--t-min", dest="t_min", type=float)
    ob.add_argument("--t-max", dest="t_max", type=float, default=2.0)
    ob.add_argument("--points", type=int, default=50)
    ob.add_argument("--branch", choices=("plus", "minus"))

    sub.add_parser("conformance", parents=[common], help="published claims versus recomputation")
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(ns)
    try:
        _validate(cfg)
        return COMMANDS[cfg.command](cfg)
    except EmptyInterval as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
