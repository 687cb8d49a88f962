"""Random ensembles for I5 versus tau3 scatter plots and the lower envelope."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .acin import AcinParams, acin_amplitudes
from .errors import BadParam, InputError
from .invariants import concurrence, kempe_i5, local_tangle, three_tangle
from .slocc import classify
from .statecore import PureState3, make_state, random_local_unitaries

ENSEMBLES = ("HAAR", "GHZ_CLASS", "ACIN_RANDOM", "W_CLASS", "ZERO_CONCURRENCE")
GHZ_REJECT_TAU3 = 1e-6
SCATTER_HEADER = ("index", "tau3", "i5", "c12", "c13", "c23", "class")


def haar_state_from(rng: np.random.Generator) -> PureState3:
    z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return make_state(z)


def ghz_class_state(rng: np.random.Generator) -> PureState3:
    while True:
        s = haar_state_from(rng)
        if three_tangle(s) > GHZ_REJECT_TAU3:
            return s


def _octant(rng: np.random.Generator, k: int) -> np.ndarray:
    # uniform on the positive part of the unit sphere in R^k
    v = np.abs(rng.standard_normal(k))
    return v / np.linalg.norm(v)


def random_acin_params(rng: np.random.Generator) -> AcinParams:
    lam = _octant(rng, 5)
    return AcinParams(*lam, phi=float(rng.uniform(0.0, math.pi)))


def w_class_params(rng: np.random.Generator) -> AcinParams:
    l0, l1, l2, l3 = _octant(rng, 4)
    return AcinParams(l0, l1, l2, l3, 0.0, phi=float(rng.uniform(0.0, math.pi)))


def w_class_state(rng: np.random.Generator, local_unitaries: bool = False) -> PureState3:
    s = PureState3(acin_amplitudes(w_class_params(rng)))
    return random_local_unitaries(s, rng) if local_unitaries else s


def zero_concurrence_params(rng: np.random.Generator, pair: tuple[int, int]) -> AcinParams:
    """Random Acin parameters whose concurrence on ``pair`` vanishes exactly.

    ``C12 = 2 l1 l2`` and ``C13 = 2 l1 l3`` vanish with ``l2`` or ``l3``.
    ``C23 = 2 |l0 l4 e^{i phi} - l2 l3|`` vanishes for ``phi = 0`` and
    ``l0 = l2 l3 / l4``.
    """
    pair = tuple(sorted(pair))
    if pair == (1, 2):
        l0, l1, l3, l4 = _octant(rng, 4)
        return AcinParams(l0, l1, 0.0, l3, l4, float(rng.uniform(0, math.pi)))
    if pair == (1, 3):
        l0, l1, l2, l4 = _octant(rng, 4)
        return AcinParams(l0, l1, l2, 0.0, l4, float(rng.uniform(0, math.pi)))
    if pair == (2, 3):
        l1, l2, l3, l4 = _octant(rng, 4)
        l0 = l2 * l3 / l4
        lam = np.array([l0, l1, l2, l3, l4])
        lam /= np.linalg.norm(lam)
        return AcinParams(*lam, phi=0.0)
    raise BadParam(f"unknown pair {pair}")


ZERO_PAIRS = ((1, 2), (1, 3), (2, 3))


def ensemble_state(ensemble: str, seed: int) -> PureState3:
    """One sample; depends on ``ensemble`` and ``seed`` only."""
    rng = np.random.default_rng(seed)
    if ensemble == "HAAR":
        return haar_state_from(rng)
    if ensemble == "GHZ_CLASS":
        return ghz_class_state(rng)
    if ensemble == "ACIN_RANDOM":
        return PureState3(acin_amplitudes(random_acin_params(rng)))
    if ensemble == "W_CLASS":
        return w_class_state(rng)
    if ensemble == "ZERO_CONCURRENCE":
        pair = ZERO_PAIRS[int(rng.integers(3))]
        return PureState3(acin_amplitudes(zero_concurrence_params(rng, pair)))
    raise InputError(f"unknown ensemble {ensemble!r}; choose from {', '.join(ENSEMBLES)}")


@dataclass(frozen=True)
class ScatterRow:
    index: int
    tau3: float
    i5: float
    c12: float
    c13: float
    c23: float
    cls: str

    def as_tuple(self) -> tuple:
        return (self.index, self.tau3, self.i5, self.c12, self.c13, self.c23, self.cls)


def scatter_row(index: int, state: PureState3) -> ScatterRow:
    return ScatterRow(
        index=index,
        tau3=three_tangle(state),
        i5=kempe_i5(state),
        c12=concurrence(state, (1, 2)),
        c13=concurrence(state, (1, 3)),
        c23=concurrence(state, (2, 3)),
        cls=classify(state).label,
    )


def sample_scatter(ensemble: str, n: int, seed: int = 42) -> list[ScatterRow]:
    if ensemble not in ENSEMBLES:
        raise InputError(f"unknown ensemble {ensemble!r}; choose from {', '.join(ENSEMBLES)}")
    if n < 1:
        raise InputError("n must be >= 1")
    return [scatter_row(i, ensemble_state(ensemble, seed + i)) for i in range(n)]


def scatter_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCATTER_HEADER)
    for r in rows:
        t = r.as_tuple()
        w.writerow([t[0], *(repr(float(v)) for v in t[1:6]), t[6]])
    return buf.getvalue()


def scatter_arrays(rows) -> dict[str, np.ndarray]:
    return {
        k: np.array([getattr(r, k) for r in rows], dtype=float)
        for k in ("tau3", "i5", "c12", "c13", "c23")
    }


# --- lower envelope ---------------------------------------------------------

def min_curve_state(a: float) -> PureState3:
    """``a|111> + sqrt(1 - a^2)|W>``."""
    if not (0.0 <= a <= 1.0):
        raise BadParam(f"a={a} outside [0, 1]")
    b = math.sqrt(1.0 - a * a) / math.sqrt(3.0)
    amp = np.zeros(8, dtype=complex)
    amp[[1, 2, 4]] = b
    amp[7] = a
    return make_state(amp)


def min_curve(npoints: int = 2001) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(a, tau3, i5)`` sampled along the curve for ``a`` in ``[0, 1]``."""
    a = np.linspace(0.0, 1.0, npoints)
    tau = np.empty_like(a)
    i5 = np.empty_like(a)
    for k, v in enumerate(a):
        s = min_curve_state(float(v))
        tau[k] = three_tangle(s)
        i5[k] = kempe_i5(s)
    return a, tau, i5


def min_curve_lower(tau3, npoints: int = 4001) -> np.ndarray:
    """Lower of the two curve branches (``a <= 1/2`` and ``a >= 1/2``) at ``tau3``."""
    a, tau, i5 = min_curve(npoints)
    peak = int(np.argmax(tau))
    x1, y1 = tau[: peak + 1], i5[: peak + 1]
    x2, y2 = tau[peak:][::-1], i5[peak:][::-1]
    tau3 = np.asarray(tau3, dtype=float)
    return np.minimum(np.interp(tau3, x1, y1), np.interp(tau3, x2, y2))


@dataclass(frozen=True)
class EnvelopeBin:
    lo: float
    hi: float
    count: int
    min_i5: float
    curve_i5: float

    @property
    def margin(self) -> float:
        return self.min_i5 - self.curve_i5


def envelope_bins(tau3, i5, nbins: int = 50) -> list[EnvelopeBin]:
    """Per-bin minimum sampled I5 against the curve at that sample's tau3."""
    tau3 = np.asarray(tau3, dtype=float)
    i5 = np.asarray(i5, dtype=float)
    edges = np.linspace(0.0, 1.0, nbins + 1)
    idx = np.clip(np.digitize(tau3, edges) - 1, 0, nbins - 1)
    ref = min_curve_lower(tau3)
    out = []
    for b in range(nbins):
        sel = idx == b
        if not np.any(sel):
            continue
        k = np.argmin(i5[sel] - ref[sel])
        out.append(EnvelopeBin(edges[b], edges[b + 1], int(sel.sum()), float(i5[sel][k]), float(ref[sel][k])))
    return out


def local_tangles(state: PureState3) -> tuple[float, float, float]:
    return tuple(local_tangle(state, q) for q in (1, 2, 3))
