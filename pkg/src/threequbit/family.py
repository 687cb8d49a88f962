"""One-parameter families of Acin states with all tangles held fixed.

For a target ``(tau3, C12, C13, C23)`` with ``tau3 > 0`` the Acin amplitudes
follow from ``l4``::

    l1 = sqrt(tau3) / (2 l4)
    l2 = l4 C12 / sqrt(tau3)
    l3 = l4 C13 / sqrt(tau3)
    l0 = sqrt(1 - tau3/(4 l4^2) - l4^2 (C12^2 + C13^2)/tau3 - l4^2)

and the phase is fixed by ``C23 = 2 |l0 l4 e^{i phi} - l2 l3|``::

    cos(phi) = (l0^2 l4^2 + l2^2 l3^2 - C23^2/4) / (2 l0 l2 l3 l4)

Written in ``x = l4^2`` this is ``N(x) / (4 x tau3 C12 C13 sqrt(R(x)))`` with

    N(x) = 4 tau3^2 x - tau3^2 (tau3 + C23^2) + 4 x^2 (C12^2 C13^2 - tau3 tau11)
    R(x) = 4 x - tau3 - 4 tau11 x^2 / tau3          (= 4 x l0^2)

and ``tau11 = C12^2 + C13^2 + tau3``.

The admissible ``l4`` set is found by direct evaluation of the constraints on
a dense grid, refined by bisection. The closed-form interval expressions are
evaluated alongside and logged for comparison.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq, minimize_scalar

from .acin import AcinParams, acin_amplitudes, from_acin
from .errors import EmptyInterval, InputError, NegativeRadicand, OutOfInterval
from .invariants import GrasslValue, TangleVector, grassl, tangle_vector
from .statecore import PureState3

COS_SLACK = 1e-9
RADICAND_TOL = 1e-10
PHASE_FREE_TOL = 1e-12
EQ_TOL = 1e-9
GRID_POINTS = 10_000
BISECT_XTOL = 1e-12
POINT_MERGE = 1e-7
ENDPOINT_MARGIN = 1e-6

CSV_HEADER = (
    "lambda4", "l0", "l1", "l2", "l3", "phi", "cosphi",
    "c12", "c13", "c23", "tau3", "tau11", "tau12", "tau13", "i5", "i6", "re_ig", "im_ig",
)


@dataclass(frozen=True)
class TangleTarget:
    tau3: float
    c12: float
    c13: float
    c23: float

    def __post_init__(self):
        vals = (self.tau3, self.c12, self.c13, self.c23)
        if not all(math.isfinite(v) for v in vals):
            raise InputError("target values must be finite")
        if not self.tau3 > 0:
            raise InputError(f"tau3 must be > 0 for a fixed-tangle family, got {self.tau3}")
        for name in ("c12", "c13", "c23"):
            v = getattr(self, name)
            if not (-1e-12 <= v <= 1 + 1e-12):
                raise InputError(f"{name}={v} outside [0, 1]")
        if self.tau11 > 1 + 1e-12:
            raise InputError(
                f"c12^2 + c13^2 + tau3 = {self.tau11:.6g} exceeds 1 (local tangle of qubit 1)"
            )

    @property
    def tau11(self) -> float:
        return self.c12**2 + self.c13**2 + self.tau3

    @property
    def phase_free(self) -> bool:
        return self.c12 < PHASE_FREE_TOL or self.c13 < PHASE_FREE_TOL

    @classmethod
    def from_tangles(cls, tv: TangleVector) -> "TangleTarget":
        return cls(tau3=tv.tau3, c12=tv.c12, c13=tv.c13, c23=tv.c23)

    @classmethod
    def of_state(cls, state: PureState3) -> "TangleTarget":
        return cls.from_tangles(tangle_vector(state))


# --- the construction -------------------------------------------------------

def lambdas(target: TangleTarget, l4):
    """``(l0^2, l1, l2, l3)`` at ``l4`` (vectorized; ``l0^2`` may be negative)."""
    l4 = np.asarray(l4, dtype=float)
    st = math.sqrt(target.tau3)
    l1 = st / (2.0 * l4)
    l2 = l4 * target.c12 / st
    l3 = l4 * target.c13 / st
    l0sq = 1.0 - target.tau3 / (4.0 * l4**2) - l4**2 * (target.c12**2 + target.c13**2) / target.tau3 - l4**2
    return l0sq, l1, l2, l3


def radicand(target: TangleTarget, l4):
    x = np.asarray(l4, dtype=float) ** 2
    return 4.0 * x - target.tau3 - 4.0 * target.tau11 * x**2 / target.tau3


def _numerator_poly(target: TangleTarget) -> np.ndarray:
    t, c12, c13, c23 = target.tau3, target.c12, target.c13, target.c23
    # coefficients in increasing powers of x = l4^2
    return np.array([-t**2 * (t + c23**2), 4.0 * t**2, 4.0 * (c12**2 * c13**2 - t * target.tau11)])


def _radicand_poly(target: TangleTarget) -> np.ndarray:
    return np.array([-target.tau3, 4.0, -4.0 * target.tau11 / target.tau3])


def cosphi(target: TangleTarget, l4):
    """cos(phi) along the family; NaN where ``R <= 0`` or the phase is free."""
    l4 = np.asarray(l4, dtype=float)
    x = l4**2
    num = P.polyval(x, _numerator_poly(target))
    r = radicand(target, l4)
    with np.errstate(invalid="ignore", divide="ignore"):
        den = 4.0 * x * target.tau3 * target.c12 * target.c13 * np.sqrt(r)
        out = np.where((r > 0) & (den > 0), num / den, np.nan)
    return out if out.ndim else float(out)


def cosphi_printed(target: TangleTarget, l4: float, det_rho1: Optional[float] = None) -> float:
    """The cos(phi) expression exactly as printed in the source article.

    ``det_rho1`` defaults to ``tau11 / 4``. Kept only for the conformance
    report; it does not reproduce the phase of the family.
    """
    t, c12, c13, c23 = target.tau3, target.c12, target.c13, target.c23
    x = l4**2
    d1 = target.tau11 / 4.0 if det_rho1 is None else det_rho1
    num = 4 * x * t - 4 * t**2 * (t + c23**2) + x**2 * (c12**2 * (4 * c13**2 - 2 * t) - t * (6 * c13**2 + 5 * t))
    rad = 4 * x - 4 * d1 * x**2 / t - t
    if rad <= 0:
        return float("nan")
    return float(num / (4 * x * t * c12 * c13 * math.sqrt(rad)))


def params_at(target: TangleTarget, lambda4: float, clamp: bool = False) -> AcinParams:
    """Acin parameters of the family member at ``lambda4``.

    ``clamp=True`` is a diagnostic continuation beyond the admissible set:
    ``l0^2`` is clamped at 0 and cos(phi) to ``[-1, 1]`` instead of raising.
    The resulting amplitudes are then generally not normalized.
    """
    l4 = float(lambda4)
    if not (l4 > 0 and math.isfinite(l4)):
        raise OutOfInterval(f"lambda4={lambda4} must be positive")
    l0sq, l1, l2, l3 = (float(v) for v in lambdas(target, l4))
    if not clamp:
        for name, v in (("l1", l1), ("l2", l2), ("l3", l3), ("l4", l4)):
            if v > 1 + 1e-12:
                raise OutOfInterval(f"{name}={v:.6g} exceeds 1 at lambda4={l4:.12g}")
        if l0sq < -RADICAND_TOL:
            raise NegativeRadicand(f"l0^2={l0sq:.3e} < 0 at lambda4={l4:.12g}")
    l0 = math.sqrt(max(l0sq, 0.0))

    if target.phase_free:
        c = 1.0
        if not clamp and abs(2 * l0 * l4 - target.c23) > EQ_TOL:
            raise OutOfInterval(
                f"C23 is fixed to 2 l0 l4 = {2 * l0 * l4:.6g} here, target {target.c23:.6g}"
            )
    else:
        c = cosphi(target, l4)
        if math.isnan(c):
            if not clamp and l0 > 0:
                raise OutOfInterval(f"cos(phi) undefined at lambda4={l4:.12g}")
            c = 1.0
        elif abs(c) > 1 + COS_SLACK and not clamp:
            raise OutOfInterval(f"|cos(phi)|={abs(c):.6g} > 1 at lambda4={l4:.12g}")
    phi = math.acos(min(1.0, max(-1.0, c)))
    return AcinParams(l0, float(l1), float(l2), float(l3), l4, phi)


# --- admissible interval ----------------------------------------------------

@dataclass(frozen=True)
class ValidityInterval:
    lo: float
    hi: float
    segments: tuple[tuple[float, float], ...]
    constraints_log: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def degenerate(self) -> bool:
        return all(b - a <= 0 for a, b in self.segments)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, l4: float, tol: float = 1e-9) -> bool:
        return any(a - tol <= l4 <= b + tol for a, b in self.segments)

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "segments": [list(s) for s in self.segments],
            "degenerate": self.degenerate,
            "constraints_log": list(self.constraints_log),
        }


def _sqrt_interval(x_lo: float, x_hi: float) -> list[float]:
    return [math.sqrt(max(x_lo, 0.0)), math.sqrt(max(x_hi, 0.0))]


def _closed_radicand(t: TangleTarget):
    disc = 1.0 - t.tau11
    if disc < 0:
        return []
    s = math.sqrt(disc)
    f = t.tau3 / (2.0 * t.tau11)
    return [_sqrt_interval(f * (1 - s), f * (1 + s))]


def _closed_lambda0_printed(t: TangleTarget):
    csq = t.c12**2 + t.c13**2
    if csq <= 0 or csq > 1:
        return None
    s = math.sqrt(1.0 - csq)
    f = t.tau3 / (2.0 * csq)
    return [_sqrt_interval(f * (1 - s), f * (1 + s))]


def _closed_bounds(t: TangleTarget):
    st = math.sqrt(t.tau3)
    ups = [st / c for c in (t.c12, t.c13) if c > 0]
    return [[st / 2.0, min(ups) if ups else math.inf]]


def quartic_coefficients(t: TangleTarget) -> np.ndarray:
    """``N(x)^2 - D(x)^2`` in increasing powers of ``x = l4^2``; zeros give |cos(phi)| = 1."""
    num = _numerator_poly(t)
    den_sq = P.polymul(np.array([0.0, 0.0, 16.0 * t.tau3**2 * t.c12**2 * t.c13**2]), _radicand_poly(t))
    return P.polysub(P.polymul(num, num), den_sq)


def cosphi_boundary_roots(t: TangleTarget) -> list[float]:
    """Real roots in ``l4 in (0, 1]`` of the quartic, via companion-matrix eigenvalues."""
    coeffs = quartic_coefficients(t)
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if nz.size == 0:
        return []
    coeffs = coeffs[: nz[-1] + 1]
    roots = np.roots(coeffs[::-1])
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-7 * max(1.0, abs(r.real)) and 0 < r.real <= 1 + 1e-12:
            out.append(math.sqrt(min(r.real, 1.0)))
    return sorted(out)


def _closed_cosphi(t: TangleTarget):
    if t.phase_free:
        return None
    knots = [0.0] + cosphi_boundary_roots(t) + [1.0]
    segs = []
    for a, b in zip(knots[:-1], knots[1:]):
        if b - a <= 0:
            continue
        mid = 0.5 * (a + b)
        c = cosphi(t, mid)
        if not math.isnan(c) and abs(c) <= 1:
            segs.append([a, b])
    # isolated tangencies (double roots) where |cos(phi)| touches 1
    for r in cosphi_boundary_roots(t):
        c = cosphi(t, r)
        if not math.isnan(c) and abs(abs(c) - 1) < 1e-7 and not any(a <= r <= b for a, b in segs):
            segs.append([r, r])
    return _merge(sorted(segs))


def _merge(segs):
    out = []
    for a, b in segs:
        if out and a <= out[-1][1] + 1e-12:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return out


def c23_residual(t: TangleTarget, l4):
    """``2 l0 l4 - C23`` with ``l0`` clamped at zero (phase-free targets)."""
    l4 = np.asarray(l4, dtype=float)
    l0 = np.sqrt(np.clip(lambdas(t, l4)[0], 0.0, None))
    return 2 * l0 * l4 - t.c23


def _constraint_functions(t: TangleTarget) -> dict[str, Callable[[np.ndarray], np.ndarray]]:
    """Signed constraint functions of ``l4``; ``>= 0`` means satisfied."""

    def g_radicand(l4):
        return radicand(t, l4)

    def g_lambda0(l4):
        return lambdas(t, l4)[0]

    def g_bounds(l4):
        _, l1, l2, l3 = lambdas(t, l4)
        l4 = np.asarray(l4, dtype=float)
        return np.minimum.reduce([1 - l1, 1 - l2, 1 - l3, 1 - l4])

    def g_cosphi(l4):
        if t.phase_free:
            # phase has no effect; C23 = 2 l0 l4 is then an equality constraint
            return EQ_TOL - np.abs(c23_residual(t, l4))
        c = cosphi(t, l4)
        return np.where(np.isnan(c), -1.0, 1.0 - np.abs(np.nan_to_num(c, nan=2.0)))

    def g_normalization(l4):
        # sum of squared amplitudes equals one iff l0 is real
        return lambdas(t, l4)[0]

    return {
        "radicand": g_radicand,
        "lambda0": g_lambda0,
        "bounds": g_bounds,
        "cosphi": g_cosphi,
        "normalization": g_normalization,
    }


def _feasible_set(
    g: Callable,
    grid: np.ndarray,
    extra: Iterable[float] = (),
    touch_tol: float = EQ_TOL,
    eq: Optional[Callable] = None,
):
    """Components ``[a, b]`` of ``{g >= 0}`` from a grid scan plus refinement.

    ``eq`` is an equality constraint folded into ``g``; its sign changes
    between grid points are bracketed and solved directly.
    """
    vals = np.asarray(g(grid), dtype=float)
    ok = vals >= 0
    f = lambda z: float(g(np.array(z)))  # noqa: E731
    segs = []
    if eq is not None:
        hv = np.asarray(eq(grid), dtype=float)
        for k in np.flatnonzero(hv[:-1] * hv[1:] < 0):
            z = brentq(lambda u: float(eq(np.array(u))), grid[k], grid[k + 1], xtol=BISECT_XTOL)
            if f(z) >= -touch_tol:
                segs.append([z, z])
    n = len(grid)
    i = 0
    while i < n:
        if not ok[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and ok[j + 1]:
            j += 1
        a = grid[i] if i == 0 else brentq(f, grid[i - 1], grid[i], xtol=BISECT_XTOL)
        b = grid[j] if j == n - 1 else brentq(f, grid[j], grid[j + 1], xtol=BISECT_XTOL)
        segs.append([a, b])
        i = j + 1

    # local maxima below zero may hide a tangency or a sliver narrower than the grid
    cand = []
    peak = (vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:]) & ~ok[1:-1]
    for k in np.flatnonzero(peak) + 1:
        cand.append((grid[k - 1], grid[k + 1]))
    for r in extra:
        k = int(np.clip(np.searchsorted(grid, r), 1, n - 1))
        cand.append((grid[max(k - 1, 0)], grid[min(k + 1, n - 1)]))
    for lo, hi in cand:
        res = minimize_scalar(lambda z: -f(z), bounds=(lo, hi), method="bounded",
                              options={"xatol": BISECT_XTOL})
        z, gz = float(res.x), -float(res.fun)
        if any(a - POINT_MERGE <= z <= b + POINT_MERGE for a, b in segs):
            continue
        if gz >= 0:
            a = brentq(f, lo, z, xtol=BISECT_XTOL) if f(lo) < 0 else lo
            b = brentq(f, z, hi, xtol=BISECT_XTOL) if f(hi) < 0 else hi
            segs.append([a, b] if b - a > POINT_MERGE else [z, z])
        elif gz >= -touch_tol:
            # tangency: the constraint holds at a single point only
            segs.append([z, z])
    return _merge(sorted(segs))


def _intersect(a_segs, b_segs):
    out = []
    for a0, a1 in a_segs:
        for b0, b1 in b_segs:
            lo, hi = max(a0, b0), min(a1, b1)
            if lo <= hi + 1e-12:
                out.append([lo, max(lo, hi)])
    return _merge(sorted(out))


def _segments_agree(closed, feasible, tol=1e-6) -> bool:
    if closed is None:
        return False
    clipped = _intersect(closed, [[0.0, 1.0]])
    if len(clipped) != len(feasible):
        return False
    return all(abs(a0 - b0) < tol and abs(a1 - b1) < tol for (a0, a1), (b0, b1) in zip(clipped, feasible))


def _polynomial_critical_points(t: TangleTarget) -> list[float]:
    # tangencies of the polynomial constraints sit on roots of their
    # derivatives; equality constraints (phase free) on simple roots
    polys = [P.polyder(_radicand_poly(t))]
    if t.phase_free:
        polys.append(P.polysub(_radicand_poly(t), np.array([t.c23**2])))
    else:
        polys.append(P.polyder(quartic_coefficients(t)))
    out = []
    for poly in polys:
        nz = np.flatnonzero(np.abs(poly) > 0)
        if nz.size < 2:
            continue
        for r in np.roots(poly[: nz[-1] + 1][::-1]):
            if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real)) and 0 < r.real <= 1:
                out.append(math.sqrt(r.real))
    return out


def _polish_point(t: TangleTarget, g: Callable, seg):
    a, b = seg
    if b > a:
        return seg
    near = [c for c in _polynomial_critical_points(t) if abs(c - a) < 1e-6]
    near = [c for c in near if float(g(np.array(c))) >= -EQ_TOL]
    if not near:
        return seg
    c = min(near, key=lambda c: abs(c - a))
    return [c, c]


def validity_interval(target: TangleTarget, grid_points: int = GRID_POINTS) -> ValidityInterval:
    """Admissible ``l4`` set for the target, with a per-constraint log."""
    # l1 <= 1 forces l4 >= sqrt(tau3)/2; a geometric grid merged with the
    # uniform one resolves families that live at small l4
    start = 0.5 * math.sqrt(target.tau3) * (1 - 1e-6)
    grid = np.union1d(np.linspace(start, 1.0, grid_points + 1), np.geomspace(start, 1.0, grid_points + 1))
    funcs = _constraint_functions(target)
    seeds = [] if target.phase_free else cosphi_boundary_roots(target)
    closed = {
        "radicand": _closed_radicand(target),
        "lambda0": _closed_lambda0_printed(target),
        "bounds": _closed_bounds(target),
        "cosphi": _closed_cosphi(target),
        "normalization": _closed_radicand(target),
    }
    sources = {
        "radicand": "square root in the cos(phi) denominator",
        "lambda0": "printed zeros-of-l0 interval",
        "bounds": "l1, l2, l3 <= 1",
        "cosphi": "C23 = 2 l0 l4 (phase free)" if target.phase_free else "|cos(phi)| <= 1 (quartic roots)",
        "normalization": "l0 real (unit norm)",
    }

    eq = (lambda l4: c23_residual(target, l4)) if target.phase_free else None
    log = []
    per = {}
    for name, g in funcs.items():
        segs = _feasible_set(g, grid, extra=seeds if name == "cosphi" else (),
                             eq=eq if name == "cosphi" else None)
        per[name] = segs
        log.append(
            {
                "constraint": name,
                "source": sources[name],
                "closed_form": closed[name],
                "feasible": segs,
                "agree": _segments_agree(closed[name], segs),
            }
        )

    def combined(l4):
        return np.minimum.reduce([np.asarray(g(l4), dtype=float) for g in funcs.values()])

    # endpoints and touching points of every constraint seed the combined scan
    extra = list(seeds)
    for segs in per.values():
        for a, b in segs:
            extra += [a, b]
    total = _feasible_set(combined, grid, extra=extra, eq=eq)
    total = [_polish_point(target, combined, seg) for seg in total]
    if not total:
        raise EmptyInterval(f"no admissible lambda4 for target {target}")
    segments = tuple((float(a), float(b)) for a, b in total)
    return ValidityInterval(
        lo=segments[0][0], hi=segments[-1][1], segments=segments, constraints_log=tuple(log)
    )


# --- scans ------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyRow:
    lambda4: float
    params: AcinParams
    cosphi: float
    tangles: TangleVector

    def as_tuple(self) -> tuple:
        p, tv = self.params, self.tangles
        return (
            self.lambda4, p.l0, p.l1, p.l2, p.l3, p.phi, self.cosphi,
            tv.c12, tv.c13, tv.c23, tv.tau3, tv.tau11, tv.tau12, tv.tau13, tv.i5, tv.i6,
            tv.re_ig, tv.im_ig,
        )


@dataclass(frozen=True)
class FamilyTable:
    target: TangleTarget
    interval: ValidityInterval
    rows: tuple[FamilyRow, ...]

    @property
    def degenerate(self) -> bool:
        return self.interval.degenerate

    def column(self, name: str) -> np.ndarray:
        idx = CSV_HEADER.index(name)
        return np.array([r.as_tuple()[idx] for r in self.rows], dtype=float)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([repr(float(v)) for v in r.as_tuple()])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def family_row(target: TangleTarget, l4: float, clamp: bool = False) -> FamilyRow:
    p = params_at(target, l4, clamp=clamp)
    state = PureState3(acin_amplitudes(p))
    tv = tangle_vector(state, check=not clamp).with_grassl(grassl(p))
    c = 1.0 if target.phase_free else cosphi(target, l4)
    return FamilyRow(lambda4=float(l4), params=p, cosphi=float(c), tangles=tv)


def sample_points(interval: ValidityInterval, npoints: int) -> np.ndarray:
    """Uniform points over the positive-length part of the admissible set.

    Endpoints are pulled inward by ``1e-6 * (hi - lo)``. A degenerate set
    (isolated points only) returns those points.
    """
    if npoints < 2:
        raise InputError("npoints must be >= 2")
    segs = [(a, b) for a, b in interval.segments if b > a]
    if not segs:
        return np.array(sorted({a for a, _ in interval.segments}))
    margin = ENDPOINT_MARGIN * interval.width
    lengths = np.array([b - a for a, b in segs])
    total = lengths.sum()
    u = np.linspace(margin, total - margin, npoints)
    starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    out = np.empty(npoints)
    for n, v in enumerate(u):
        k = int(np.clip(np.searchsorted(starts, v, side="right") - 1, 0, len(segs) - 1))
        out[n] = segs[k][0] + (v - starts[k])
    return out


def scan(target: TangleTarget, npoints: int, interval: Optional[ValidityInterval] = None) -> FamilyTable:
    interval = interval or validity_interval(target)
    pts = sample_points(interval, npoints)
    rows = tuple(family_row(target, l4) for l4 in pts)
    return FamilyTable(target=target, interval=interval, rows=rows)


def diagnostic_row(target: TangleTarget, l4: float) -> FamilyRow:
    """Family member continued past the admissible set (unnormalized)."""
    return family_row(target, l4, clamp=True)


def reference_target(alpha: float) -> TangleTarget:
    """Tangles of the reference state PSI_ALPHA(alpha), computed directly."""
    from .statecore import preset_state

    return TangleTarget.of_state(preset_state("PSI_ALPHA", alpha))


__all__ = [
    "TangleTarget", "ValidityInterval", "FamilyRow", "FamilyTable", "CSV_HEADER",
    "params_at", "validity_interval", "scan", "cosphi", "cosphi_printed", "lambdas",
    "radicand", "quartic_coefficients", "cosphi_boundary_roots", "diagnostic_row",
    "family_row", "sample_points", "reference_target", "from_acin", "GrasslValue",
]
