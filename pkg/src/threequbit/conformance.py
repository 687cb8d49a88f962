"""Recompute the published numeric claims and compare with direct evaluation.

Each entry is ``{claim, paper_value, computed_value, agree}``. The report
never raises on disagreement; it only records.
"""
from __future__ import annotations

import math

import numpy as np

from .acin import to_acin
from .family import (
    TangleTarget,
    _closed_lambda0_printed,
    _closed_radicand,
    cosphi,
    cosphi_printed,
    validity_interval,
)
from .invariants import (
    concurrence,
    concurrence_of_assistance,
    kempe_i5,
    three_tangle,
)
from .sampling import sample_scatter, scatter_arrays
from .slocc import identity_branch, orbit_scan, printed_t_bound
from .statecore import haar_random_state, make_state, preset_state

AGREE_TOL = 1e-9
ALPHAS = (math.pi / 4, math.pi / 2, math.pi)


def _entry(claim, paper_value, computed_value, agree) -> dict:
    return {"claim": claim, "paper_value": paper_value, "computed_value": computed_value, "agree": bool(agree)}


def _close(a, b, tol=AGREE_TOL) -> bool:
    return abs(a - b) <= tol


def _reference_claims() -> list[dict]:
    out = []
    psi = preset_state("PSI_ALPHA", math.pi / 3)
    tau = three_tangle(psi)
    out.append(_entry("tau3 of PSI_ALPHA", 8 / 25, tau, _close(tau, 8 / 25)))
    for pair in ((1, 2), (1, 3)):
        c = concurrence(psi, pair)
        out.append(_entry(f"C{pair[0]}{pair[1]} of PSI_ALPHA", 2 / 5, c, _close(c, 2 / 5)))
    for a in ALPHAS:
        c23 = concurrence(preset_state("PSI_ALPHA", a), (2, 3))
        printed = math.sqrt(8) * (1 - math.cos(a)) / 5
        root = math.sqrt(8) * math.sqrt(1 - math.cos(a)) / 5
        out.append(_entry(f"C23 of PSI_ALPHA at alpha={a:.6f}: sqrt(8)(1-cos a)/5", printed, c23, _close(c23, printed)))
        out.append(_entry(f"C23 of PSI_ALPHA at alpha={a:.6f}: sqrt(8)sqrt(1-cos a)/5", root, c23, _close(c23, root)))
    return out


def _kempe_claims() -> list[dict]:
    out = []
    for name, val in (("GHZ", 1 / 4), ("W", 2 / 9), ("PRODUCT000", 1.0)):
        i5 = kempe_i5(preset_state(name))
        out.append(_entry(f"I5 of {name}", val, i5, _close(i5, val)))
    haar = min(kempe_i5(haar_random_state(s)) for s in range(2000))
    out.append(_entry("I5 >= 2/9 (minimum over 2000 Haar states)", 2 / 9, haar, haar >= 2 / 9 - AGREE_TOL))
    zero = scatter_arrays(sample_scatter("ZERO_CONCURRENCE", 2000, 42))["i5"].min()
    out.append(_entry("GHZ bound: I5 >= 1/4 with a vanishing concurrence (2000 samples)", 1 / 4, float(zero),
                      zero >= 1 / 4 - 1e-6))
    return out


def _assistance_claims() -> list[dict]:
    printed_err = 0.0
    squared_err = 0.0
    for s in range(200):
        st = haar_random_state(s)
        tau = three_tangle(st)
        for pair in ((1, 2), (1, 3), (2, 3)):
            ca = concurrence_of_assistance(st, pair)
            c = concurrence(st, pair)
            printed_err = max(printed_err, abs(ca - math.sqrt(c + tau)))
            squared_err = max(squared_err, abs(ca - math.sqrt(c * c + tau)))
    return [
        _entry("assistance E_a = sqrt(C + tau3): max deviation over 200 Haar states", 0.0, printed_err,
               printed_err < 1e-8),
        _entry("assistance E_a = sqrt(C^2 + tau3): max deviation over 200 Haar states", 0.0, squared_err,
               squared_err < 1e-8),
    ]


def _family_claims() -> list[dict]:
    out = []
    target = TangleTarget.of_state(preset_state("PSI_ALPHA", math.pi))
    l4 = 1 / math.sqrt(5)
    exact = -1.0  # the reference state itself has phi = pi
    out.append(_entry("cos(phi) printed formula at the reference point (alpha=pi)", cosphi_printed(target, l4),
                      exact, _close(cosphi_printed(target, l4), exact, 1e-6)))
    out.append(_entry("cos(phi) derived formula at the reference point (alpha=pi)", exact,
                      float(cosphi(target, l4)), _close(float(cosphi(target, l4)), exact, 1e-6)))

    # lambda4 interval from the square root: printed branch for tau11 >= 1/2
    hi_target = TangleTarget(tau3=0.5, c12=0.5, c13=0.3, c23=0.2)
    t11 = hi_target.tau11
    r = math.sqrt(1 - t11)
    f = hi_target.tau3 / (2 * t11)
    printed = [f * (1 + r), f * (1 - r)]
    feas = validity_interval(hi_target).constraints_log[0]["feasible"][0]
    computed = [feas[0] ** 2, feas[1] ** 2]
    out.append(_entry(f"lambda4^2 interval from the square root, tau11={t11:.2f} >= 1/2 (printed endpoint order)",
                      printed, computed, printed[0] <= printed[1]
                      and all(_close(a, b, 1e-6) for a, b in zip(printed, computed))))
    closed = _closed_radicand(hi_target)[0]
    out.append(_entry("same interval with ascending endpoints", [c * c for c in closed], computed,
                      all(_close(a * a, b, 1e-6) for a, b in zip(closed, computed))))

    # zeros of lambda0
    for t in (target, hi_target):
        log = {e["constraint"]: e for e in validity_interval(t).constraints_log}
        pr = _closed_lambda0_printed(t)
        got = log["normalization"]["feasible"]
        out.append(_entry(f"lambda4 interval from zeros of lambda0, tau11={t.tau11:.2f}",
                          pr, got, log["lambda0"]["agree"]))
    return out


def _orbit_claims() -> list[dict]:
    out = []
    p = to_acin(preset_state("PSI_ALPHA", math.pi)).params
    bound = printed_t_bound(p)
    branch = identity_branch(p)
    below = 0.9 * bound
    ok_below = True
    try:
        orbit_scan(p, [below], branch)
    except ArithmeticError:
        ok_below = False
    out.append(_entry("|t| <= fourth-root bound admits real s (checked at 0.9 * bound)", True, ok_below, ok_below))
    rows = orbit_scan(p, np.linspace(bound, 2.0, 9), "plus")
    c23 = [r[7] for r in rows]
    spread = max(c23) - min(c23)
    out.append(_entry("C23 constant along the diagonal orbit of the reference state (spread)", 0.0, spread,
                      spread < 1e-9))
    tau = [r[4] for r in rows]
    c12 = [r[5] for r in rows]
    spread2 = max(max(tau) - min(tau), max(c12) - min(c12))
    out.append(_entry("tau3 and C12 constant along the diagonal orbit (spread)", 0.0, spread2, spread2 < 1e-9))
    return out


def _min_curve_claims() -> list[dict]:
    w = kempe_i5(make_state([0, 1, 1, 0, 1, 0, 0, 0]))
    return [_entry("minimum-curve start a=0 is the W state with I5 = 2/9", 2 / 9, w, _close(w, 2 / 9))]


def conformance_report() -> list[dict]:
    return (
        _reference_claims()
        + _kempe_claims()
        + _assistance_claims()
        + _family_claims()
        + _orbit_claims()
        + _min_curve_claims()
    )


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def report_records() -> list[dict]:
    return [{k: _jsonable(v) for k, v in e.items()} for e in conformance_report()]
