"""Acin canonical form of three-qubit pure states.

The form is

    l1|000> + l0 e^{i phi}|100> + l2|110> + l3|101> + l4|111>

with all ``l >= 0`` and ``phi`` in ``[0, pi]``; every pure state reaches it by
local unitaries.

Reduction: the amplitude tensor is split into the two slices ``T0, T1``
along qubit 1. A qubit-1 unitary whose first row is ``(alpha, beta)`` makes
the new slice ``alpha T0 + beta T1``, and a root of
``det(alpha T0 + beta T1) = 0`` makes that slice rank one. An SVD then rotates
qubits 2 and 3 so the rank-one slice becomes ``l1|00>``. Diagonal phases fix
the signs and leave a single phase on ``|100>``. The quadratic has two roots
and both are tried. Only one of them generically lands ``phi`` in
``[0, pi]``, and that one is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import DegenerateState, InputError
from .statecore import LocalOp, PureState3

PARAM_NAMES = ("l0", "l1", "l2", "l3", "l4", "phi")

RESIDUAL_TOL = 1e-9
_COEF_TOL = 1e-14
_AMP_TOL = 1e-12
_PHI_TOL = 1e-10


@dataclass(frozen=True)
class AcinParams:
    l0: float
    l1: float
    l2: float
    l3: float
    l4: float
    phi: float = 0.0

    def __post_init__(self):
        vals = self.as_array()
        if not np.all(np.isfinite(vals)):
            raise InputError("Acin parameters must be finite")
        if np.any(vals[:5] < -1e-12):
            raise InputError(f"Acin amplitudes must be nonnegative: {vals[:5]}")
        if not (-1e-12 <= self.phi <= math.pi + 1e-12):
            raise InputError(f"phi={self.phi} outside [0, pi]")

    def as_array(self) -> np.ndarray:
        return np.array([self.l0, self.l1, self.l2, self.l3, self.l4, self.phi], dtype=float)

    @property
    def lambdas(self) -> np.ndarray:
        return self.as_array()[:5]

    @property
    def norm2(self) -> float:
        return float(np.sum(self.lambdas**2))

    def to_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d) -> "AcinParams":
        return cls(*(float(d[k]) for k in PARAM_NAMES))


def _param_vector(params) -> np.ndarray:
    if isinstance(params, AcinParams):
        return params.as_array()
    x = np.asarray(params, dtype=float).reshape(-1)
    if x.shape != (6,):
        raise InputError("expected six parameters (l0, l1, l2, l3, l4, phi)")
    return x


def acin_amplitudes(params) -> np.ndarray:
    """Raw amplitude vector of the Acin form; accepts any real 6-vector."""
    l0, l1, l2, l3, l4, phi = _param_vector(params)
    amp = np.zeros(8, dtype=complex)
    amp[0] = l1
    amp[4] = l0 * np.exp(1j * phi)
    amp[6] = l2
    amp[5] = l3
    amp[7] = l4
    return amp


def from_acin(params) -> PureState3:
    return PureState3(acin_amplitudes(params))


def tau3_closed(params) -> float:
    x = _param_vector(params)
    return float(4.0 * x[1] ** 2 * x[4] ** 2)


@dataclass(frozen=True)
class AcinReduction:
    params: AcinParams
    u1: LocalOp
    u2: LocalOp
    u3: LocalOp
    residual: float


def _pencil_roots(t0: np.ndarray, t1: np.ndarray) -> list[tuple[complex, complex]]:
    """Projective roots ``(alpha, beta)`` of ``det(alpha T0 + beta T1) = 0``."""
    a = np.linalg.det(t0)
    c = np.linalg.det(t1)
    b = np.linalg.det(t0 + t1) - a - c
    scale = max(abs(a), abs(b), abs(c))
    if scale < _COEF_TOL:
        return []  # identically zero pencil
    disc = b * b - 4 * a * c
    double = abs(disc) <= 1e-15 * max(abs(b) ** 2, abs(4 * a * c), _COEF_TOL)
    # solve in whichever affine chart has the larger leading coefficient
    if abs(c) >= abs(a):
        if abs(c) < _COEF_TOL:
            return [(1.0, 0.0), (0.0, 1.0)]
        zs = [-b / (2 * c)] * 2 if double else list(np.roots([c, b, a]))
        return [(1.0, z) for z in zs]
    ws = [-b / (2 * a)] * 2 if double else list(np.roots([a, b, c]))
    return [(w, 1.0) for w in ws]


def _first_qubit_unitary(alpha: complex, beta: complex) -> np.ndarray:
    n = math.hypot(abs(alpha), abs(beta))
    alpha, beta = alpha / n, beta / n
    return np.array([[alpha, beta], [-np.conj(beta), np.conj(alpha)]], dtype=complex)


def _svd_rotation(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unitaries ``(u2, u3)`` with ``u2 @ m @ u3.T`` diagonal, largest first."""
    w, _, vh = np.linalg.svd(m)
    return w.conj().T, vh.conj()


def _wrap(phi: float) -> float:
    return (phi + math.pi) % (2 * math.pi) - math.pi


def _canonical_candidate(t: np.ndarray, u1: np.ndarray):
    s = np.einsum("ia,ajk->ijk", u1, t)
    slice0 = s[0] if np.linalg.norm(s[0]) > _AMP_TOL else s[1]
    u2, u3 = _svd_rotation(slice0)
    s = np.einsum("ja,kb,iab->ijk", u2, u3, s)

    # phases: a_ijk picks up p1[i] + p2[j] + p3[k]; qubit-1 phases absorb the
    # global phase so |000> is real, then 101, 110, 111 are made real
    arg = np.angle(s)
    mag = np.abs(s)
    p1 = np.zeros(2)
    p2 = np.zeros(2)
    p3 = np.zeros(2)
    p1[0] = -arg[0, 0, 0] if mag[0, 0, 0] > _AMP_TOL else 0.0

    # unknowns (x1, y1, z1) = (p1[1], p2[1], p3[1]); amplitude 100 gains x1,
    # 101 gains x1+z1, 110 gains x1+y1, 111 gains x1+y1+z1.  Any three of
    # these rows are independent.
    coeffs = {
        (1, 0, 1): (1.0, 0.0, 1.0),
        (1, 1, 0): (1.0, 1.0, 0.0),
        (1, 1, 1): (1.0, 1.0, 1.0),
        (1, 0, 0): (1.0, 0.0, 0.0),
    }
    live = [k for k in coeffs if mag[k] > _AMP_TOL]
    generic = len(live) == 4
    # generic: 101, 110, 111 made real and phi is whatever remains on 100;
    # otherwise a free phase exists and every live amplitude is made real
    use = live[:3] if generic else live
    if use:
        a_mat = np.array([coeffs[k] for k in use])
        rhs = -np.array([arg[k] for k in use])
        p1[1], p2[1], p3[1] = np.linalg.lstsq(a_mat, rhs, rcond=None)[0]

    d1 = np.diag(np.exp(1j * p1))
    d2 = np.diag(np.exp(1j * p2))
    d3 = np.diag(np.exp(1j * p3))
    s = np.einsum("ia,jb,kc,abc->ijk", d1, d2, d3, s)

    phi = _wrap(float(np.angle(s[1, 0, 0]))) if generic else 0.0
    if abs(phi + math.pi) < _PHI_TOL:
        phi = math.pi
    lams = (abs(s[1, 0, 0]), abs(s[0, 0, 0]), abs(s[1, 1, 0]), abs(s[1, 0, 1]), abs(s[1, 1, 1]))
    return lams, phi, d1 @ u1, d2 @ u2, d3 @ u3


def _residual(state: PureState3, params_vec: np.ndarray, u1, u2, u3) -> float:
    image = np.einsum("ia,jb,kc,abc->ijk", u1, u2, u3, state.tensor).reshape(8)
    return float(np.abs(image - acin_amplitudes(params_vec)).max())


def to_acin(state: PureState3) -> AcinReduction:
    """Reduce a state to Acin form with the witnessing local unitaries.

    Among admissible candidates (``phi`` in ``[0, pi]``) the one with the
    larger ``l1`` wins, then the lexicographically larger ``(l1, l4)``.
    """
    t = state.tensor
    t0, t1 = t[0], t[1]
    roots = _pencil_roots(t0, t1)
    if roots:
        unitaries = [_first_qubit_unitary(a, b) for a, b in roots]
    else:
        # every combination of the slices has rank <= 1: try the basis rows
        # and the dominant qubit-1 Schmidt direction
        w, _, _ = np.linalg.svd(t.reshape(2, 4))
        top = w[:, 0].conj()
        unitaries = [
            _first_qubit_unitary(top[0], top[1]),
            _first_qubit_unitary(1.0, 0.0),
            _first_qubit_unitary(0.0, 1.0),
        ]

    best = None
    best_key = None
    for u1 in unitaries:
        lams, phi, v1, v2, v3 = _canonical_candidate(t, u1)
        in_range = -_PHI_TOL <= phi <= math.pi + _PHI_TOL
        phi_c = min(max(phi, 0.0), math.pi)
        vec = np.array([*lams, phi_c])
        res = _residual(state, vec, v1, v2, v3)
        # round the tie-break key so roundoff between equal candidates does
        # not decide; the earlier candidate then wins
        key = (in_range, round(lams[1], 11), round(lams[4], 11))
        if best_key is None or key > best_key:
            best_key = key
            best = (vec, v1, v2, v3, res)

    vec, v1, v2, v3, res = best
    if not best_key[0]:
        raise DegenerateState("no reduction candidate landed phi in [0, pi]")
    if res > RESIDUAL_TOL:
        raise DegenerateState(f"Acin reduction residual {res:.2e} exceeds {RESIDUAL_TOL}")
    params = AcinParams(*(float(v) for v in vec))
    return AcinReduction(
        params=params,
        u1=LocalOp(v1, "unitary"),
        u2=LocalOp(v2, "unitary"),
        u3=LocalOp(v3, "unitary"),
        residual=res,
    )
