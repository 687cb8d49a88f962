"""Local-unitary invariants of three-qubit pure states.

All functions act on the raw amplitudes and never renormalize. Each invariant
therefore scales with a fixed power of the state norm: concurrences and
``i6`` as ``|psi|^2``, tangles as ``|psi|^4``, and ``I5`` as ``|psi|^6``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .acin import _param_vector, acin_amplitudes
from .errors import BadPair, BoundaryParams, NumericError
from .statecore import SIGMA_Y, PureState3, reduced_density

_YY = np.kron(SIGMA_Y, SIGMA_Y)
_YY_REAL = _YY.real  # sigma_y (x) sigma_y is real

MONOGAMY_TOL = 1e-8


def _pair(pair) -> tuple[int, int, int]:
    try:
        i, j = (int(q) for q in pair)
    except (TypeError, ValueError):
        raise BadPair(f"pair must be two qubit indices, got {pair!r}") from None
    if i == j or i not in (1, 2, 3) or j not in (1, 2, 3):
        raise BadPair(f"pair must be two distinct indices from {{1,2,3}}, got {pair!r}")
    i, j = sorted((i, j))
    k = 6 - i - j
    return i, j, k


def spin_flip_roots(state: PureState3, pair) -> np.ndarray:
    """Decreasing square roots of the eigenvalues of ``rho rho~`` for a pair.

    For a pure three-qubit state the pair's reduced matrix is
    ``sum_m |psi_m><psi_m|`` with ``psi_m`` the slice where the third qubit is
    ``m``. The nonzero roots are the singular values of the 2x2 matrix
    ``psi_m^T (sy x sy) psi_n`` (Wootters' decomposition argument), so the
    two remaining roots are exactly zero. This avoids taking square roots of
    round-off sized eigenvalues.
    """
    i, j, k = _pair(pair)
    t = np.moveaxis(state.tensor, k - 1, 0).reshape(2, 4)
    m = t @ _YY_REAL @ t.T
    mu = np.linalg.svd(m, compute_uv=False)
    return np.array([mu[0], mu[1], 0.0, 0.0])


def spin_flip_roots_from_density(rho: np.ndarray) -> np.ndarray:
    """The same roots for an arbitrary two-qubit density matrix (4x4 route)."""
    rho = np.asarray(rho, dtype=complex)
    rho_tilde = _YY @ rho.conj() @ _YY
    ev = np.linalg.eigvals(rho @ rho_tilde).real
    return np.sort(np.sqrt(np.clip(ev, 0.0, None)))[::-1]


def concurrence_from_density(rho: np.ndarray) -> float:
    mu = spin_flip_roots_from_density(rho)
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def concurrence(state: PureState3, pair) -> float:
    mu = spin_flip_roots(state, pair)
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def concurrence_of_assistance(state: PureState3, pair) -> float:
    """Uhlmann-fidelity value ``sum(mu)``; satisfies ``Ca^2 = C^2 + tau3``."""
    return float(np.sum(spin_flip_roots(state, pair)))


def hyperdeterminant(amp: np.ndarray) -> complex:
    """Cayley hyperdeterminant of the 2x2x2 amplitude tensor."""
    a = np.asarray(amp, dtype=complex).reshape(8)
    a000, a001, a010, a011, a100, a101, a110, a111 = a
    d1 = a000**2 * a111**2 + a001**2 * a110**2 + a010**2 * a101**2 + a100**2 * a011**2
    d2 = (
        a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001
    )
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return complex(d1 - 2 * d2 + 4 * d3)


def three_tangle(state: PureState3) -> float:
    return 4.0 * abs(hyperdeterminant(state.amp))


def local_tangle(state: PureState3, qubit: int) -> float:
    """``4 det rho_i``, clamped at zero against round-off."""
    rho = reduced_density(state, {qubit})
    val = 4.0 * float((rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real)
    return val if val > 1e-12 else max(val, 0.0)


def kempe_i5(state: PureState3, pair=(1, 2)) -> float:
    """``3 tr[(rho_i x rho_j) rho_ij] - tr rho_i^3 - tr rho_j^3``."""
    i, j, _ = _pair(pair)
    ri = reduced_density(state, {i})
    rj = reduced_density(state, {j})
    rij = reduced_density(state, {i, j})
    val = (
        3.0 * np.trace(np.kron(ri, rj) @ rij)
        - np.trace(ri @ ri @ ri)
        - np.trace(rj @ rj @ rj)
    )
    return float(val.real)


def modulus_i6(state: PureState3) -> float:
    return state.norm2


def i5_closed_c12_zero(tau_local: float, norm2: float = 1.0) -> float:
    """I5 when one pair concurrence vanishes.

    ``tau_local`` is the local tangle of the qubit outside the pair with zero
    concurrence (qubit 3 when ``C12 = 0``).
    """
    return norm2 * (norm2**2 - 0.75 * tau_local)


def i5_closed_w_class(c12: float, c13: float, c23: float, norm2: float = 1.0) -> float:
    """I5 on states with vanishing three-tangle."""
    return norm2**3 - 0.75 * norm2 * (c12**2 + c13**2 + c23**2) + 0.75 * c12 * c13 * c23


@dataclass(frozen=True)
class GrasslValue:
    re: float
    im: float


def grassl(params) -> GrasslValue:
    """Grassl invariant evaluated on Acin parameters.

    Accepts :class:`AcinParams` or any real 6-vector, so ``phi`` outside
    ``[0, pi]`` can be probed.
    """
    l0, l1, l2, l3, l4, phi = _param_vector(params)
    tau3 = 4.0 * l1**2 * l4**2
    g = 1.0 - 2.0 * (l0**2 + l1**2)
    p = l0 * l2 * l3
    re = tau3 * l1**2 * (math.cos(2 * phi) * p**2 + (math.cos(phi) * p * l4 + 0.25 * l4**2 * g) * g)
    im = -tau3 * math.sin(phi) * p * (2.0 * math.cos(phi) * p + l4 * g)
    return GrasslValue(float(re), float(im))


TANGLE_FIELDS = ("c12", "c13", "c23", "tau3", "tau11", "tau12", "tau13", "i5", "i6")
RECORD_FIELDS = TANGLE_FIELDS + ("re_ig", "im_ig")


@dataclass(frozen=True)
class TangleVector:
    c12: float
    c13: float
    c23: float
    tau3: float
    tau11: float
    tau12: float
    tau13: float
    i5: float
    i6: float
    re_ig: Optional[float] = None
    im_ig: Optional[float] = None

    def invariants6(self) -> np.ndarray:
        """The six-vector ``(tau11, tau12, tau13, tau3, I5, I6)``."""
        return np.array([self.tau11, self.tau12, self.tau13, self.tau3, self.i5, self.i6])

    def with_grassl(self, g: GrasslValue) -> "TangleVector":
        d = asdict(self)
        d.update(re_ig=g.re, im_ig=g.im)
        return TangleVector(**d)

    def to_record(self) -> dict[str, float]:
        """Flat record in the fixed field order; Grassl only if present."""
        fields = RECORD_FIELDS if self.re_ig is not None else TANGLE_FIELDS
        return {f: getattr(self, f) for f in fields}

    def monogamy_defects(self) -> tuple[float, float, float]:
        return (
            self.tau11 - (self.c12**2 + self.c13**2 + self.tau3),
            self.tau12 - (self.c12**2 + self.c23**2 + self.tau3),
            self.tau13 - (self.c13**2 + self.c23**2 + self.tau3),
        )


def tangle_vector(state: PureState3, check: bool = True) -> TangleVector:
    tv = TangleVector(
        c12=concurrence(state, (1, 2)),
        c13=concurrence(state, (1, 3)),
        c23=concurrence(state, (2, 3)),
        tau3=three_tangle(state),
        tau11=local_tangle(state, 1),
        tau12=local_tangle(state, 2),
        tau13=local_tangle(state, 3),
        i5=kempe_i5(state, (1, 2)),
        i6=modulus_i6(state),
    )
    if check:
        scale = max(1.0, state.norm2**2)
        worst = max(abs(d) for d in tv.monogamy_defects())
        if worst > MONOGAMY_TOL * scale:
            raise NumericError(f"monogamy equality violated by {worst:.2e}")
    return tv


def invariant_six(x) -> np.ndarray:
    """``(tau11, tau12, tau13, tau3, I5, I6)`` of the raw Acin form at ``x``."""
    s = PureState3(acin_amplitudes(x))
    return np.array(
        [
            local_tangle(s, 1),
            local_tangle(s, 2),
            local_tangle(s, 3),
            three_tangle(s),
            kempe_i5(s),
            modulus_i6(s),
        ]
    )


def _raw_six(x) -> np.ndarray:
    # unclamped variant for differencing
    s = PureState3(acin_amplitudes(x))
    taus = []
    for q in (1, 2, 3):
        r = reduced_density(s, {q})
        taus.append(4.0 * float((r[0, 0] * r[1, 1] - r[0, 1] * r[1, 0]).real))
    return np.array([*taus, three_tangle(s), kempe_i5(s), modulus_i6(s)])


FD_STEP = 1e-6
RANK_RTOL = 1e-6


def invariant_jacobian(params, step: float = FD_STEP, rtol: float = RANK_RTOL, check: bool = True):
    """Central-difference Jacobian of the six invariants in ``(l0..l4, phi)``.

    Returns ``(jac, rank, singular_values)``. ``rank`` counts singular values
    above ``rtol * max``. With ``check`` the point must be interior
    (all ``l > 1e-6``, ``phi`` in ``(0.01, pi - 0.01)``); boundary probes pass
    ``check=False``.
    """
    x0 = _param_vector(params).astype(float)
    if check and (np.any(x0[:5] <= 1e-6) or not (0.01 < x0[5] < math.pi - 0.01)):
        raise BoundaryParams(f"parameters not interior: {x0}")
    jac = np.empty((6, 6))
    for col in range(6):
        e = np.zeros(6)
        e[col] = step
        jac[:, col] = (_raw_six(x0 + e) - _raw_six(x0 - e)) / (2 * step)
    sv = np.linalg.svd(jac, compute_uv=False)
    rank = int(np.sum(sv > rtol * sv[0])) if sv[0] > 0 else 0
    return jac, rank, sv

