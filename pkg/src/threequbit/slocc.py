"""Local SL(2, C) machinery: the diagonal orbit, random Kraus channels and classes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .acin import AcinParams, from_acin
from .errors import BadParam, BadQubitSet, NegativeDiscriminant, OutOfBound, SingularOp
from .invariants import concurrence, kempe_i5, local_tangle, three_tangle
from .statecore import (
    IDENTITY,
    PureState3,
    _as_matrix,
    apply_local_ops,
    random_unitary,
)

DISC_TOL = 1e-12
COMPLETENESS_TOL = 1e-10
CLASS_EPS = 1e-9


# --- diagonal orbit ---------------------------------------------------------

def _orbit_terms(params: AcinParams):
    l0, l1, l2, l3, l4, _ = params.as_array()
    a = l2**2 + l4**2
    return l0, l1, l3, a


def printed_t_bound(params: AcinParams) -> float:
    """The fourth-root expression that bounds ``|t|`` along the orbit.

    Real ``|s|`` exists iff ``|t|`` is at least this value (the discriminant
    is increasing in ``|t|^4``). ``inf`` if the denominator vanishes.
    """
    l0, l1, l3, a = _orbit_terms(params)
    den = 1.0 - 4.0 * l1**2 * a
    num = 4.0 * a * (l0**2 + l3**2)
    if den <= 0:
        return math.inf if num > 0 else 0.0
    return (num / den) ** 0.25


def orbit_discriminant(params: AcinParams, t: float) -> float:
    l0, l1, l3, a = _orbit_terms(params)
    t4 = abs(t) ** 4
    return t4 * (1.0 - 4.0 * l1**2 * a) - 4.0 * a * (l0**2 + l3**2)


def diagonal_s_of_t(params: AcinParams, t: float, branch: str = "plus") -> float:
    """``|s|^2`` keeping ``diag(t, 1/t) (x) diag(s, 1/s) (x) 1`` norm preserving."""
    if branch not in ("plus", "minus"):
        raise BadParam(f"branch must be 'plus' or 'minus', got {branch!r}")
    if not (math.isfinite(t) and t != 0):
        raise BadParam(f"t must be finite and nonzero, got {t}")
    bound = printed_t_bound(params)
    if abs(t) < bound * (1 - 1e-12):
        raise OutOfBound(f"|t|={abs(t):.12g} below the orbit bound {bound:.12g}")
    disc = orbit_discriminant(params, t)
    if disc < -DISC_TOL:
        raise NegativeDiscriminant(f"discriminant {disc:.3e} < 0 at t={t}")
    l0, l1, l3, _ = _orbit_terms(params)
    t2 = t * t
    root = math.sqrt(max(disc, 0.0))
    num = t2 + root if branch == "plus" else t2 - root
    return num / (2.0 * (l1**2 * t2 * t2 + l0**2 + l3**2))


def identity_branch(params: AcinParams) -> str:
    """The branch that gives ``|s|^2 = 1`` at ``t = 1``."""
    _, _, _, a = _orbit_terms(params)
    return "plus" if a <= 0.5 else "minus"


def diagonal_ops(t: float, s2: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s = math.sqrt(s2)
    return np.diag([t, 1.0 / t]).astype(complex), np.diag([s, 1.0 / s]).astype(complex), IDENTITY


def apply_diagonal(params: AcinParams, t: float, branch: str = "plus") -> PureState3:
    """The orbit image of ``from_acin(params)`` (no renormalization)."""
    s2 = diagonal_s_of_t(params, t, branch)
    return apply_local_ops(from_acin(params), *diagonal_ops(t, s2), renormalize=False)


ORBIT_HEADER = ("t", "branch", "s2", "norm", "tau3", "c12", "c13", "c23", "i5")


def orbit_scan(params: AcinParams, ts: Sequence[float], branch: str = "plus") -> list[tuple]:
    rows = []
    for t in ts:
        s2 = diagonal_s_of_t(params, float(t), branch)
        st = apply_local_ops(from_acin(params), *diagonal_ops(float(t), s2), renormalize=False)
        rows.append(
            (
                float(t), branch, s2, st.norm, three_tangle(st),
                concurrence(st, (1, 2)), concurrence(st, (1, 3)), concurrence(st, (2, 3)),
                kempe_i5(st),
            )
        )
    return rows


# --- general SLOCC action ---------------------------------------------------

def apply_slocc(state: PureState3, op1, op2, op3) -> tuple[PureState3, float]:
    """Apply invertible local operators and renormalize; returns ``(state, prenorm)``."""
    mats = [_as_matrix(o) for o in (op1, op2, op3)]
    for i, m in enumerate(mats, start=1):
        if abs(np.linalg.det(m)) <= 1e-14:
            raise SingularOp(f"operator on qubit {i} is not invertible")
    out = apply_local_ops(state, *mats, renormalize=True)
    return out, out.prenorm


def upper_triangular_sl2(s: float, r: float) -> np.ndarray:
    if s == 0:
        raise BadParam("s must be nonzero")
    return np.array([[s, r], [0.0, 1.0 / s]], dtype=complex)


# --- Kraus channels ---------------------------------------------------------

@dataclass(frozen=True)
class KrausChannel:
    """Up to two Kraus branches; each branch holds one 2x2 operator per acted qubit."""

    qubits: tuple[int, ...]
    kraus: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        if not (1 <= len(self.qubits) <= 2) or len(set(self.qubits)) != len(self.qubits):
            raise BadQubitSet(f"channel acts on 1 or 2 distinct qubits, got {self.qubits}")
        if any(q not in (1, 2, 3) for q in self.qubits):
            raise BadQubitSet(f"qubit indices must be in 1..3, got {self.qubits}")
        if not (1 <= len(self.kraus) <= 2):
            raise BadParam("a channel has one or two Kraus operators")
        for branch in self.kraus:
            if len(branch) != len(self.qubits):
                raise BadParam("each Kraus branch needs one operator per acted qubit")

    def branch_operators(self, k: int) -> list[np.ndarray]:
        ops = [IDENTITY, IDENTITY, IDENTITY]
        for q, m in zip(self.qubits, self.kraus[k]):
            ops[q - 1] = m
        return ops

    def completeness_defect(self) -> float:
        total = np.zeros((2 ** len(self.qubits),) * 2, dtype=complex)
        for branch in self.kraus:
            m = branch[0]
            for extra in branch[1:]:
                m = np.kron(m, extra)
            total += m.conj().T @ m
        return float(np.abs(total - np.eye(total.shape[0])).max())


def _psd_sqrt(h: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def random_two_kraus_channel(seed: int, nqubits: int = 1, unitary: bool = False) -> KrausChannel:
    """Random channel ``{A1, A2}`` with ``A2 = V sqrt(1 - A1^dag A1)``.

    With two qubits the second one gets an independent random unitary per
    branch, chosen on the outcome of the first (classical feed-forward).
    ``unitary=True`` forces ``A1`` unitary, leaving a single branch.
    """
    if nqubits not in (1, 2):
        raise BadParam(f"nqubits must be 1 or 2, got {nqubits}")
    rng = np.random.default_rng(seed)
    qubits = tuple(int(q) for q in sorted(rng.choice([1, 2, 3], size=nqubits, replace=False)))
    if unitary:
        a1 = random_unitary(rng)
    else:
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        a1 = g / np.linalg.norm(g, 2) * rng.uniform(0.05, 1.0)
    rest = np.eye(2) - a1.conj().T @ a1
    firsts = [a1]
    if np.abs(rest).max() > 1e-12:
        firsts.append(random_unitary(rng) @ _psd_sqrt(rest))
    kraus = []
    for a in firsts:
        branch = (a,) if nqubits == 1 else (a, random_unitary(rng))
        kraus.append(branch)
    return KrausChannel(qubits=qubits, kraus=tuple(kraus))


@dataclass(frozen=True)
class TrialResult:
    i5_before: float
    i5_after_avg: float
    margin: float
    probabilities: tuple[float, ...]


SENSES = ("nonincreasing", "nondecreasing")


def monotonicity_trial(state: PureState3, channel: KrausChannel, sense: str = "nonincreasing") -> TrialResult:
    """Compare ``I5`` before and after a channel (branch-averaged).

    ``sense="nonincreasing"`` reports ``I5(psi) - sum_k p_k I5(psi_k)``;
    ``"nondecreasing"`` reports the negative. A negative margin is a violation
    of the chosen sense. ``p_k = <psi|A_k^dag A_k|psi>``.
    """
    if sense not in SENSES:
        raise BadParam(f"sense must be one of {SENSES}")
    before = kempe_i5(state)
    avg = 0.0
    probs = []
    for k in range(len(channel.kraus)):
        branch = apply_local_ops(state, *channel.branch_operators(k), renormalize=False)
        p = branch.norm2
        probs.append(p)
        if p > 1e-15:
            avg += p * kempe_i5(branch.normalized())
    margin = before - avg if sense == "nonincreasing" else avg - before
    return TrialResult(before, avg, margin, tuple(probs))


# --- classes ----------------------------------------------------------------

@dataclass(frozen=True)
class SloccClass:
    kind: str
    char_vector: tuple[int, int, int]
    pair: Optional[tuple[int, int]] = None

    @property
    def label(self) -> str:
        if self.kind == "BISEPARABLE":
            return f"BISEPARABLE({self.pair[0]},{self.pair[1]})"
        return self.kind

    def __str__(self) -> str:
        return self.label


def classify(state: PureState3, eps: float = CLASS_EPS) -> SloccClass:
    """GHZ if ``tau3 > eps``; otherwise decided by which qubits are unentangled."""
    if not eps > 0:
        raise BadParam("eps must be positive")
    cs = (concurrence(state, (1, 2)), concurrence(state, (1, 3)), concurrence(state, (2, 3)))
    char = tuple(int(c > eps) for c in cs)
    if three_tangle(state) > eps:
        return SloccClass("GHZ", char)
    entangled = [q for q in (1, 2, 3) if local_tangle(state, q) > eps]
    if not entangled:
        return SloccClass("PRODUCT", char)
    if len(entangled) == 2:
        return SloccClass("BISEPARABLE", char, tuple(entangled))
    return SloccClass("W", char)


# --- fuzzing ----------------------------------------------------------------

FUZZ_HEADER = ("trial", "seed", "class", "i5_before", "i5_after_avg", "margin")


def fuzz_state(rng: np.random.Generator, trial: int) -> PureState3:
    """Pool state for a trial: Haar, GHZ-class and W-class in ratio 2:1:1."""
    from .sampling import ghz_class_state, haar_state_from, w_class_state

    slot = trial % 4
    if slot in (0, 1):
        return haar_state_from(rng)
    if slot == 2:
        return ghz_class_state(rng)
    return w_class_state(rng, local_unitaries=True)


def fuzz_monotonicity(trials: int, base_seed: int = 42, sense: str = "nonincreasing", eps: float = CLASS_EPS):
    """Seeded monotonicity trials; row ``i`` depends only on ``base_seed + i``."""
    rows = []
    for i in range(trials):
        seed = base_seed + i
        rng = np.random.default_rng(seed)
        state = fuzz_state(rng, i)
        nq = int(rng.integers(1, 3))
        chan = random_two_kraus_channel(int(rng.integers(2**63 - 1)), nq)
        res = monotonicity_trial(state, chan, sense)
        rows.append((i, seed, classify(state, eps).label, res.i5_before, res.i5_after_avg, res.margin))
    return rows
