"""Three-qubit pure states, partial traces and local operator action.

Basis convention: amplitude index ``b = 4*q1 + 2*q2 + q3`` for the ket
``|q1 q2 q3>``, i.e. qubit 1 is the leftmost (most significant) bit. Reshaping
the amplitude vector to ``(2, 2, 2)`` gives the tensor ``a[q1, q2, q3]``.

Qubits are labelled 1, 2, 3 in the public API.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import AllZero, BadParam, BadQubitSet, InputError, SingularOp, UnknownPreset

NORM_TOL = 1e-12
ZERO_TOL = 1e-15

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState3:
    """Eight complex amplitudes of a three-qubit pure state.

    The amplitudes are stored as given; only :func:`make_state` normalizes.
    ``prenorm`` records the 2-norm the amplitudes had before the last
    normalization (1.0 when the state was never renormalized).
    """

    amp: np.ndarray
    prenorm: float = 1.0

    def __post_init__(self):
        arr = _frozen(self.amp).reshape(-1)
        if arr.shape != (8,):
            raise InputError(f"expected 8 amplitudes, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InputError("amplitudes must be finite")
        object.__setattr__(self, "amp", arr)

    @property
    def tensor(self) -> np.ndarray:
        return self.amp.reshape(2, 2, 2)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm2)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm2 - 1.0) < NORM_TOL

    def normalized(self) -> "PureState3":
        n = self.norm
        if n < ZERO_TOL:
            raise AllZero("cannot normalize the zero vector")
        return PureState3(self.amp / n, prenorm=n)

    def overlap(self, other: "PureState3") -> complex:
        return complex(np.vdot(self.amp, other.amp))


LOCAL_OP_KINDS = ("unitary", "sl2", "general")


@dataclass(frozen=True)
class LocalOp:
    """A 2x2 operator acting on a single qubit."""

    entries: np.ndarray
    kind: str = "general"

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.shape != (2, 2):
            raise InputError(f"local operator must be 2x2, got shape {m.shape}")
        if self.kind not in LOCAL_OP_KINDS:
            raise InputError(f"unknown operator kind {self.kind!r}")
        if self.kind == "unitary" and np.abs(m.conj().T @ m - IDENTITY).max() > NORM_TOL:
            raise InputError("operator declared unitary is not unitary")
        if self.kind == "sl2" and abs(np.linalg.det(m) - 1) > NORM_TOL:
            raise InputError("operator declared sl2 does not have unit determinant")
        object.__setattr__(self, "entries", m)

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))


def _as_matrix(op) -> np.ndarray:
    if isinstance(op, LocalOp):
        return op.entries
    m = np.asarray(op, dtype=complex)
    if m.shape != (2, 2):
        raise InputError(f"local operator must be 2x2, got shape {m.shape}")
    return m


def make_state(amplitudes: Iterable[complex]) -> PureState3:
    """Build a normalized state from 8 amplitudes, remembering the input norm."""
    raw = PureState3(np.asarray(list(amplitudes), dtype=complex))
    if np.abs(raw.amp).max() < ZERO_TOL:
        raise AllZero("all amplitudes vanish")
    return raw.normalized()


def basis_state(bits: str) -> PureState3:
    if len(bits) != 3 or set(bits) - {"0", "1"}:
        raise InputError(f"bad basis label {bits!r}")
    amp = np.zeros(8, dtype=complex)
    amp[int(bits, 2)] = 1.0
    return PureState3(amp)


def _check_qubits(keep) -> tuple[int, ...]:
    try:
        qs = tuple(sorted(set(int(q) for q in keep)))
    except TypeError:
        raise BadQubitSet(f"bad qubit set {keep!r}") from None
    if not qs or len(qs) > 2 or any(q not in (1, 2, 3) for q in qs):
        raise BadQubitSet(f"qubit set must be 1 or 2 indices from {{1,2,3}}, got {keep!r}")
    return qs


def reduced_density(state: PureState3, keep) -> np.ndarray:
    """Partial trace of ``|psi><psi|`` over the qubits not in ``keep``.

    The kept qubits appear in increasing order. No renormalization is done,
    so the trace equals ``state.norm2``.
    """
    qs = _check_qubits(keep)
    t = state.tensor
    traced = [q - 1 for q in (1, 2, 3) if q not in qs]
    rho = np.tensordot(t, t.conj(), axes=(traced, traced))
    d = 2 ** len(qs)
    return rho.reshape(d, d)


def apply_local_ops(state: PureState3, op1, op2, op3, renormalize: bool = True) -> PureState3:
    """Apply ``op1 (x) op2 (x) op3`` to the state.

    With ``renormalize=False`` the raw image is returned; its ``prenorm`` is
    still the input's, so callers read the new norm from ``.norm``.
    """
    m1, m2, m3 = (_as_matrix(o) for o in (op1, op2, op3))
    out = np.einsum("ia,jb,kc,abc->ijk", m1, m2, m3, state.tensor).reshape(8)
    if not renormalize:
        return PureState3(out, prenorm=state.prenorm)
    n = float(np.linalg.norm(out))
    if n < ZERO_TOL:
        raise SingularOp(f"output norm {n:.3e} below {ZERO_TOL}")
    return PureState3(out / n, prenorm=n)


def apply_on_qubit(state: PureState3, op, qubit: int) -> PureState3:
    """Unnormalized action of a single-qubit operator on ``qubit``."""
    ops = [IDENTITY, IDENTITY, IDENTITY]
    ops[qubit - 1] = _as_matrix(op)
    return apply_local_ops(state, *ops, renormalize=False)


def haar_random_state(seed: int) -> PureState3:
    """Unitarily invariant random state from 8 complex Gaussians.

    Each call owns its own generator, so the result depends on ``seed`` only.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return make_state(z)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar 2x2 unitary via QR with the phase correction of Mezzadri."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_sl2(rng: np.random.Generator) -> np.ndarray:
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    det = np.linalg.det(m)
    return m / np.sqrt(det)


def random_local_unitaries(state: PureState3, rng: np.random.Generator) -> PureState3:
    return apply_local_ops(state, random_unitary(rng), random_unitary(rng), random_unitary(rng))


PRESETS = ("GHZ", "W", "PRODUCT000", "PSI_ALPHA")


def preset_state(name: str, alpha: float | None = None) -> PureState3:
    """Named reference states.

    ``PSI_ALPHA`` is ``(|000> + e^{i alpha}|100> + |101> + |110> + |111>)/sqrt(5)``.
    """
    key = name.upper().replace("-", "_")
    amp = np.zeros(8, dtype=complex)
    if key == "GHZ":
        amp[[0, 7]] = 1.0
    elif key == "W":
        amp[[4, 2, 1]] = 1.0
    elif key in ("PRODUCT000", "PRODUCT"):
        amp[0] = 1.0
    elif key == "PSI_ALPHA":
        if alpha is None or not math.isfinite(alpha):
            raise BadParam("PSI_ALPHA needs a finite alpha")
        amp[[0, 5, 6, 7]] = 1.0
        amp[4] = np.exp(1j * alpha)
    else:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return make_state(amp)


# --- state files -----------------------------------------------------------

def parse_state_document(doc) -> PureState3:
    """Strict parse of ``[[re, im], ...]`` with exactly 8 finite entries."""
    if not isinstance(doc, list) or len(doc) != 8:
        n = len(doc) if isinstance(doc, list) else type(doc).__name__
        raise InputError(f"state file must hold an array of 8 [re, im] pairs, got {n}")
    amp = []
    for i, entry in enumerate(doc):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            raise InputError(f"entry {i} is not a [re, im] pair of numbers: {entry!r}")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InputError(f"entry {i} is not finite")
        amp.append(complex(re, im))
    return make_state(amp)


def load_state(path: str | Path) -> PureState3:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    return parse_state_document(doc)


def state_to_document(state: PureState3) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in state.amp]


def dump_state(state: PureState3, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state_to_document(state)) + "\n")
