"""Independent reference implementations used only by the tests.

These avoid the package's code paths on purpose: explicit index loops for
partial traces, the slice-discriminant form of the hyperdeterminant, and the
square-root fidelity route for the concurrence.
"""
import itertools
import math

import numpy as np
from scipy.linalg import sqrtm

SY = np.array([[0, -1j], [1j, 0]])


def amps(state):
    return np.asarray(getattr(state, "amp", state), dtype=complex).reshape(8)


def bit(b, q):
    # qubit 1 is the most significant bit
    return (b >> (3 - q)) & 1


def ptrace(state, keep):
    a = amps(state)
    keep = sorted(keep)
    d = 2 ** len(keep)
    rho = np.zeros((d, d), dtype=complex)
    for b1, b2 in itertools.product(range(8), repeat=2):
        traced = [q for q in (1, 2, 3) if q not in keep]
        if any(bit(b1, q) != bit(b2, q) for q in traced):
            continue
        r = int("".join(str(bit(b1, q)) for q in keep), 2)
        c = int("".join(str(bit(b2, q)) for q in keep), 2)
        rho[r, c] += a[b1] * np.conj(a[b2])
    return rho


def hyperdet(state):
    t = amps(state).reshape(2, 2, 2)
    d0, d1 = np.linalg.det(t[0]), np.linalg.det(t[1])
    mixed = np.linalg.det(t[0] + t[1]) - d0 - d1
    return mixed**2 - 4 * d0 * d1


def tau3(state):
    return 4 * abs(hyperdet(state))


def concurrence(rho):
    """Fidelity route: eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho))."""
    yy = np.kron(SY, SY)
    tilde = yy @ rho.conj() @ yy
    s = sqrtm(rho)
    r = sqrtm(s @ tilde @ s)
    ev = np.sort(np.linalg.eigvalsh((r + r.conj().T) / 2))[::-1]
    return max(0.0, ev[0] - ev[1] - ev[2] - ev[3]), ev


def local_tangle(state, q):
    return 4 * np.linalg.det(ptrace(state, [q])).real


def kempe(state):
    r1, r2, r12 = ptrace(state, [1]), ptrace(state, [2]), ptrace(state, [1, 2])
    val = 3 * np.trace(np.kron(r1, r2) @ r12) - np.trace(r1 @ r1 @ r1) - np.trace(r2 @ r2 @ r2)
    return float(val.real)


def tangles(state):
    c = {p: concurrence(ptrace(state, list(p)))[0] for p in ((1, 2), (1, 3), (2, 3))}
    return {
        "c12": c[(1, 2)], "c13": c[(1, 3)], "c23": c[(2, 3)], "tau3": tau3(state),
        "tau11": local_tangle(state, 1), "tau12": local_tangle(state, 2), "tau13": local_tangle(state, 3),
        "i5": kempe(state),
    }


def psi_alpha_values(alpha):
    """Closed forms for the reference state (already in Acin form, all l = 1/sqrt5, phi = alpha)."""
    return {
        "tau3": 4 / 25,
        "c12": 2 / 5,
        "c13": 2 / 5,
        "c23": 2 / 5 * abs(np.exp(1j * alpha) - 1),
    }


def acin_vector(l0, l1, l2, l3, l4, phi):
    a = np.zeros(8, dtype=complex)
    a[0b000] = l1
    a[0b100] = l0 * np.exp(1j * phi)
    a[0b110] = l2
    a[0b101] = l3
    a[0b111] = l4
    return a
