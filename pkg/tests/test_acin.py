import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from threequbit.acin import AcinParams, acin_amplitudes, from_acin, tau3_closed, to_acin
from threequbit.errors import InputError
from threequbit.invariants import tangle_vector, three_tangle
from threequbit.statecore import (
    PureState3,
    apply_local_ops,
    haar_random_state,
    make_state,
    preset_state,
    random_local_unitaries,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
unit = st.floats(0.05, 1.0)


@st.composite
def interior_params(draw):
    lam = np.array([draw(unit) for _ in range(5)])
    lam /= np.linalg.norm(lam)
    return AcinParams(*lam, phi=draw(st.floats(0.05, math.pi - 0.05)))


def check_reduction(state):
    red = to_acin(state)
    image = apply_local_ops(state, red.u1, red.u2, red.u3, renormalize=False)
    assert np.allclose(image.amp, acin_amplitudes(red.params), atol=1e-9)
    assert red.residual < 1e-9
    return red


def test_amplitude_slots():
    a = acin_amplitudes(AcinParams(0.1, 0.2, 0.3, 0.4, 0.5, 0.7))
    assert np.allclose(a, oracles.acin_vector(0.1, 0.2, 0.3, 0.4, 0.5, 0.7))


def test_ghz_reduction():
    p = check_reduction(preset_state("GHZ")).params
    assert p.l1 == pytest.approx(2**-0.5, abs=1e-9)
    assert p.l4 == pytest.approx(2**-0.5, abs=1e-9)
    assert max(p.l0, p.l2, p.l3) < 1e-9


def test_w_reduction():
    p = check_reduction(preset_state("W")).params
    assert p.l4 < 1e-9
    assert tangle_vector(from_acin(p)).i5 == pytest.approx(2 / 9, abs=1e-9)


def test_reference_state_is_fixed_point():
    p = check_reduction(preset_state("PSI_ALPHA", math.pi)).params
    assert np.allclose(p.lambdas, 5**-0.5, atol=1e-9)
    assert p.phi == pytest.approx(math.pi, abs=1e-9)


@pytest.mark.parametrize("bits", ["000", "011", "101", "111"])
def test_products_reduce(bits):
    s = make_state(np.eye(8)[int(bits, 2)])
    p = check_reduction(s).params
    assert tangle_vector(from_acin(p)).i5 == pytest.approx(1.0, abs=1e-9)


def test_biseparable_reduces():
    check_reduction(make_state([1, 0, 0, 1, 0, 0, 0, 0]))
    check_reduction(make_state([1, 0, 0, 0, 0, 1, 0, 0]))
    check_reduction(make_state([1, 0, 0, 0, 0, 0, 1, 0]))


@given(seeds)
def test_round_trip_preserves_tangles(seed):
    s = haar_random_state(seed)
    red = check_reduction(s)
    a, b = tangle_vector(s), tangle_vector(from_acin(red.params))
    for k in ("c12", "c13", "c23", "tau3", "tau11", "tau12", "tau13", "i5", "i6"):
        assert getattr(a, k) == pytest.approx(getattr(b, k), abs=1e-8)


@given(interior_params())
def test_idempotent_on_interior_phase(p):
    q = to_acin(from_acin(p)).params
    assert np.allclose(q.as_array(), p.as_array(), atol=1e-9)


@given(seeds)
def test_idempotent_on_canonical_outputs(seed):
    p = to_acin(haar_random_state(seed)).params
    q = to_acin(from_acin(p)).params
    assert np.allclose(q.as_array(), p.as_array(), atol=1e-9)


@given(interior_params(), seeds)
def test_recovers_params_after_local_unitaries(p, seed):
    s = random_local_unitaries(from_acin(p), np.random.default_rng(seed))
    q = to_acin(s).params
    assert np.allclose(q.as_array(), p.as_array(), atol=1e-8)


@given(interior_params())
def test_tau3_closed_form(p):
    assert tau3_closed(p) == pytest.approx(oracles.tau3(from_acin(p)), abs=1e-12)
    assert tau3_closed(p) == pytest.approx(three_tangle(from_acin(p)), abs=1e-12)


@given(interior_params())
def test_phase_removable_without_l2_or_l3(p):
    for drop in (2, 3):
        arr = p.as_array()
        arr[drop] = 0.0
        a = tangle_vector(PureState3(acin_amplitudes(arr)))
        arr[5] = 0.0
        b = tangle_vector(PureState3(acin_amplitudes(arr)))
        for k in ("c12", "c13", "c23", "tau3", "i5"):
            assert getattr(a, k) == pytest.approx(getattr(b, k), abs=1e-9)


def test_param_validation():
    with pytest.raises(InputError):
        AcinParams(-0.1, 0.5, 0.5, 0.5, 0.5, 0.0)
    with pytest.raises(InputError):
        AcinParams(0.1, 0.5, 0.5, 0.5, 0.5, 4.0)
    with pytest.raises(InputError):
        AcinParams(float("nan"), 0.5, 0.5, 0.5, 0.5, 0.0)


def test_dict_round_trip():
    p = AcinParams(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
    assert AcinParams.from_dict(p.to_dict()) == p
