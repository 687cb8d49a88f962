import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from threequbit.errors import BadParam, InputError
from threequbit.invariants import i5_closed_c12_zero, kempe_i5, local_tangle, three_tangle
from threequbit.acin import from_acin
from threequbit.sampling import (
    ENSEMBLES,
    SCATTER_HEADER,
    envelope_bins,
    min_curve,
    min_curve_lower,
    min_curve_state,
    sample_scatter,
    scatter_arrays,
    scatter_csv,
    zero_concurrence_params,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_min_curve_endpoints():
    w = min_curve_state(0.0)
    assert kempe_i5(w) == pytest.approx(2 / 9, abs=1e-12)
    top = min_curve_state(1.0)
    assert kempe_i5(top) == pytest.approx(1.0)
    assert three_tangle(top) < 1e-15


def test_min_curve_tau3_closed_form():
    # tau3 = 16 a b^3 / (3 sqrt 3) with b = sqrt(1 - a^2), derived from the hyperdeterminant
    for a in np.linspace(0, 1, 11):
        b = math.sqrt(1 - a * a)
        assert oracles.tau3(min_curve_state(a)) == pytest.approx(16 * a * b**3 / (3 * math.sqrt(3)), abs=1e-12)


def test_min_curve_peak_is_ghz_like():
    s = min_curve_state(0.5)
    assert three_tangle(s) == pytest.approx(1.0, abs=1e-12)


def test_min_curve_domain():
    for a in (-0.1, 1.1, float("nan")):
        with pytest.raises(BadParam):
            min_curve_state(a)


def test_min_curve_arrays():
    a, tau, i5 = min_curve(101)
    assert len(a) == len(tau) == len(i5) == 101
    assert i5.min() == pytest.approx(2 / 9, abs=1e-12)


@pytest.mark.parametrize("ensemble", ENSEMBLES)
def test_rows_reproducible(ensemble):
    a = sample_scatter(ensemble, 3, 9)
    b = sample_scatter(ensemble, 3, 9)
    assert a == b
    assert sample_scatter(ensemble, 1, 11)[0].as_tuple()[1:] == sample_scatter(ensemble, 2, 10)[1].as_tuple()[1:]


def test_bad_ensemble_and_size():
    with pytest.raises(InputError):
        sample_scatter("UNIFORM", 3)
    with pytest.raises(InputError):
        sample_scatter("HAAR", 0)


def test_w_class_has_zero_tau3_and_wide_i5():
    d = scatter_arrays(sample_scatter("W_CLASS", 800, 1))
    assert d["tau3"].max() < 1e-8
    assert d["i5"].min() >= 2 / 9 - 1e-9
    assert d["i5"].min() < 0.3 and d["i5"].max() > 0.95


def test_ghz_class_rejection():
    d = scatter_arrays(sample_scatter("GHZ_CLASS", 300, 2))
    assert d["tau3"].min() > 1e-6
    assert d["i5"].min() >= 2 / 9 - 1e-6


def test_acin_random_rows_are_normalized_states():
    rows = sample_scatter("ACIN_RANDOM", 50, 3)
    assert all(2 / 9 - 1e-9 <= r.i5 <= 1 + 1e-9 for r in rows)


@given(seeds, st.sampled_from([(1, 2), (1, 3), (2, 3)]))
def test_zero_concurrence_sampler(seed, pair):
    p = zero_concurrence_params(np.random.default_rng(seed), pair)
    s = from_acin(p)
    c, _ = oracles.concurrence(oracles.ptrace(s, list(pair)))
    assert c < 1e-7
    k = 6 - sum(pair)
    assert kempe_i5(s) == pytest.approx(i5_closed_c12_zero(local_tangle(s, k)), abs=1e-8)
    assert kempe_i5(s) >= 0.25 - 1e-9


def test_zero_concurrence_ensemble_ghz_bound():
    d = scatter_arrays(sample_scatter("ZERO_CONCURRENCE", 600, 4))
    assert np.minimum.reduce([d["c12"], d["c13"], d["c23"]]).max() < 1e-9
    assert d["i5"].min() >= 0.25 - 1e-6


def test_lower_envelope_against_ghz_samples():
    d = scatter_arrays(sample_scatter("GHZ_CLASS", 1500, 5))
    bins = envelope_bins(d["tau3"], d["i5"])
    assert min(b.margin for b in bins) >= -5e-3


def test_lower_branch_choice():
    # the a <= 1/2 branch starts at W (2/9), the other at |111> (1)
    assert min_curve_lower(0.0) == pytest.approx(2 / 9, abs=1e-6)


def test_csv_layout():
    text = scatter_csv(sample_scatter("HAAR", 2, 0))
    lines = text.splitlines()
    assert lines[0] == ",".join(SCATTER_HEADER)
    assert lines[1].startswith("0,") and lines[2].startswith("1,")
