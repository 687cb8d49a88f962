import math

import pytest

import oracles
from threequbit.conformance import report_records


@pytest.fixture(scope="module")
def report():
    return {r["claim"]: r for r in report_records()}


def test_report_shape(report):
    assert len(report) >= 20
    for r in report.values():
        assert isinstance(r["agree"], bool)


def test_reference_tau3_verdict(report):
    r = report["tau3 of PSI_ALPHA"]
    assert r["paper_value"] == pytest.approx(8 / 25)
    assert r["computed_value"] == pytest.approx(oracles.psi_alpha_values(0.3)["tau3"], abs=1e-12)
    assert r["agree"] is False


def test_reference_concurrences(report):
    assert report["C12 of PSI_ALPHA"]["agree"]
    assert report["C13 of PSI_ALPHA"]["agree"]
    for a in (math.pi / 4, math.pi):
        key = f"C23 of PSI_ALPHA at alpha={a:.6f}: sqrt(8)(1-cos a)/5"
        assert report[key]["agree"] is False
        assert report[key]["computed_value"] == pytest.approx(oracles.psi_alpha_values(a)["c23"], abs=1e-12)
    assert report[f"C23 of PSI_ALPHA at alpha={math.pi / 4:.6f}: sqrt(8)sqrt(1-cos a)/5"]["agree"]


def test_kempe_verdicts(report):
    for name in ("GHZ", "W", "PRODUCT000"):
        assert report[f"I5 of {name}"]["agree"]


def test_assistance_verdicts(report):
    printed = next(r for k, r in report.items() if k.startswith("assistance E_a = sqrt(C + tau3)"))
    squared = next(r for k, r in report.items() if k.startswith("assistance E_a = sqrt(C^2 + tau3)"))
    assert printed["agree"] is False
    assert squared["agree"] is True


def test_family_and_orbit_verdicts(report):
    assert report["cos(phi) printed formula at the reference point (alpha=pi)"]["agree"] is False
    assert report["cos(phi) derived formula at the reference point (alpha=pi)"]["agree"] is True
    assert report["same interval with ascending endpoints"]["agree"] is True
    assert report["|t| <= fourth-root bound admits real s (checked at 0.9 * bound)"]["agree"] is False
    assert report["tau3 and C12 constant along the diagonal orbit (spread)"]["agree"] is True
