import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bridgewalk.asymptotics import (
    HorizonTooShortError,
    TheoryParams,
    UnequalArcCountsError,
    max_mu2_over_phase,
    min_mu1_over_phase,
    mu_theory,
    mu_theory_equal_arcs,
    r_eff,
    tau_formula,
    tau_simulated,
    theory_params,
)

arc_counts = st.integers(1, 200).map(lambda k: 2 * k)


def params_at_phase(a1, a2, phase, t=1):
    """Numeric-theta params so that t * theta equals ``phase``."""
    return TheoryParams(a1, a2, 0.01, "numeric", phase / t)


def test_mu_theory_at_zero():
    mu1, mu2 = mu_theory(0, TheoryParams(20, 6, 0.01))
    assert mu1 == 1.0 and mu2 == 0.0


def test_mu_theory_complete_transfer():
    mu1, mu2 = mu_theory(1, params_at_phase(30, 30, math.pi))
    assert mu1 == pytest.approx(0.0, abs=1e-15)
    assert mu2 == pytest.approx(1.0, abs=1e-15)


def test_mu_theory_asymmetric_peak():
    _, mu2 = mu_theory(1, params_at_phase(20, 6, math.pi))
    assert mu2 == pytest.approx((2 * math.sqrt(120) / 26) ** 2, abs=1e-15)
    assert mu2 == pytest.approx(480 / 676, abs=1e-15)


@pytest.mark.parametrize("phase, expected", [(0.0, (1, 0)), (math.pi, (0, 1)), (math.pi / 2, (0.25, 0.25))])
def test_equal_arcs_form(phase, expected):
    mu1, mu2 = mu_theory_equal_arcs(1, params_at_phase(20, 20, phase))
    assert (mu1, mu2) == pytest.approx(expected, abs=1e-15)


def test_equal_arcs_rejects_unequal():
    with pytest.raises(UnequalArcCountsError):
        mu_theory_equal_arcs(3, TheoryParams(20, 6, 0.01))


@given(arc_counts, st.floats(1e-5, 0.5))
def test_equal_arcs_identity(a, eps):
    p = TheoryParams(a, a, eps)
    t = np.arange(0, 400)
    general = np.stack(mu_theory(t, p))
    special = np.stack(mu_theory_equal_arcs(t, p))
    np.testing.assert_allclose(general, special, rtol=0, atol=1e-14)


@given(arc_counts, arc_counts, st.floats(0, 2 * math.pi))
def test_envelope_bounds(a1, a2, phase):
    mu1, mu2 = mu_theory(1, params_at_phase(a1, a2, phase))
    assert 0 <= mu1 <= 1 and 0 <= mu2 <= 1
    assert mu1 + mu2 <= 1 + 1e-15


@given(arc_counts, arc_counts)
def test_phase_extremes(a1, a2):
    phases = np.linspace(0, math.pi, 20001)
    mu1, mu2 = mu_theory(phases, TheoryParams(a1, a2, 0.01, "numeric", 1.0))
    assert mu1.min() == pytest.approx(min_mu1_over_phase(a1, a2), abs=1e-6)
    assert mu2.max() == pytest.approx(max_mu2_over_phase(a1, a2), abs=1e-12)
    assert (mu1.min() <= 1e-6) == (a2 >= a1)


@pytest.mark.parametrize("a1, a2, expected", [(20, 20, 10), (20, 6, 60 / 13), (30, 30, 15)])
def test_r_eff(a1, a2, expected):
    assert r_eff(a1, a2) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("a1, a2, expected", [(20, 20, 70), (20, 6, 47), (6, 20, 47), (30, 30, 86)])
def test_tau_formula(a1, a2, expected):
    assert tau_formula(TheoryParams(a1, a2, 0.01)) == expected
    raw = math.pi / math.sqrt(2) * math.sqrt(r_eff(a1, a2)) * 10
    assert math.floor(raw) == expected


@given(arc_counts, arc_counts, st.floats(1e-5, 1e-2))
def test_period_consistency(a1, a2, eps):
    p = TheoryParams(a1, a2, eps)
    period_arccos = math.pi / p.theta
    period_formula = math.pi / math.sqrt(2) * math.sqrt(r_eff(a1, a2) / eps)
    rel = abs(period_arccos - period_formula) / period_formula
    assert rel <= (1 / a1 + 1 / a2) * eps


def test_tau_simulated_on_exact_cosine():
    p = TheoryParams(20, 20, 0.01)
    t = np.arange(2 * tau_formula(p) + 11)
    _, mu2 = mu_theory(t, p)
    assert tau_simulated(mu2, p) == round(math.pi / p.theta)


def test_tau_simulated_first_of_ties():
    p = TheoryParams(20, 20, 0.01)
    mu2 = np.zeros(200)
    mu2[[80, 120]] = 1.0
    assert tau_simulated(mu2, p) == 80


def test_tau_simulated_short_horizon():
    p = TheoryParams(20, 20, 0.01)
    with pytest.raises(HorizonTooShortError):
        tau_simulated(np.linspace(0, 1, 100), p)


def test_theory_params_validation():
    with pytest.raises(ValueError):
        TheoryParams(3, 6, 0.01)
    with pytest.raises(ValueError):
        TheoryParams(6, 6, 0.01, "numeric")
    with pytest.raises(ValueError):
        TheoryParams(6, 6, 0.01, "guess")


def test_theory_params_numeric(k5k5):
    p = theory_params(k5k5, 0.01, "numeric")
    assert p.theta_source == "numeric"
    assert p.theta == pytest.approx(TheoryParams(20, 20, 0.01).theta, rel=5e-3)
    assert theory_params(k5k5, 0.01, "asymptotic").theta == TheoryParams(20, 20, 0.01).theta
