"""Closed-form pulsation envelopes and the first transfer time."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class UnequalArcCountsError(ValueError):
    pass


class HorizonTooShortError(ValueError):
    pass


@dataclass(frozen=True)
class TheoryParams:
    """Arc counts, bridge weight and the declination used by the envelopes.

    With ``theta_source="numeric"`` the caller supplies ``theta_numeric``
    (see :func:`theory_params`); otherwise the first-order asymptotic value
    ``arccos(1 - (1/a1 + 1/a2) eps)`` is used.
    """

    a1: int
    a2: int
    epsilon: float
    theta_source: str = "asymptotic"
    theta_numeric: float | None = None

    def __post_init__(self):
        for a in (self.a1, self.a2):
            if a < 2 or a % 2:
                raise ValueError(f"arc counts must be even and >= 2, got {a}")
        if self.theta_source not in ("asymptotic", "numeric"):
            raise ValueError(f"unknown theta_source {self.theta_source!r}")
        if self.theta_source == "numeric" and self.theta_numeric is None:
            raise ValueError("theta_source='numeric' needs theta_numeric")

    @property
    def theta(self) -> float:
        if self.theta_source == "numeric":
            return float(self.theta_numeric)
        return math.acos(1.0 - (1.0 / self.a1 + 1.0 / self.a2) * self.epsilon)


def theory_params(graph, epsilon: float, theta_source: str = "numeric") -> TheoryParams:
    """Build :class:`TheoryParams` for a bridged graph, solving for theta if needed."""
    numeric = None
    if theta_source == "numeric":
        from .spectral import theta

        numeric = theta(graph, epsilon).require_simple().theta_numeric
    return TheoryParams(graph.a1, graph.a2, epsilon, theta_source, numeric)


def mu_theory(t, params: TheoryParams):
    """Leading-order probabilities on H1 and H2 at step(s) ``t``."""
    a1, a2 = params.a1, params.a2
    c = np.cos(np.asarray(t, dtype=float) * params.theta)
    mu1 = ((a1 + a2 * c) / (a1 + a2)) ** 2
    mu2 = (math.sqrt(a1 * a2) / (a1 + a2) * (1.0 - c)) ** 2
    return mu1, mu2


def mu_theory_equal_arcs(t, params: TheoryParams):
    if params.a1 != params.a2:
        raise UnequalArcCountsError(f"a1={params.a1} differs from a2={params.a2}")
    half = np.asarray(t, dtype=float) * params.theta / 2.0
    return np.cos(half) ** 4, np.sin(half) ** 4


def r_eff(a1: float, a2: float) -> float:
    """Resistance of ``a1`` and ``a2`` in parallel."""
    if a1 <= 0 or a2 <= 0:
        raise ValueError("resistances must be positive")
    return 1.0 / (1.0 / a1 + 1.0 / a2)


def tau_formula(params: TheoryParams) -> int:
    if params.epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return math.floor(math.pi / math.sqrt(2.0) * math.sqrt(r_eff(params.a1, params.a2))
                      / math.sqrt(params.epsilon))


def peak_window(params: TheoryParams) -> int:
    """Last step searched for the first maximum of the H2 probability."""
    return 2 * tau_formula(params) + 10


def tau_simulated(mu_h2, params: TheoryParams) -> int:
    """First step attaining the maximum of ``mu_h2`` over the peak window.

    The series must cover at least ``2 * tau_formula`` steps; the window is
    truncated to what the series holds beyond that.
    """
    mu_h2 = np.asarray(mu_h2)
    tau = tau_formula(params)
    if len(mu_h2) - 1 < 2 * tau:
        raise HorizonTooShortError(
            f"series ends at t={len(mu_h2) - 1}, need at least {2 * tau}")
    window = mu_h2[: min(len(mu_h2), peak_window(params) + 1)]
    return int(np.argmax(window))


def tau_tolerance(tau: int) -> float:
    return max(2.0, 0.02 * tau)


def min_mu1_over_phase(a1: int, a2: int) -> float:
    """Infimum over all phases of the leading-order H1 probability."""
    if a2 >= a1:
        return 0.0
    return ((a1 - a2) / (a1 + a2)) ** 2


def max_mu2_over_phase(a1: int, a2: int) -> float:
    return 4.0 * a1 * a2 / (a1 + a2) ** 2
