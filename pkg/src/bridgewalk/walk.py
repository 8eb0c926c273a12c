"""Matrix-free Grover walk on the arcs of a bridged graph.

One step applies ``U = S (2 d* d - I)`` where ``d`` maps arc amplitudes to
vertices with entries ``sqrt(p(reverse(a)))`` at ``t(a)`` and ``S`` swaps each
arc with its reverse. Dense versions of ``d``, ``S`` and ``U`` are kept for
cross-checking only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .graphs import BridgedGraph, Region


class LengthMismatchError(ValueError):
    pass


class ProbabilityTriple(NamedTuple):
    mu_h1: float
    mu_h2: float
    mu_h0: float


@dataclass(frozen=True)
class WalkState:
    amplitudes: np.ndarray
    epsilon: float
    time: int = 0

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass
class ProbabilitySeries:
    """Region probabilities for ``t = 0 .. T``.

    ``mu_h0`` is the probability on the two bridge arcs. Theory columns are
    filled in by the caller when a comparison is wanted.
    """

    t: np.ndarray
    mu_h1: np.ndarray
    mu_h2: np.ndarray
    mu_h0: np.ndarray
    norm_sq: np.ndarray
    epsilon: float
    mu_h1_theory: np.ndarray | None = field(default=None)
    mu_h2_theory: np.ndarray | None = field(default=None)

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, t: int) -> ProbabilityTriple:
        return ProbabilityTriple(float(self.mu_h1[t]), float(self.mu_h2[t]), float(self.mu_h0[t]))

    @property
    def horizon(self) -> int:
        return int(self.t[-1])


class GroverOperator:
    """Precomputed step data for one ``(graph, epsilon)`` pair."""

    def __init__(self, graph: BridgedGraph, epsilon: float):
        if epsilon < 0:
            raise ValueError(f"epsilon must be non-negative, got {epsilon}")
        self.graph = graph
        self.epsilon = float(epsilon)
        p = graph.transition_probs(epsilon)
        # sqrt(p) of the reversed arc: the entry of d at (t(a), a)
        self.sqrt_p_rev = np.sqrt(p[graph.reverse])
        self.terminal = graph.terminal
        self.reverse = graph.reverse
        self.n_vertices = graph.vertex_count

    def _to_vertices(self, psi: np.ndarray) -> np.ndarray:
        contrib = self.sqrt_p_rev * psi
        n = self.n_vertices
        return (np.bincount(self.terminal, weights=contrib.real, minlength=n)
                + 1j * np.bincount(self.terminal, weights=contrib.imag, minlength=n))

    def apply(self, psi: np.ndarray) -> np.ndarray:
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (self.graph.arc_count,):
            raise LengthMismatchError(
                f"state has shape {psi.shape}, graph has {self.graph.arc_count} arcs")
        s = self._to_vertices(psi)
        phi = 2.0 * self.sqrt_p_rev * s[self.terminal] - psi
        return phi[self.reverse]

    __call__ = apply

    def apply_shift(self, psi: np.ndarray) -> np.ndarray:
        return np.asarray(psi)[self.reverse]

    def boundary_adjoint(self, g: np.ndarray) -> np.ndarray:
        """``d* g`` as an arc vector."""
        return self.sqrt_p_rev * np.asarray(g)[self.terminal]


def initial_state(graph: BridgedGraph, epsilon: float = 0.0) -> WalkState:
    """Uniform superposition over the arcs of the first graph."""
    amp = np.zeros(graph.arc_count, dtype=complex)
    amp[graph.region == Region.H1] = 1.0 / np.sqrt(graph.a1)
    return WalkState(amp, epsilon, 0)


def step(state: WalkState, graph: BridgedGraph, op: GroverOperator | None = None) -> WalkState:
    if op is None or op.graph is not graph or op.epsilon != state.epsilon:
        op = GroverOperator(graph, state.epsilon)
    return WalkState(op.apply(state.amplitudes), state.epsilon, state.time + 1)


def region_probability(state: WalkState | np.ndarray, graph: BridgedGraph, region: Region) -> float:
    amp = state.amplitudes if isinstance(state, WalkState) else np.asarray(state)
    mask = graph.region == Region(region)
    return float(np.sum(np.abs(amp[mask]) ** 2))


def _region_masses(graph: BridgedGraph, amp: np.ndarray) -> np.ndarray:
    return np.bincount(graph.region, weights=np.abs(amp) ** 2, minlength=3)


def evolve(graph: BridgedGraph, epsilon: float, horizon: int,
           state: WalkState | None = None) -> ProbabilitySeries:
    """Run ``horizon`` steps from the uniform H1 state (or ``state``)."""
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    op = GroverOperator(graph, epsilon)
    psi = (state.amplitudes if state is not None else initial_state(graph, epsilon).amplitudes)
    masses = np.empty((horizon + 1, 3))
    norms = np.empty(horizon + 1)
    for t in range(horizon + 1):
        if t:
            psi = op.apply(psi)
        masses[t] = _region_masses(graph, psi)
        norms[t] = masses[t].sum()
    return ProbabilitySeries(
        t=np.arange(horizon + 1),
        mu_h1=masses[:, Region.H1].copy(),
        mu_h2=masses[:, Region.H2].copy(),
        mu_h0=masses[:, Region.BRIDGE].copy(),
        norm_sq=norms,
        epsilon=float(epsilon),
    )


# dense reference operators

def boundary_matrix(graph: BridgedGraph, epsilon: float) -> np.ndarray:
    """Dense ``d``: shape ``(|V|, |A|)``."""
    p = graph.transition_probs(epsilon)
    d = np.zeros((graph.vertex_count, graph.arc_count))
    arcs = np.arange(graph.arc_count)
    d[graph.terminal, arcs] = np.sqrt(p[graph.reverse])
    return d


def shift_matrix(graph: BridgedGraph) -> np.ndarray:
    n = graph.arc_count
    s = np.zeros((n, n))
    s[np.arange(n), graph.reverse] = 1.0
    return s


def evolution_matrix(graph: BridgedGraph, epsilon: float) -> np.ndarray:
    d = boundary_matrix(graph, epsilon)
    coin = 2.0 * d.T @ d - np.eye(graph.arc_count)
    return shift_matrix(graph) @ coin
