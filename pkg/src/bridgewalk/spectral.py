"""Vertex-side spectral analysis of the weighted random walk and its lift to arcs.

The weighted transition matrix ``W(eps)`` shares its spectrum with the
symmetric matrix ``W_sym = d S d*``. Each eigenpair ``(cos theta, g)`` of
``W_sym`` lifts to an eigenvector ``(I - e^{i theta} S) d* g`` of the walk
operator with eigenvalue ``e^{i theta}``; the lift is exact. The small-eps
structure comes from splitting ``W(eps) = W0 + eps W1 + O(eps^2)`` and
reducing ``W1`` onto the doubled eigenvalue 1 of ``W0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import BridgedGraph, Region
from .walk import GroverOperator, initial_state

EIGEN_ONE_TOL = 1e-12
CLUSTER_TOL = 1e-9
LIFT_RESIDUAL_TOL = 1e-9


class NoConvergenceError(RuntimeError):
    pass


class DegenerateTopEigenvalueError(ValueError):
    pass


class EigenResidualTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralPair:
    value: complex | float
    vector: np.ndarray
    side: str  # "vertex" or "arc"

    def residual(self, apply) -> float:
        """``||M v - value v||`` for the operator ``apply`` (a callable)."""
        return float(np.linalg.norm(apply(self.vector) - self.value * self.vector))


# matrices

def transition_matrix(graph: BridgedGraph, epsilon: float) -> np.ndarray:
    """Row-stochastic ``W(eps)`` with ``W[x, y] = w(x, y) / m(x)``."""
    n = graph.vertex_count
    w = np.zeros((n, n))
    w[graph.origin, graph.terminal] = graph.transition_probs(epsilon)
    return w


def symmetrized_matrix(graph: BridgedGraph, epsilon: float) -> np.ndarray:
    """``W_sym[x, y] = w(x, y) / sqrt(m(x) m(y))``."""
    p = graph.transition_probs(epsilon)
    n = graph.vertex_count
    ws = np.zeros((n, n))
    ws[graph.origin, graph.terminal] = np.sqrt(p * p[graph.reverse])
    return ws


def stationary_measure(graph: BridgedGraph, epsilon: float) -> np.ndarray:
    """Reversible measure ``m(x) / sum(m)`` of ``W(eps)``."""
    m = graph.out_weight(epsilon)
    return m / m.sum()


def subgraph_measure(graph: BridgedGraph, which: int) -> np.ndarray:
    """``deg(x) / |A_j|`` on ``V_j``, zero elsewhere (``which`` is 1 or 2)."""
    mask = graph.vertex_region() == (Region.H1 if which == 1 else Region.H2)
    arcs = graph.a1 if which == 1 else graph.a2
    return np.where(mask, graph.deg / arcs, 0.0)


def unperturbed_measure(graph: BridgedGraph) -> np.ndarray:
    """``deg(x) / (|A1| + |A2|)``, the reversible measure of ``W0``."""
    return graph.deg / (graph.a1 + graph.a2)


def split_perturbation(graph: BridgedGraph) -> tuple[np.ndarray, np.ndarray]:
    """Zeroth- and first-order terms of ``W(eps)`` in ``eps``."""
    n = graph.vertex_count
    w0 = np.zeros((n, n))
    w1 = np.zeros((n, n))
    deg = graph.deg.astype(float)
    boundary = set(graph.boundary)
    for o, t, tag in zip(graph.origin, graph.terminal, graph.region):
        if tag == Region.BRIDGE:
            w1[o, t] = 1.0 / deg[o]
            continue
        w0[o, t] = 1.0 / deg[o]
        if o in boundary:
            w1[o, t] = -1.0 / deg[o] ** 2
    return w0, w1


def eigenvalue_one_projection(graph: BridgedGraph) -> np.ndarray:
    """``Pi = diag(1_{V1} <pi_1|, 1_{V2} <pi_2|)``, the W0 eigenprojection for 1."""
    tags = graph.vertex_region()
    proj = np.zeros((graph.vertex_count, graph.vertex_count))
    for which, tag in ((1, Region.H1), (2, Region.H2)):
        ones = (tags == tag).astype(float)
        proj += np.outer(ones, subgraph_measure(graph, which))
    return proj


def reduced_matrix(graph: BridgedGraph) -> np.ndarray:
    """``Pi W1 Pi`` as a full ``|V| x |V|`` matrix."""
    proj = eigenvalue_one_projection(graph)
    _, w1 = split_perturbation(graph)
    return proj @ w1 @ proj


def reduced_action(graph: BridgedGraph) -> np.ndarray:
    """2x2 matrix of ``Pi W1 Pi`` on the basis ``(1_{V1}, 1_{V2})`` of Ran(Pi).

    Coordinates of a vector in Ran(Pi) are read off with the measures
    ``pi_1`` and ``pi_2``, which satisfy ``<pi_j | 1_{V_k}> = delta_jk``.
    """
    tags = graph.vertex_region()
    basis = np.stack([(tags == Region.H1).astype(float), (tags == Region.H2).astype(float)], axis=1)
    coords = np.stack([subgraph_measure(graph, 1), subgraph_measure(graph, 2)])
    return coords @ reduced_matrix(graph) @ basis


def reduced_eigenvalue(graph: BridgedGraph) -> float:
    """Nonzero eigenvalue of the reduced first-order matrix.

    The 2x2 action has a zero eigenvalue (the global all-ones vector), so
    the other one equals its trace.
    """
    return float(np.trace(reduced_action(graph)))


def reduced_eigenvector(graph: BridgedGraph) -> np.ndarray:
    """Vertex vector of the split eigenvalue, scaled to ``(-|A2| 1_{V1}, |A1| 1_{V2})``."""
    m = reduced_action(graph)
    lam = np.trace(m)
    # kernel of (m - lam I): orthogonal to its first row, or second if that row vanishes
    row = m[0] - np.array([lam, 0.0])
    if np.allclose(row, 0.0):
        row = m[1] - np.array([0.0, lam])
    c = np.array([-row[1], row[0]])
    c = c / c[1] * graph.a1
    tags = graph.vertex_region()
    return np.where(tags == Region.H1, c[0], c[1])


# eigensolver

def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100
                ) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with values sorted descending and the
    eigenvectors as orthonormal columns. Iterates until the off-diagonal
    Frobenius norm falls below ``tol * max(1, ||A||_F)``.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-14, rtol=0):
        raise ValueError("matrix must be symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    target = tol * max(1.0, float(np.linalg.norm(a)))
    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < target:
            break
        if sweep == max_sweeps:
            raise NoConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
        # early sweeps skip rotations that would barely help
        threshold = 0.2 * off / n ** 2 if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold or apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


def eigendecompose(sym: np.ndarray) -> list[SpectralPair]:
    values, vectors = jacobi_eigh(sym)
    return [SpectralPair(float(lam), vectors[:, k], "vertex") for k, lam in enumerate(values)]


# declination

@dataclass(frozen=True)
class ThetaResult:
    cos_numeric: float
    cos_asymptotic: float
    eigenvector: np.ndarray  # eigenvector f of W(eps), not W_sym
    cluster: tuple[float, ...]
    eigenvalues: np.ndarray

    @property
    def theta_numeric(self) -> float:
        return float(np.arccos(np.clip(self.cos_numeric, -1.0, 1.0)))

    @property
    def theta_asymptotic(self) -> float:
        return float(np.arccos(np.clip(self.cos_asymptotic, -1.0, 1.0)))

    @property
    def simple(self) -> bool:
        return len(self.cluster) == 1

    def require_simple(self) -> "ThetaResult":
        if not self.simple:
            raise DegenerateTopEigenvalueError(
                f"second eigenvalue {self.cos_numeric!r} is not simple: cluster {self.cluster}")
        return self


def asymptotic_cos_theta(a1: int, a2: int, epsilon: float) -> float:
    return 1.0 - (1.0 / a1 + 1.0 / a2) * epsilon


def theta(graph: BridgedGraph, epsilon: float) -> ThetaResult:
    """Second eigenvalue of ``W(eps)`` (largest below 1) and its eigenvector."""
    if epsilon <= 0:
        raise ValueError("theta needs epsilon > 0")
    values, vectors = jacobi_eigh(symmetrized_matrix(graph, epsilon))
    below = np.flatnonzero(values < 1.0 - EIGEN_ONE_TOL)
    if below[0] != 1:
        raise DegenerateTopEigenvalueError(
            f"eigenvalue 1 has multiplicity {below[0]} at epsilon={epsilon}")
    k = below[0]
    lam = float(values[k])
    cluster = tuple(float(x) for x in values[below] if abs(x - lam) <= CLUSTER_TOL)
    f = vectors[:, k] / np.sqrt(graph.out_weight(epsilon))
    h2 = graph.vertex_region() == Region.H2
    if f[h2].sum() < 0:
        f = -f
    return ThetaResult(lam, asymptotic_cos_theta(graph.a1, graph.a2, epsilon), f, cluster, values)


@dataclass(frozen=True)
class PerturbationReport:
    lambda1: float
    cos_theta_numeric: float
    cos_theta_asymptotic: float
    residual_ratio: float  # |numeric - asymptotic| / eps^2


def perturbation_report(graph: BridgedGraph, epsilon: float) -> PerturbationReport:
    th = theta(graph, epsilon)
    return PerturbationReport(
        lambda1=reduced_eigenvalue(graph),
        cos_theta_numeric=th.cos_numeric,
        cos_theta_asymptotic=th.cos_asymptotic,
        residual_ratio=abs(th.cos_numeric - th.cos_asymptotic) / epsilon ** 2,
    )


# lifts to arc space

def stationary_arc_vector(graph: BridgedGraph, epsilon: float) -> np.ndarray:
    """Exact eigenvalue-1 eigenvector of the walk: ``sqrt(w(a))``, normalized."""
    psi = np.sqrt(graph.weights(epsilon)).astype(complex)
    return psi / np.linalg.norm(psi)


def lift_to_arc(graph: BridgedGraph, epsilon: float, cos_theta: float, f: np.ndarray,
                check: bool = True) -> tuple[SpectralPair, SpectralPair] | SpectralPair:
    """Lift an eigenvector ``f`` of ``W(eps)`` to eigenvectors of the walk.

    For ``cos_theta`` strictly inside (-1, 1) returns the pair for
    ``e^{+i theta}`` and ``e^{-i theta}``; at ``+-1`` returns the single
    vector ``d* g``. Vectors are normalized. With ``check`` the input
    eigen-equation and the output residuals are verified.
    """
    f = np.asarray(f, dtype=float)
    if check:
        w = transition_matrix(graph, epsilon)
        res = np.linalg.norm(w @ f - cos_theta * f) / np.linalg.norm(f)
        if res > LIFT_RESIDUAL_TOL:
            raise EigenResidualTooLargeError(f"||W f - cos f|| / ||f|| = {res:.3e}")
    op = GroverOperator(graph, epsilon)
    g = np.sqrt(graph.out_weight(epsilon)) * f
    dg = op.boundary_adjoint(g).astype(complex)
    sin_theta = np.sqrt(max(1.0 - cos_theta * cos_theta, 0.0))
    if sin_theta < 1e-14:
        value = 1.0 if cos_theta > 0 else -1.0
        pairs = [(value, dg)]
    else:
        pairs = []
        for sign in (+1, -1):
            value = complex(cos_theta, sign * sin_theta)
            pairs.append((value, dg - value * op.apply_shift(dg)))
    out = []
    for value, psi in pairs:
        psi = psi / np.linalg.norm(psi)
        pair = SpectralPair(value, psi, "arc")
        if check:
            res = pair.residual(op.apply)
            if res > LIFT_RESIDUAL_TOL:
                raise EigenResidualTooLargeError(f"lift residual {res:.3e} for eigenvalue {value}")
        out.append(pair)
    return out[0] if len(out) == 1 else (out[0], out[1])


def approximate_lift(graph: BridgedGraph, cos_theta: float, f: np.ndarray,
                     sign: int = +1) -> np.ndarray:
    """Lift with unweighted degrees, accurate to first order in eps off the bridge.

    ``f`` is rescaled so that ``||D^{1/2} f|| = 1`` with ``D`` the
    unperturbed reversible measure, then
    ``psi(a) = (f(t(a)) - e^{i theta} f(o(a))) / (sqrt(2 (|A1|+|A2|)) |sin theta|)``.
    """
    f = np.asarray(f, dtype=float)
    f = f / np.sqrt(np.sum(unperturbed_measure(graph) * f * f))
    sin_theta = np.sqrt(1.0 - cos_theta ** 2)
    phase = complex(cos_theta, sign * sin_theta)
    scale = np.sqrt(2.0 * (graph.a1 + graph.a2)) * sin_theta
    return (f[graph.terminal] - phase * f[graph.origin]) / scale


def closed_form_stationary(graph: BridgedGraph) -> np.ndarray:
    """Constant ``1/sqrt(|A1|+|A2|)`` on non-bridge arcs, zero on the bridge."""
    psi = np.where(graph.region == Region.BRIDGE, 0.0, 1.0 / np.sqrt(graph.a1 + graph.a2))
    return psi.astype(complex)


def closed_form_oscillatory(graph: BridgedGraph, theta_value: float, sign: int = +1) -> np.ndarray:
    """Leading-order eigenvector for ``e^{+-i theta}`` on the non-bridge arcs.

    Proportional to ``-|A2|`` on arcs ending in V1 and ``|A1|`` on arcs
    ending in V2. Its norm is about ``1/sqrt(2)``: the exact eigenvector
    carries the other half of its weight on the two bridge arcs, which
    this form sets to zero.
    """
    a1, a2 = graph.a1, graph.a2
    phase = np.exp(1j * sign * theta_value)
    scale = (1.0 - phase) / (np.sqrt(2.0 * a1 * a2 * (a1 + a2)) * abs(np.sin(theta_value)))
    side = graph.vertex_region()[graph.terminal]
    psi = scale * np.where(side == Region.H1, -float(a2), float(a1))
    psi[graph.region == Region.BRIDGE] = 0.0
    return psi


# overlaps with the initial state

@dataclass(frozen=True)
class OverlapReport:
    stationary: float
    plus: float
    minus: float
    stationary_closed_form: float
    oscillatory_closed_form: float

    @property
    def total_sq(self) -> float:
        return self.stationary ** 2 + self.plus ** 2 + self.minus ** 2


def overlap_closed_forms(a1: int, a2: int) -> tuple[float, float]:
    return float(np.sqrt(a1 / (a1 + a2))), float(np.sqrt(a2 / (a1 + a2)) / np.sqrt(2.0))


def overlaps(graph: BridgedGraph, epsilon: float) -> OverlapReport:
    psi0 = initial_state(graph, epsilon).amplitudes
    th = theta(graph, epsilon).require_simple()
    plus, minus = lift_to_arc(graph, epsilon, th.cos_numeric, th.eigenvector)
    stat = stationary_arc_vector(graph, epsilon)
    c1, c2 = overlap_closed_forms(graph.a1, graph.a2)
    return OverlapReport(
        stationary=abs(np.vdot(stat, psi0)),
        plus=abs(np.vdot(plus.vector, psi0)),
        minus=abs(np.vdot(minus.vector, psi0)),
        stationary_closed_form=c1,
        oscillatory_closed_form=c2,
    )
