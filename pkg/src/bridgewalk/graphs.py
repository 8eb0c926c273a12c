"""Simple graphs, the bridged composition of two of them, and its arc structure.

Vertices of the composed graph are numbered ``0 .. n1-1`` for the first
graph and ``n1 .. n1+n2-1`` for the second. Every undirected edge is stored
as two opposite arcs. The global arc list holds the arcs of the first graph
(sorted by ``(origin, terminal)``), then those of the second, then the two
bridge arcs ``xi1 -> xi2`` and ``xi2 -> xi1``.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

MAX_RANDOM_RETRIES = 100


class GraphError(ValueError):
    """Base class for invalid graph input."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


class NoEdgesError(GraphError):
    pass


class TooSmallError(GraphError):
    pass


class RandomDisconnectedAfterRetriesError(GraphError):
    pass


class BadBoundaryVertexError(GraphError):
    pass


class Region(enum.IntEnum):
    H1 = 0
    H2 = 1
    BRIDGE = 2


@dataclass(frozen=True)
class SimpleGraph:
    """Connected simple undirected graph with at least one edge.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``, sorted.
    Build instances through :func:`build_simple_graph` or the generators.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def arc_count(self) -> int:
        return 2 * len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = 1
        return adj


def _is_connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == n


def build_simple_graph(vertex_count: int, edge_list: Iterable[tuple[int, int]],
                       name: str = "") -> SimpleGraph:
    """Validate an edge list and return the corresponding :class:`SimpleGraph`.

    Raises one of the :class:`GraphError` subclasses for self-loops,
    repeated edges, an empty edge set or a disconnected graph.
    """
    if vertex_count < 1:
        raise TooSmallError(f"vertex_count must be positive, got {vertex_count}")
    seen: set[tuple[int, int]] = set()
    for raw in edge_list:
        u, v = (int(x) for x in raw)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{vertex_count - 1}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"edge {key} listed twice")
        seen.add(key)
    if not seen:
        raise NoEdgesError("graph has no edges")
    if not _is_connected(vertex_count, seen):
        raise DisconnectedError("graph is not connected")
    return SimpleGraph(vertex_count, tuple(sorted(seen)), name)


def complete_graph(n: int) -> SimpleGraph:
    if n < 2:
        raise TooSmallError("complete graph needs n >= 2")
    return build_simple_graph(n, itertools.combinations(range(n), 2), f"K{n}")


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise TooSmallError("cycle graph needs n >= 3")
    return build_simple_graph(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def path_graph(n: int) -> SimpleGraph:
    if n < 2:
        raise TooSmallError("path graph needs n >= 2")
    return build_simple_graph(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def star_graph(n: int) -> SimpleGraph:
    """Star on ``n`` vertices with centre 0."""
    if n < 2:
        raise TooSmallError("star graph needs n >= 2")
    return build_simple_graph(n, [(0, i) for i in range(1, n)], f"S{n}")


def random_graph(n: int, p: float, seed: int) -> SimpleGraph:
    """Connected Erdos-Renyi G(n, p) sample, redrawn until connected.

    All draws come from one generator seeded with ``seed`` so the result is
    reproducible. Gives up after ``MAX_RANDOM_RETRIES`` attempts.
    """
    if n < 2:
        raise TooSmallError("random graph needs n >= 2")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(MAX_RANDOM_RETRIES):
        keep = rng.random(len(pairs)) < p
        edges = [e for e, k in zip(pairs, keep) if k]
        if edges and _is_connected(n, edges):
            return build_simple_graph(n, edges, f"G({n},{p},{seed})")
    raise RandomDisconnectedAfterRetriesError(
        f"no connected G({n}, {p}) sample in {MAX_RANDOM_RETRIES} attempts (seed {seed})")


def read_edge_list(path: str | Path) -> SimpleGraph:
    """Read a whitespace-separated edge list; ``#`` lines are comments."""
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected two vertex ids, got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    if not edges:
        raise NoEdgesError(f"{path}: no edges")
    n = max(max(e) for e in edges) + 1
    return build_simple_graph(n, edges, Path(path).stem)


def write_edge_list(graph: SimpleGraph, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {graph.name or 'graph'}: {graph.vertex_count} vertices\n")
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")


def parse_graph_spec(spec: str, default_seed: int | None = None) -> SimpleGraph:
    """Build a graph from a descriptor such as ``complete:5`` or ``file:g.txt``.

    Recognized forms: ``complete:N``, ``cycle:N``, ``path:N``, ``star:N``,
    ``random:N:P[:SEED]`` and ``file:PATH``. A random descriptor without a
    seed uses ``default_seed`` (0 when that is None as well).
    """
    kind, _, rest = spec.strip().partition(":")
    kind = kind.lower()
    if not rest:
        raise GraphError(f"malformed graph descriptor {spec!r}")
    if kind == "file":
        return read_edge_list(rest)
    args = rest.split(":")
    try:
        if kind in ("complete", "cycle", "path", "star"):
            if len(args) != 1:
                raise GraphError(f"{kind} takes one argument, got {spec!r}")
            n = int(args[0])
            return {"complete": complete_graph, "cycle": cycle_graph,
                    "path": path_graph, "star": star_graph}[kind](n)
        if kind == "random":
            if len(args) not in (2, 3):
                raise GraphError(f"random takes N:P[:SEED], got {spec!r}")
            seed = int(args[2]) if len(args) == 3 else (default_seed or 0)
            return random_graph(int(args[0]), float(args[1]), seed)
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"malformed graph descriptor {spec!r}: {exc}") from None
    raise GraphError(f"unknown graph family {kind!r} in {spec!r}")


@dataclass(frozen=True)
class BridgedGraph:
    """Two simple graphs joined by the single bridge ``{xi1, xi2}``.

    ``xi1`` and ``xi2`` are the local vertex ids inside ``h1`` and ``h2``;
    ``boundary`` gives them in global numbering. Arc data are stored as
    parallel integer arrays indexed by the global arc id.
    """

    h1: SimpleGraph
    h2: SimpleGraph
    xi1: int
    xi2: int
    origin: np.ndarray = field(repr=False)
    terminal: np.ndarray = field(repr=False)
    reverse: np.ndarray = field(repr=False)
    region: np.ndarray = field(repr=False)
    deg: np.ndarray = field(repr=False)

    @property
    def vertex_count(self) -> int:
        return self.h1.vertex_count + self.h2.vertex_count

    @property
    def arc_count(self) -> int:
        return len(self.origin)

    @property
    def a1(self) -> int:
        return self.h1.arc_count

    @property
    def a2(self) -> int:
        return self.h2.arc_count

    @property
    def boundary(self) -> tuple[int, int]:
        return self.xi1, self.h1.vertex_count + self.xi2

    @property
    def bridge_arcs(self) -> tuple[int, int]:
        return self.arc_count - 2, self.arc_count - 1

    def vertex_region(self) -> np.ndarray:
        """Region tag (H1 or H2) of every global vertex."""
        tags = np.full(self.vertex_count, Region.H2, dtype=np.int64)
        tags[: self.h1.vertex_count] = Region.H1
        return tags

    def is_bridge(self, arc: int) -> bool:
        return self.region[arc] == Region.BRIDGE

    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.origin.tolist(), self.terminal.tolist()))

    def out_weight(self, epsilon: float) -> np.ndarray:
        """Total outgoing weight ``m(x)`` of every vertex."""
        m = self.deg.astype(float)
        for x in self.boundary:
            m[x] += epsilon
        return m

    def weights(self, epsilon: float) -> np.ndarray:
        """Arc weights: 1 off the bridge, ``epsilon`` on both bridge arcs."""
        w = np.ones(self.arc_count)
        w[self.region == Region.BRIDGE] = epsilon
        return w

    def transition_probs(self, epsilon: float) -> np.ndarray:
        """``p(a) = w(a) / m(o(a))`` for every arc."""
        return self.weights(epsilon) / self.out_weight(epsilon)[self.origin]


def bridge_graphs(h1: SimpleGraph, xi1: int, h2: SimpleGraph, xi2: int) -> BridgedGraph:
    if not 0 <= xi1 < h1.vertex_count:
        raise BadBoundaryVertexError(f"xi1={xi1} is not a vertex of {h1.name or 'h1'}")
    if not 0 <= xi2 < h2.vertex_count:
        raise BadBoundaryVertexError(f"xi2={xi2} is not a vertex of {h2.name or 'h2'}")
    off = h1.vertex_count
    arcs: list[tuple[int, int, int]] = []
    for graph, shift, tag in ((h1, 0, Region.H1), (h2, off, Region.H2)):
        pairs = sorted([(u + shift, v + shift) for u, v in graph.edges]
                       + [(v + shift, u + shift) for u, v in graph.edges])
        arcs.extend((o, t, tag) for o, t in pairs)
    b1, b2 = xi1, off + xi2
    arcs.append((b1, b2, Region.BRIDGE))
    arcs.append((b2, b1, Region.BRIDGE))

    origin = np.array([a[0] for a in arcs], dtype=np.int64)
    terminal = np.array([a[1] for a in arcs], dtype=np.int64)
    region = np.array([a[2] for a in arcs], dtype=np.int64)
    index = {(o, t): i for i, (o, t, _) in enumerate(arcs)}
    reverse = np.array([index[(t, o)] for o, t, _ in arcs], dtype=np.int64)
    deg = np.concatenate([h1.degrees(), h2.degrees()])
    for arr in (origin, terminal, region, reverse, deg):
        arr.setflags(write=False)
    return BridgedGraph(h1, h2, xi1, xi2, origin, terminal, reverse, region, deg)


def weight(graph: BridgedGraph, arc: int, epsilon: float) -> float:
    return epsilon if graph.is_bridge(arc) else 1.0


def transition_prob(graph: BridgedGraph, arc: int, epsilon: float) -> float:
    x = int(graph.origin[arc])
    m = graph.deg[x] + (epsilon if x in graph.boundary else 0.0)
    return weight(graph, arc, epsilon) / m
