"""Structured instance generators with known optimal-cost laws.

Two constructions:

* independent_set_reduction: facilities are the graph's vertices, one client
  sits in the middle of each edge (distance 1 to both endpoints); the metric
  is the shortest-path metric of that subdivision.  The optimum equals the
  edge count exactly when the graph has an independent set of the requested
  size, which makes these instances sharp solver benchmarks.

* coverage_reduction: a capacitated instance built from a set system.  Each
  subset gets a zero-distance facility serving its own block of clients,
  each universe element gets a facility with one spare seat; closing k
  subset-facilities costs |covered| + 3*|uncovered| whenever the closed
  subset sizes sum to the universe size (in particular under the equal-size
  promise), so coverage quality is readable straight off the cost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import FormatError, ParameterError
from .instance import Instance, Solution


def metric_closure(weights: np.ndarray) -> np.ndarray:
    """Min-plus (Floyd-Warshall) closure of a symmetric weight matrix.

    Unlike the csgraph dense path, explicit zero-weight edges are kept
    (the coverage construction relies on them); np.inf marks a non-edge.
    """
    dist = np.array(weights, dtype=np.float64)
    np.fill_diagonal(dist, 0.0)
    for k in range(dist.shape[0]):
        np.minimum(dist, dist[:, k][:, None] + dist[k, :][None, :], out=dist)
    return dist


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are canonicalized (u < v), no loops."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        canon = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ParameterError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParameterError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class CoverageInstance:
    """A set system (universe, subsets) with a selection size k."""

    universe_size: int
    subsets: tuple[frozenset[int], ...]
    k: int

    def __post_init__(self):
        subs = tuple(frozenset(int(x) for x in s) for s in self.subsets)
        for i, s in enumerate(subs):
            if any(not 0 <= x < self.universe_size for x in s):
                raise ParameterError(f"subset {i} has out-of-universe elements")
        object.__setattr__(self, "subsets", subs)
        if not 0 <= self.k <= len(subs):
            raise ParameterError("k must be between 0 and the number of subsets")

    @property
    def has_equal_size_promise(self) -> bool:
        """True when all subsets share size universe/k (the regime in which
        the closed-form cost law holds for every selection)."""
        if self.k == 0 or not self.subsets:
            return False
        sizes = {len(s) for s in self.subsets}
        return len(sizes) == 1 and sizes.pop() * self.k == self.universe_size


def graph_is_connected(g: Graph) -> bool:
    if g.num_vertices <= 1:
        return True
    rows = [u for u, v in g.edges] + [v for u, v in g.edges]
    cols = [v for u, v in g.edges] + [u for u, v in g.edges]
    adj = csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(g.num_vertices, g.num_vertices)
    )
    return connected_components(adj, directed=False, return_labels=False) == 1


def independent_set_reduction(g: Graph, ell: int) -> Instance:
    """Instance whose optimum is num_edges iff the graph has an independent
    set of size ell (each doubly-orphaned edge pays 3 instead of 1).

    Disconnected graphs are accepted; cross-component distances get the
    finite sentinel 2*(V+E)+1, which preserves metric validity.
    """
    if not 0 <= ell <= g.num_vertices:
        raise ParameterError(
            f"ell={ell} out of range for a graph with {g.num_vertices} vertices"
        )
    nv, ne = g.num_vertices, g.num_edges
    size = nv + ne
    rows, cols = [], []
    for e, (u, v) in enumerate(g.edges):
        mid = nv + e
        rows += [u, mid, v, mid]
        cols += [mid, u, mid, v]
    adj = csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(size, size)
    )
    dist = shortest_path(adj, method="D", directed=False, unweighted=True)
    sentinel = 2 * (nv + ne) + 1
    dist[~np.isfinite(dist)] = sentinel
    np.fill_diagonal(dist, 0.0)
    return Instance(nv, ne, dist, ell)


def coverage_reduction(cov: CoverageInstance) -> Instance:
    """Capacitated instance: one facility per subset (capacity = its size),
    one facility per element (capacity = universe+2), the subset's clients
    co-located with it, universe+1 clients pinned to each element facility.
    Distances between same-kind points come from the shortest-path closure
    of the declared client-facility table (0/1/2/3 pattern)."""
    n_sets = len(cov.subsets)
    u_size = cov.universe_size
    m = n_sets + u_size
    set_sizes = [len(s) for s in cov.subsets]
    n_clients = sum(set_sizes) + u_size * (u_size + 1)
    size = m + n_clients

    cf = np.empty((n_clients, m))
    c = 0
    for i, subset in enumerate(cov.subsets):
        row = np.empty(m)
        for i2 in range(n_sets):
            row[i2] = 0.0 if i2 == i else 2.0
        for u in range(u_size):
            row[n_sets + u] = 1.0 if u in subset else 3.0
        for _ in range(set_sizes[i]):
            cf[c] = row
            c += 1
    for u in range(u_size):
        row = np.empty(m)
        for i in range(n_sets):
            row[i] = 1.0 if u in cov.subsets[i] else 3.0
        for u2 in range(u_size):
            row[n_sets + u2] = 0.0 if u2 == u else 2.0
        for _ in range(u_size + 1):
            cf[c] = row
            c += 1

    dense = np.full((size, size), np.inf)
    np.fill_diagonal(dense, 0.0)
    dense[m:, :m] = cf
    dense[:m, m:] = cf.T
    dist = metric_closure(dense)

    capacities = tuple(set_sizes) + tuple([u_size + 2] * u_size)
    return Instance(m, n_clients, dist, cov.k, capacities)


def set_facility_indices(cov: CoverageInstance) -> range:
    """Facility indices of the subset facilities (they come first)."""
    return range(len(cov.subsets))


def element_facility_index(cov: CoverageInstance, u: int) -> int:
    return len(cov.subsets) + u


def extract_coverage_solution(sol: Solution, cov: CoverageInstance) -> list[int]:
    """Subset indices selected by a closure of subset facilities only."""
    n_sets = len(cov.subsets)
    for f in sol.closed:
        if f >= n_sets:
            raise ValueError(
                f"closed set contains element facility {f}; such closures "
                "are capacity-infeasible and carry no selection"
            )
    return sorted(int(f) for f in sol.closed)


# -- text formats -------------------------------------------------------------
#
#   graph <n> <m>          |   coverage <universe> <n> <k>
#   u v        (m lines)   |   e1 e2 ...   (n lines, 0-based elements)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_graph(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty graph input", 1)
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 3 or tokens[0] != "graph":
        raise FormatError("expected 'graph <vertices> <edges>'", lineno)
    try:
        nv, ne = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise FormatError("vertex/edge counts must be integers", lineno) from None
    if len(lines) - 1 != ne:
        raise FormatError(
            f"expected {ne} edge lines, found {len(lines) - 1}", lineno
        )
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("edge line must be 'u v'", lineno)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError("edge endpoints must be integers", lineno) from None
    try:
        return Graph(nv, tuple(edges))
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc


def format_graph(g: Graph) -> str:
    lines = [f"graph {g.num_vertices} {g.num_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_coverage(text: str) -> CoverageInstance:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty coverage input", 1)
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 4 or tokens[0] != "coverage":
        raise FormatError("expected 'coverage <universe> <subsets> <k>'", lineno)
    try:
        u_size, n_sets, k = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError:
        raise FormatError("coverage header values must be integers", lineno) from None
    if len(lines) - 1 != n_sets:
        raise FormatError(
            f"expected {n_sets} subset lines, found {len(lines) - 1}", lineno
        )
    subsets = []
    for lineno, line in lines[1:]:
        try:
            subsets.append(frozenset(int(t) for t in line.split()))
        except ValueError:
            raise FormatError("subset elements must be integers", lineno) from None
    try:
        return CoverageInstance(u_size, tuple(subsets), k)
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc


def format_coverage(cov: CoverageInstance) -> str:
    lines = [f"coverage {cov.universe_size} {len(cov.subsets)} {cov.k}"]
    lines += [" ".join(str(x) for x in sorted(s)) for s in cov.subsets]
    return "\n".join(lines) + "\n"
