"""Optimal capacity-respecting assignment for a fixed closed set.

Evaluating a closure under hard capacities is a transportation problem:
unit-demand clients, integer-capacity open facilities, metric costs.  It is
solved exactly by successive shortest augmenting paths with potentials.
Clients with identical cost rows are aggregated into one source (the
optimum is unchanged; flows are expanded back to per-client assignments),
which keeps instances with large duplicated client groups cheap.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .instance import Instance, Solution

_BIG = 1 << 60
_REDUCED_COST_SLACK = 1e-9


@dataclass(frozen=True)
class TransportationProblem:
    """Cost submatrix and capacities of the open facilities after a closure."""

    open_facilities: tuple[int, ...]
    capacities: tuple[int, ...]
    costs: np.ndarray  # (num_clients, num_open)


def closure_feasible(inst: Instance, closed) -> bool:
    """True iff the facilities left open can absorb every client."""
    mask = np.zeros(inst.num_facilities, dtype=bool)
    for f in closed:
        if not 0 <= f < inst.num_facilities:
            raise ValueError(f"facility index {f} out of range")
        mask[f] = True
    caps = inst.effective_capacities()
    return int(caps[~mask].sum()) >= inst.num_clients


def build_transportation(inst: Instance, closed) -> TransportationProblem:
    mask = np.zeros(inst.num_facilities, dtype=bool)
    for f in closed:
        if not 0 <= f < inst.num_facilities:
            raise ValueError(f"facility index {f} out of range")
        mask[f] = True
    open_idx = np.nonzero(~mask)[0]
    caps = inst.effective_capacities()[open_idx]
    if int(caps.sum()) < inst.num_clients:
        raise InfeasibleError(
            f"closing {sorted(int(f) for f in closed)} leaves capacity "
            f"{int(caps.sum())} for {inst.num_clients} clients"
        )
    costs = np.array(inst.client_facility[:, open_idx], dtype=np.float64)
    return TransportationProblem(
        tuple(int(f) for f in open_idx), tuple(int(u) for u in caps), costs
    )


def _ssp_transport(
    cost: np.ndarray, demand: np.ndarray, capacity: np.ndarray
) -> np.ndarray:
    """Integral min-cost flows for grouped sources via successive shortest
    augmenting paths with potentials (all arc costs are non-negative, so
    Dijkstra works from the start)."""
    n_g, n_f = cost.shape
    n_nodes = n_g + n_f + 2
    source, sink = n_g + n_f, n_g + n_f + 1

    # edge arrays; edge i and i^1 are reverses of each other
    to: list[int] = []
    cap: list[int] = []
    cst: list[float] = []
    adj: list[list[int]] = [[] for _ in range(n_nodes)]

    def add_edge(u: int, v: int, c: int, w: float):
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        cst.append(w)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)
        cst.append(-w)

    for g in range(n_g):
        add_edge(source, g, int(demand[g]), 0.0)
    for g in range(n_g):
        for j in range(n_f):
            add_edge(g, n_g + j, _BIG, float(cost[g, j]))
    for j in range(n_f):
        add_edge(n_g + j, sink, int(capacity[j]), 0.0)

    pi = [0.0] * n_nodes
    need = int(demand.sum())
    pushed = 0
    while pushed < need:
        dist = [np.inf] * n_nodes
        prev_edge = [-1] * n_nodes
        dist[source] = 0.0
        heap = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for e in adj[u]:
                if cap[e] <= 0:
                    continue
                v = to[e]
                rc = cst[e] + pi[u] - pi[v]
                if rc < 0.0:  # floating slack only; anything larger is a bug
                    assert rc > -max(_REDUCED_COST_SLACK, 1e-6 * abs(cst[e])), rc
                    rc = 0.0
                if d + rc < dist[v]:
                    dist[v] = d + rc
                    prev_edge[v] = e
                    heapq.heappush(heap, (dist[v], v))
        if prev_edge[sink] < 0:
            raise InfeasibleError("transportation demand exceeds reachable capacity")
        d_sink = dist[sink]
        for v in range(n_nodes):
            pi[v] += min(dist[v], d_sink)
        bottleneck = need - pushed
        v = sink
        while v != source:
            e = prev_edge[v]
            bottleneck = min(bottleneck, cap[e])
            v = to[e ^ 1]
        v = sink
        while v != source:
            e = prev_edge[v]
            cap[e] -= bottleneck
            cap[e ^ 1] += bottleneck
            v = to[e ^ 1]
        pushed += bottleneck

    flow = np.zeros((n_g, n_f), dtype=np.int64)
    e = 2 * n_g  # group->facility edges start after the source edges
    for g in range(n_g):
        for j in range(n_f):
            flow[g, j] = cap[e ^ 1]  # reverse capacity == flow shipped
            e += 2
    return flow


def optimal_assignment(inst: Instance, closed) -> Solution:
    """Minimum-cost assignment of all clients to the open facilities,
    respecting every capacity.  Raises InfeasibleError when the closure
    leaves insufficient capacity."""
    closed_set = frozenset(int(f) for f in closed)
    tp = build_transportation(inst, closed_set)
    n = inst.num_clients
    if n == 0:
        return Solution(closed_set, {}, 0.0)

    rows = np.ascontiguousarray(tp.costs)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    demand = np.bincount(inverse, minlength=uniq.shape[0])
    capacity = np.asarray(tp.capacities, dtype=np.int64)
    flow = _ssp_transport(uniq, demand, capacity)

    remaining = flow.copy()
    fac_of_client = np.empty(n, dtype=np.int64)
    cursor = np.zeros(uniq.shape[0], dtype=np.int64)
    for c in range(n):
        g = inverse[c]
        j = cursor[g]
        while remaining[g, j] == 0:
            j += 1
        remaining[g, j] -= 1
        cursor[g] = j
        fac_of_client[c] = tp.open_facilities[j]

    cf = inst.client_facility
    cost = float(cf[np.arange(n), fac_of_client].sum())
    assignment = {int(c): int(fac_of_client[c]) for c in range(n)}
    return Solution(closed_set, assignment, cost)
