"""Shared fixtures and independent brute-force oracles for the test suite.

The oracles here deliberately avoid the library's solver paths: costs are
recomputed with plain loops so that library bugs cannot hide behind shared
code.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from colmedian import Instance, from_euclidean_points


@pytest.fixture
def e1() -> Instance:
    """Line fixture: facilities at 0, 1, 5; clients at 0.4, 4.8; ell = 1."""
    return from_euclidean_points([[0.0], [1.0], [5.0]], [[0.4], [4.8]], 1)


@pytest.fixture
def e2() -> Instance:
    """Plane fixture used for the required-set trace."""
    return from_euclidean_points(
        [[0.0, 0.0], [0.0, 0.3], [0.1, 0.0]], [[0.0, 0.14]], 1
    )


def random_metric_instance(
    rng: np.random.Generator,
    facilities: int,
    clients: int,
    ell: int,
    low: float = 0.05,
    high: float = 1.0,
) -> Instance:
    """Random symmetric weights pushed through their shortest-path closure."""
    size = facilities + clients
    raw = rng.uniform(low, high, size=(size, size))
    raw = (raw + raw.T) / 2.0
    np.fill_diagonal(raw, 0.0)
    dist = raw.copy()
    for k in range(size):
        np.minimum(dist, dist[:, k][:, None] + dist[k, :][None, :], out=dist)
    return Instance(facilities, clients, dist, ell)


def brute_force_cost(inst: Instance, closed) -> float:
    """Nearest-open scan with plain Python loops; the reference cost."""
    closed = set(closed)
    total = 0.0
    m = inst.num_facilities
    for c in range(inst.num_clients):
        best = math.inf
        for f in range(m):
            if f in closed:
                continue
            d = float(inst.dist[m + c, f])
            if d < best:
                best = d
        total += best
    return total


def brute_force_optimum(inst: Instance) -> tuple[float, tuple[int, ...]]:
    """Exhaustive optimum over all ell-subsets, lexicographic tie-break."""
    best_cost, best = math.inf, None
    for combo in itertools.combinations(range(inst.num_facilities), inst.ell):
        cost = brute_force_cost(inst, combo)
        if cost < best_cost:
            best_cost, best = cost, combo
    return best_cost, best


def brute_force_capacitated(inst: Instance, closed) -> float:
    """Exhaustive minimum over every capacity-respecting assignment."""
    closed = set(closed)
    open_idx = [f for f in range(inst.num_facilities) if f not in closed]
    caps = inst.effective_capacities()
    m = inst.num_facilities
    n = inst.num_clients
    best = math.inf

    def recurse(c: int, used: list[int], acc: float):
        nonlocal best
        if acc >= best:
            return
        if c == n:
            best = acc
            return
        for j, f in enumerate(open_idx):
            if used[j] < caps[f]:
                used[j] += 1
                recurse(c + 1, used, acc + float(inst.dist[m + c, f]))
                used[j] -= 1

    recurse(0, [0] * len(open_idx), 0.0)
    return best


def max_independent_set_at_least(edges, num_vertices: int, ell: int) -> bool:
    """Does the graph contain an independent set of the given size?"""
    edge_set = {frozenset(e) for e in edges}
    for combo in itertools.combinations(range(num_vertices), ell):
        if all(frozenset(p) not in edge_set for p in itertools.combinations(combo, 2)):
            return True
    return False


def correct_partitions(inst, vor, opt_closed, eps):
    """Every (A, B) facility split with the optimum inside A and its
    support inside B; the remaining facilities swing both ways."""
    from colmedian import epsilon_support

    m = inst.num_facilities
    sup = epsilon_support(inst, vor, opt_closed, eps).members
    free = sorted(set(range(m)) - set(opt_closed) - sup)
    for bits in range(1 << len(free)):
        a = set(opt_closed)
        for i, x in enumerate(free):
            if bits >> i & 1:
                a.add(x)
        yield a, set(range(m)) - a


def random_connected_graph(rng: np.random.Generator, num_vertices: int):
    """Uniform spanning tree skeleton plus random extra edges."""
    edges = set()
    nodes = list(rng.permutation(num_vertices))
    for i in range(1, num_vertices):
        j = int(rng.integers(0, i))
        u, v = int(nodes[i]), int(nodes[j])
        edges.add((min(u, v), max(u, v)))
    extra = int(rng.integers(0, num_vertices + 1))
    for _ in range(extra):
        u, v = rng.choice(num_vertices, size=2, replace=False)
        u, v = int(min(u, v)), int(max(u, v))
        edges.add((u, v))
    return tuple(sorted(edges))
