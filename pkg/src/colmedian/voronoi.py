"""Voronoi cells and the cost accounting every solver builds on.

Cells never depend on which facilities are closed, so the diagram is built
once per instance and shared read-only.  All ties (nearest facility,
nearest open facility) break toward the smaller facility index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .instance import Instance, Solution


@dataclass(frozen=True)
class VoronoiDiagram:
    """Per-facility client cells and their costs.

    cell_clients/cell_start form a CSR layout of the cells (clients sorted
    ascending within each cell) that the compiled kernels consume directly.
    """

    cell_of_client: np.ndarray          # (n,) int64: owning facility per client
    cells: tuple[tuple[int, ...], ...]  # per-facility client tuples
    cell_cost: np.ndarray               # (m,) float64
    cell_clients: np.ndarray            # (n,) int64, grouped by facility
    cell_start: np.ndarray              # (m+1,) int64 offsets into cell_clients

    @property
    def total_cell_cost(self) -> float:
        return float(self.cell_cost.sum())


def build_voronoi(inst: Instance) -> VoronoiDiagram:
    """Assign each client to its nearest facility (index tie-break)."""
    m, n = inst.num_facilities, inst.num_clients
    cf = inst.client_facility
    if n:
        owner = cf.argmin(axis=1).astype(np.int64)   # argmin returns first minimum
        chosen = cf[np.arange(n), owner]
    else:
        owner = np.empty(0, dtype=np.int64)
        chosen = np.empty(0)
    cost = np.bincount(owner, weights=chosen, minlength=m).astype(np.float64)
    cells = tuple(
        tuple(int(c) for c in np.nonzero(owner == f)[0]) for f in range(m)
    )
    order = np.argsort(owner, kind="stable").astype(np.int64)
    start = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=m), out=start[1:])
    for a in (owner, cost, order, start):
        a.setflags(write=False)
    return VoronoiDiagram(owner, cells, cost, order, start)


def _closed_mask(inst: Instance, closed) -> np.ndarray:
    mask = np.zeros(inst.num_facilities, dtype=bool)
    for f in closed:
        if not 0 <= f < inst.num_facilities:
            raise ValueError(f"facility index {f} out of range")
        mask[f] = True
    return mask


def solution_cost(inst: Instance, closed) -> tuple[float, dict[int, int]]:
    """Cost and assignment of closing ``closed``: every client moves to its
    nearest open facility (the unique uncapacitated assignment)."""
    mask = _closed_mask(inst, closed)
    n = inst.num_clients
    if n == 0:
        return 0.0, {}
    open_idx = np.nonzero(~mask)[0]
    if open_idx.size == 0:
        raise InfeasibleError("all facilities closed while clients remain")
    sub = inst.client_facility[:, open_idx]
    pos = sub.argmin(axis=1)
    dists = sub[np.arange(n), pos]
    assignment = {int(c): int(open_idx[p]) for c, p in enumerate(pos)}
    return float(dists.sum()), assignment


def make_solution(inst: Instance, closed) -> Solution:
    """Solution record for a closed set, cost recomputed from scratch."""
    cost, assignment = solution_cost(inst, closed)
    return Solution(frozenset(int(f) for f in closed), assignment, cost)


def rerouted_cost(
    inst: Instance, vor: VoronoiDiagram, closed, f: int, g: int
) -> float:
    """Total distance paid by cell-of-f clients that end up at g after
    closing ``closed``.  Requires f closed and g open."""
    mask = _closed_mask(inst, closed)
    if not mask[f]:
        raise ValueError(f"facility {f} must be closed")
    if mask[g]:
        raise ValueError(f"facility {g} must be open")
    cell = np.asarray(vor.cells[f], dtype=np.int64)
    if cell.size == 0:
        return 0.0
    open_idx = np.nonzero(~mask)[0]
    sub = inst.client_facility[np.ix_(cell, open_idx)]
    pos = sub.argmin(axis=1)
    hit = open_idx[pos] == g
    return float(sub[np.arange(cell.size), pos][hit].sum())


def delta(inst: Instance, vor: VoronoiDiagram, closed) -> float:
    """Cost increase caused by closing ``closed``:
    sum over closed cells of the rerouted distances minus those cells' costs.
    Satisfies solution_cost(closed) = total_cell_cost + delta(closed)."""
    mask = _closed_mask(inst, closed)
    closed_idx = np.nonzero(mask)[0]
    if inst.num_clients == 0 or closed_idx.size == 0:
        return 0.0
    open_idx = np.nonzero(~mask)[0]
    if open_idx.size == 0:
        raise InfeasibleError("all facilities closed while clients remain")
    moved = np.isin(vor.cell_of_client, closed_idx)
    if not moved.any():
        return 0.0
    sub = inst.client_facility[np.ix_(np.nonzero(moved)[0], open_idx)]
    rerouted = float(sub.min(axis=1).sum())
    return rerouted - float(vor.cell_cost[closed_idx].sum())
