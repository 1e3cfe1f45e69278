"""Ground truth by exhaustive enumeration over all ell-subsets.

Intended for desk-scale instances; a subset budget guards against
accidental exponential blow-ups.  Ties break toward the lexicographically
smallest closed set.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import kernels
from .capacitated import closure_feasible, optimal_assignment
from .errors import BudgetError, InfeasibleError
from .instance import Instance, Solution
from .voronoi import make_solution

DEFAULT_SUBSET_BUDGET = 10**6


def _check_budget(inst: Instance, budget: int) -> None:
    required = math.comb(inst.num_facilities, inst.ell)
    if required > budget:
        raise BudgetError(required, budget)


def exact_uncapacitated(inst: Instance, budget: int = DEFAULT_SUBSET_BUDGET) -> Solution:
    """Minimum-cost closed set of size ell by full enumeration."""
    _check_budget(inst, budget)
    if inst.num_clients == 0:
        return make_solution(inst, tuple(range(inst.ell)))
    dcf = np.array(inst.client_facility, dtype=np.float64, order="C")
    closed, _ = kernels.exhaustive_best(dcf, inst.num_facilities, inst.ell)
    return make_solution(inst, closed)


def exact_capacitated(inst: Instance, budget: int = DEFAULT_SUBSET_BUDGET) -> Solution:
    """Minimum-cost feasible closure under capacities; skips closures whose
    remaining capacity cannot host all clients, and reports global
    infeasibility when none survives."""
    _check_budget(inst, budget)
    best: Solution | None = None
    for combo in itertools.combinations(range(inst.num_facilities), inst.ell):
        if not closure_feasible(inst, combo):
            continue
        sol = optimal_assignment(inst, combo)
        if best is None or sol.cost < best.cost:
            best = sol
    if best is None:
        raise InfeasibleError(
            f"every closure of {inst.ell} facilities lacks capacity for "
            f"{inst.num_clients} clients"
        )
    return best
