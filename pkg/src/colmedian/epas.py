"""The (1+eps) approximation scheme for closing ell facilities.

The solver never guesses the optimum directly.  A greedy witness brackets
its value; a geometric sweep proposes scale guesses D; partition hints
(random biased coins, or the deterministic covering family) split the
facilities into a candidate side A and a support side B.  For each
(partition, D) pair a required-set greedy proposes an ell-subset of A to
close, and the cheapest true cost over all proposals (witness included)
wins.  Whenever some hint places the optimal closed set inside A and its
support inside B, and the guess D brackets the optimal cost, the proposal
is within (1+eps) of optimal -- the tests exercise exactly that contract.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InfeasibleError, ParameterError
from .instance import Instance, Solution
from .partitions import FamilyParams, deterministic_family, support_bound_for
from .voronoi import VoronoiDiagram, build_voronoi, make_solution, solution_cost

_RANDOM_BATCH = 65_536


@dataclass(frozen=True)
class RequiredSet:
    """Facilities forced closed alongside an anchor under a partition hint."""

    anchor: int
    members: frozenset[int]
    nearest_b_distance: float
    marginal_cost: float  # inf when the set outgrew ell


@dataclass(frozen=True)
class SupportSet:
    """Open facilities relevant to a closed set: nearest-open targets plus
    heavy rerouting destinations."""

    solution: frozenset[int]
    members: frozenset[int]
    epsilon: float


@dataclass(frozen=True)
class GuessWindow:
    """One scale guess D; the window [D, 2D] is where it is trusted."""

    d_value: float
    lower: float
    upper: float


@dataclass
class SolveStats:
    partitions_evaluated: int = 0
    windows: int = 0
    candidates: int = 0
    backend: str = field(default_factory=lambda: kernels.BACKEND)


# -- supports and required sets ----------------------------------------------


def epsilon_support(inst: Instance, vor: VoronoiDiagram, closed, eps: float) -> SupportSet:
    """The support of a closed set: for each closed f its nearest open
    facility (index tie-break), plus every open g that receives more than
    eps*cost/(6*ell^2) of rerouted cost from some closed cell."""
    if eps <= 0:
        raise ParameterError("eps must be positive")
    closed_set = frozenset(int(f) for f in closed)
    ell = len(closed_set)
    m = inst.num_facilities
    if any(not 0 <= f < m for f in closed_set):
        raise ValueError("closed set contains an out-of-range facility index")
    mask = np.zeros(m, dtype=bool)
    mask[list(closed_set)] = True
    open_idx = np.nonzero(~mask)[0]
    if ell == 0:
        return SupportSet(closed_set, frozenset(), eps)
    if open_idx.size == 0:
        raise InfeasibleError("closed set leaves no facility open")

    cost, _ = solution_cost(inst, closed_set)
    threshold = eps * cost / (6.0 * ell * ell)
    members: set[int] = set()
    dff = inst.facility_facility
    cf = inst.client_facility
    for f in sorted(closed_set):
        members.add(int(open_idx[dff[f, open_idx].argmin()]))
        cell = np.asarray(vor.cells[f], dtype=np.int64)
        if cell.size == 0:
            continue
        sub = cf[np.ix_(cell, open_idx)]
        pos = sub.argmin(axis=1)
        moved = sub[np.arange(cell.size), pos]
        acc = np.bincount(pos, weights=moved, minlength=open_idx.size)
        members.update(int(open_idx[j]) for j in np.nonzero(acc > threshold)[0])
    return SupportSet(closed_set, frozenset(members), eps)


def _check_partition(inst: Instance, a_side, b_side) -> tuple[set[int], set[int]]:
    a = {int(x) for x in a_side}
    b = {int(x) for x in b_side}
    if a & b:
        raise ValueError("partition sides overlap")
    if a | b != set(range(inst.num_facilities)):
        raise ValueError("partition must cover every facility")
    return a, b


def compute_required_set(
    inst: Instance,
    vor: VoronoiDiagram,
    a_side,
    b_side,
    f: int,
    eps: float,
    ell: int,
    d_guess: float,
) -> RequiredSet:
    """Grow the anchor f's required set under the hint (A, B) and guess D.

    Start from every A-facility strictly closer to f than the nearest
    B-facility; while some open A-facility attracts more than
    eps*D/(3*ell^2) of rerouted cost from f's cell, close the
    smallest-index offender.  The marginal cost charges f's cell the
    increase caused by closing the final set, or infinity once the set has
    more than ell members.
    """
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    if eps <= 0:
        raise ParameterError("eps must be positive")
    a, b = _check_partition(inst, a_side, b_side)
    if not b:
        raise ValueError("nearest-B distance is undefined for an empty B side")
    if f not in a:
        raise ValueError(f"anchor {f} must lie on the A side")

    m = inst.num_facilities
    dff = inst.facility_facility
    a_idx = np.fromiter(sorted(a), dtype=np.int64, count=len(a))
    b_idx = np.fromiter(sorted(b), dtype=np.int64, count=len(b))
    s_f = float(dff[f, b_idx].min())
    in_r = np.zeros(m, dtype=bool)
    in_r[a_idx[dff[f, a_idx] < s_f]] = True
    in_r[f] = True
    threshold = eps * d_guess / (3.0 * ell * ell)
    cell = np.asarray(vor.cells[f], dtype=np.int64)
    rows = inst.client_facility[cell] if cell.size else None

    while True:
        if cell.size:
            masked = np.where(in_r[None, :], np.inf, rows)
            dest = masked.argmin(axis=1)
            moved = masked[np.arange(cell.size), dest]
            acc = np.bincount(dest, weights=moved, minlength=m)
            total = float(moved.sum())
        else:
            acc = np.zeros(m)
            total = 0.0
        over = a_idx[~in_r[a_idx] & (acc[a_idx] > threshold)]
        if over.size == 0:
            break
        in_r[int(over[0])] = True

    members = frozenset(int(g) for g in np.nonzero(in_r)[0])
    marginal = math.inf if len(members) > ell else total - float(vor.cell_cost[f])
    return RequiredSet(int(f), members, s_f, marginal)


# -- per-partition solver -----------------------------------------------------


def _solver_arrays(inst: Instance, vor: VoronoiDiagram):
    dcf = np.array(inst.client_facility, dtype=np.float64, order="C")
    dff = np.array(inst.facility_facility, dtype=np.float64, order="C")
    return dcf, dff, vor.cell_start, vor.cell_clients, vor.cell_cost


def solve_given_partition(
    inst: Instance,
    vor: VoronoiDiagram,
    a_side,
    b_side,
    d_guess: float,
    eps: float,
    ell: int,
) -> Solution | None:
    """Best closed set consistent with one hint, or None when the hint
    cannot host ell closures (an expected outcome, not an error)."""
    if eps <= 0:
        raise ParameterError("eps must be positive")
    a, b = _check_partition(inst, a_side, b_side)
    if ell == 0:
        return make_solution(inst, ())
    if not b or len(a) < ell:
        return None
    a_idx = np.fromiter(sorted(a), dtype=np.int64, count=len(a))
    b_idx = np.fromiter(sorted(b), dtype=np.int64, count=len(b))
    ok, closed, _ = kernels.evaluate_partition(
        *_solver_arrays(inst, vor), a_idx, b_idx, float(eps), int(ell), float(d_guess)
    )
    if not ok:
        return None
    return make_solution(inst, closed)


def cost_bounds(inst: Instance, vor: VoronoiDiagram) -> tuple[float, float, Solution]:
    """(lower, upper, witness): the all-open cost is a valid lower bound;
    the witness closes ell facilities one at a time, each step picking the
    closure that increases the current cost least (ties toward low index)."""
    lower = vor.total_cell_cost
    m, ell = inst.num_facilities, inst.ell
    mask = np.zeros(m, dtype=bool)
    for _ in range(ell):
        best_cost, best_f = None, None
        for f in range(m):
            if mask[f]:
                continue
            mask[f] = True
            cost, _ = solution_cost(inst, np.nonzero(mask)[0])
            mask[f] = False
            if best_cost is None or cost < best_cost:
                best_cost, best_f = cost, f
        mask[best_f] = True
    witness = make_solution(inst, np.nonzero(mask)[0])
    return lower, witness.cost, witness


def guess_windows(lower: float, upper: float, d_min: float) -> list[GuessWindow]:
    """Geometric guesses D = upper, upper/2, ... down past max(lower, d_min/2).

    Any positive achievable cost lies in [max(lower, d_min), upper], so the
    emitted [D, 2D] windows jointly bracket every possible optimum.
    """
    if upper <= 0:
        return []
    if d_min <= 0 and lower <= 0:
        raise ParameterError("a positive upper bound needs a positive d_min or lower bound")
    floor = max(lower, d_min / 2.0)
    windows = []
    d = float(upper)
    while True:
        windows.append(GuessWindow(d, d, 2.0 * d))
        if d <= floor:
            break
        d /= 2.0
    return windows


# -- partition hint streams ---------------------------------------------------


def _deterministic_hints(m: int, eps: float, ell: int):
    params = FamilyParams(m, ell, support_bound_for(ell, eps))
    seen: set[frozenset[int]] = set()
    hints = []
    for part in deterministic_family(params):
        if not part.b_side or len(part.a_side) < ell or part.a_side in seen:
            continue
        seen.add(part.a_side)
        a = np.fromiter(sorted(part.a_side), dtype=np.int64, count=len(part.a_side))
        b = np.fromiter(sorted(part.b_side), dtype=np.int64, count=len(part.b_side))
        hints.append((a, b))
    return hints


def trial_count(ell: int, eps: float, delta: float) -> int:
    """Biased-coin trials needed for miss probability <= delta."""
    if not 0 < delta < 1:
        raise ParameterError("delta must be in (0, 1)")
    t = math.log(1.0 / delta) * (ell**3 / eps) ** ell * math.e
    if t > 1e18 or not math.isfinite(t):
        return 10**18
    return max(1, math.ceil(t))


def _randomized_hints(m: int, eps: float, ell: int, seed, trials, delta: float):
    """Simulate the biased-coin trials without materializing the misses.

    A trial is useful only when it puts at least ell facilities in A; the
    number of useful trials among T is Binomial(T, q), and conditioned on
    usefulness the A side is a uniform subset of its (truncated-binomial)
    size.  Sampling that way draws from exactly the same distribution as
    flipping every coin, in far fewer RNG calls.
    """
    p = min(1.0, eps / ell**3)
    if p >= 1.0:
        return []  # every facility lands in A; such hints have no B side
    T = trials if trials is not None else trial_count(ell, eps, delta)
    rng = np.random.default_rng(seed)

    pmf = [math.comb(m, j) * p**j * (1.0 - p) ** (m - j) for j in range(m + 1)]
    q = min(1.0, max(0.0, sum(pmf[ell:])))
    if q == 0.0:
        return []
    useful = int(rng.binomial(T, q))
    sizes = np.arange(ell, m + 1)
    probs = np.clip(np.array(pmf[ell:]), 0.0, None)
    probs /= probs.sum()
    max_distinct = sum(math.comb(m, j) for j in range(ell, m))

    seen: set[frozenset[int]] = set()
    hints = []
    remaining = useful
    while remaining > 0 and len(seen) < max_distinct:
        batch = int(min(remaining, _RANDOM_BATCH))
        for s in rng.choice(sizes, size=batch, p=probs):
            a_set = frozenset(int(x) for x in rng.choice(m, int(s), replace=False))
            if len(a_set) == m or a_set in seen:
                continue
            seen.add(a_set)
            a = np.fromiter(sorted(a_set), dtype=np.int64, count=len(a_set))
            b_set = sorted(set(range(m)) - a_set)
            b = np.fromiter(b_set, dtype=np.int64, count=len(b_set))
            hints.append((a, b))
        remaining -= batch
    return hints


# -- top level ----------------------------------------------------------------


def solve_epas_with_stats(
    inst: Instance,
    eps: float,
    mode: str = "deterministic",
    seed=None,
    trials: int | None = None,
    delta: float = 0.01,
    workers: int = 1,
) -> tuple[Solution, SolveStats]:
    """solve_epas, additionally returning grid-size diagnostics."""
    if eps <= 0:
        raise ParameterError("eps must be positive")
    if mode not in ("deterministic", "randomized"):
        raise ParameterError(f"unknown mode {mode!r}")
    if workers < 1:
        raise ParameterError("workers must be at least 1")
    if inst.is_capacitated:
        raise ParameterError(
            "the approximation scheme solves the uncapacitated problem; "
            "use the exact capacitated oracle instead"
        )
    stats = SolveStats()
    vor = build_voronoi(inst)
    ell = inst.ell
    if ell == 0:
        return make_solution(inst, ()), stats
    if inst.num_clients == 0:
        return make_solution(inst, tuple(range(ell))), stats

    lower, upper, witness = cost_bounds(inst, vor)
    best = (witness.cost, tuple(sorted(witness.closed)))
    if upper <= 0.0:
        return witness, stats  # the witness already achieves the zero optimum

    nonzero = inst.dist[inst.dist > 0]
    d_min = float(nonzero.min())
    windows = guess_windows(lower, upper, d_min)
    stats.windows = len(windows)

    if mode == "deterministic":
        hints = _deterministic_hints(inst.num_facilities, eps, ell)
    else:
        hints = _randomized_hints(inst.num_facilities, eps, ell, seed, trials, delta)
    stats.partitions_evaluated = len(hints)

    arrays = _solver_arrays(inst, vor)
    grid = [(a, b, w.d_value) for a, b in hints for w in windows]
    stats.candidates = len(grid)

    def eval_one(item):
        a, b, d = item
        ok, closed, cost = kernels.evaluate_partition(
            *arrays, a, b, float(eps), int(ell), float(d)
        )
        if not ok:
            return None
        return cost, tuple(int(x) for x in closed)

    if workers == 1 or len(grid) < 2:
        results = map(eval_one, grid)
        for res in results:
            if res is not None and res < best:
                best = res
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(grid) // (workers * 4))
            for res in pool.map(eval_one, grid, chunksize=chunk):
                if res is not None and res < best:
                    best = res

    return make_solution(inst, best[1]), stats


def solve_epas(
    inst: Instance,
    eps: float,
    mode: str = "deterministic",
    seed=None,
    trials: int | None = None,
    delta: float = 0.01,
    workers: int = 1,
) -> Solution:
    """(1+eps)-approximate solution: certain in deterministic mode, with
    probability >= 1-delta in randomized mode.  Never beats the optimum."""
    sol, _ = solve_epas_with_stats(inst, eps, mode, seed, trials, delta, workers)
    return sol
