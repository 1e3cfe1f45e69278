"""Exhaustive oracles: correctness, determinism, budget guard."""

import itertools

import numpy as np
import pytest

from colmedian import (
    BudgetError,
    InfeasibleError,
    Instance,
    build_voronoi,
    exact_capacitated,
    exact_uncapacitated,
    solution_cost,
)

from conftest import brute_force_optimum, random_metric_instance


def test_e1_oracle(e1):
    sol = exact_uncapacitated(e1)
    assert sol.closed == frozenset({1})
    assert sol.cost == pytest.approx(0.6)


def test_ell_zero_returns_all_open():
    rng = np.random.default_rng(1)
    inst = random_metric_instance(rng, 4, 6, 0)
    sol = exact_uncapacitated(inst)
    assert sol.closed == frozenset()
    vor = build_voronoi(inst)
    assert sol.cost == pytest.approx(vor.total_cell_cost)


def test_matches_bruteforce_and_lex_tiebreak():
    rng = np.random.default_rng(9)
    for _ in range(30):
        m = int(rng.integers(2, 8))
        n = int(rng.integers(0, 10))
        ell = int(rng.integers(0, m)) if n else int(rng.integers(0, m + 1))
        inst = random_metric_instance(rng, m, n, ell)
        sol = exact_uncapacitated(inst)
        cost, closed = brute_force_optimum(inst)
        assert sol.cost == pytest.approx(cost, rel=1e-9, abs=1e-12)
        assert tuple(sorted(sol.closed)) == closed


def test_oracle_never_above_any_subset():
    rng = np.random.default_rng(15)
    inst = random_metric_instance(rng, 7, 9, 2)
    sol = exact_uncapacitated(inst)
    for combo in itertools.combinations(range(7), 2):
        cost, _ = solution_cost(inst, combo)
        assert sol.cost <= cost + 1e-12


def test_optimum_monotone_in_ell():
    rng = np.random.default_rng(25)
    for _ in range(10):
        m, n = 6, 8
        base = random_metric_instance(rng, m, n, 1)
        costs = []
        for ell in range(0, m):
            inst = Instance(m, n, base.dist, ell)
            costs.append(exact_uncapacitated(inst).cost)
        assert all(a <= b + 1e-12 for a, b in zip(costs, costs[1:]))


def test_budget_guard_reports_requirement():
    inst = random_metric_instance(np.random.default_rng(0), 10, 2, 5)
    with pytest.raises(BudgetError) as err:
        exact_uncapacitated(inst, budget=10)
    assert err.value.required == 252
    assert err.value.budget == 10


def test_oracle_deterministic(e1):
    assert exact_uncapacitated(e1) == exact_uncapacitated(e1)


def test_capacitated_agrees_when_slack():
    rng = np.random.default_rng(33)
    for _ in range(10):
        m, n = int(rng.integers(2, 6)), int(rng.integers(1, 7))
        ell = int(rng.integers(0, m))
        base = random_metric_instance(rng, m, n, ell)
        cap = Instance(m, n, base.dist, ell, tuple([n] * m))
        a = exact_uncapacitated(base)
        b = exact_capacitated(cap)
        assert b.cost == pytest.approx(a.cost, rel=1e-9, abs=1e-12)


def test_capacitated_globally_infeasible():
    d = np.ones((6, 6)) - np.eye(6)
    inst = Instance(3, 3, d, 1, (1, 1, 1))
    with pytest.raises(InfeasibleError):
        exact_capacitated(inst)


def test_capacitated_budget_guard():
    d = np.ones((12, 12)) - np.eye(12)
    inst = Instance(10, 2, d, 5, tuple([2] * 10))
    with pytest.raises(BudgetError):
        exact_capacitated(inst, budget=3)
