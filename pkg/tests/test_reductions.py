"""Instance generators built from graphs and set systems."""

import itertools

import numpy as np
import pytest

from colmedian import (
    CoverageInstance,
    FormatError,
    Graph,
    InfeasibleError,
    ParameterError,
    coverage_reduction,
    exact_capacitated,
    exact_uncapacitated,
    extract_coverage_solution,
    graph_is_connected,
    independent_set_reduction,
    optimal_assignment,
    parse_coverage,
    parse_graph,
    validate_metric,
)
from colmedian.reductions import (
    element_facility_index,
    format_coverage,
    format_graph,
    set_facility_indices,
)

from conftest import max_independent_set_at_least, random_connected_graph


def cycle(n):
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n):
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def test_graph_validation():
    with pytest.raises(ParameterError):
        Graph(3, ((0, 0),))
    with pytest.raises(ParameterError):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(ParameterError):
        Graph(2, ((0, 5),))


def test_reduction_rejects_oversized_ell():
    with pytest.raises(ParameterError):
        independent_set_reduction(cycle(4), 5)


def test_c5_reduction_optimum_is_edge_count():
    inst = independent_set_reduction(cycle(5), 2)
    sol = exact_uncapacitated(inst)
    assert sol.cost == 5.0


def test_k4_reduction_pays_for_missing_independent_set():
    inst = independent_set_reduction(complete(4), 2)
    sol = exact_uncapacitated(inst)
    assert sol.cost == 8.0


def test_edgeless_reduction_is_vacuous():
    inst = independent_set_reduction(Graph(3, ()), 3)
    assert inst.num_clients == 0
    assert exact_uncapacitated(inst).cost == 0.0


def test_reduction_metric_exact():
    for g in (cycle(5), complete(4), Graph(4, ((0, 1), (2, 3)))):
        inst = independent_set_reduction(g, 1)
        assert validate_metric(inst, 0.0) == []


def test_reduction_client_distances():
    g = cycle(4)
    inst = independent_set_reduction(g, 1)
    m = g.num_vertices
    for e, (u, v) in enumerate(g.edges):
        assert inst.dist[m + e, u] == 1.0
        assert inst.dist[m + e, v] == 1.0


def test_disconnected_graph_gets_sentinel():
    g = Graph(4, ((0, 1), (2, 3)))
    assert not graph_is_connected(g)
    inst = independent_set_reduction(g, 1)
    sentinel = 2 * (4 + 2) + 1
    assert inst.dist[0, 2] == sentinel
    assert validate_metric(inst, 0.0) == []


def test_is_reduction_soundness_random():
    rng = np.random.default_rng(13)
    for _ in range(60):
        nv = int(rng.integers(3, 8))
        edges = random_connected_graph(rng, nv)
        g = Graph(nv, edges)
        ell = int(rng.integers(1, nv))  # at least one facility must stay open
        inst = independent_set_reduction(g, ell)
        sol = exact_uncapacitated(inst)
        has_is = max_independent_set_at_least(edges, nv, ell)
        if has_is:
            assert sol.cost == float(g.num_edges)
        else:
            assert sol.cost > float(g.num_edges)


# -- coverage construction ------------------------------------------------------


@pytest.fixture
def cov_fixture():
    # universe {0..3}; subsets {0,1}, {2,3}, {0,2}; pick 2
    return CoverageInstance(
        4, (frozenset({0, 1}), frozenset({2, 3}), frozenset({0, 2})), 2
    )


def test_coverage_layout(cov_fixture):
    inst = coverage_reduction(cov_fixture)
    assert inst.num_facilities == 3 + 4
    assert inst.num_clients == 6 + 4 * 5
    assert inst.capacities == (2, 2, 2, 6, 6, 6, 6)
    assert inst.ell == 2
    assert list(set_facility_indices(cov_fixture)) == [0, 1, 2]
    assert element_facility_index(cov_fixture, 3) == 6


def test_coverage_distance_tables_preserved(cov_fixture):
    inst = coverage_reduction(cov_fixture)
    cf = inst.client_facility
    n_sets, u_size = 3, 4
    c = 0
    for i, subset in enumerate(cov_fixture.subsets):
        for _ in range(len(subset)):
            for i2 in range(n_sets):
                assert cf[c, i2] == (0.0 if i2 == i else 2.0)
            for u in range(u_size):
                assert cf[c, n_sets + u] == (1.0 if u in subset else 3.0)
            c += 1
    for u in range(u_size):
        for _ in range(u_size + 1):
            for i in range(n_sets):
                assert cf[c, i] == (1.0 if u in cov_fixture.subsets[i] else 3.0)
            for u2 in range(u_size):
                assert cf[c, n_sets + u2] == (0.0 if u2 == u else 2.0)
            c += 1
    assert validate_metric(inst, 0.0) == []


def test_coverage_exact_cover_costs_universe(cov_fixture):
    inst = coverage_reduction(cov_fixture)
    sol = optimal_assignment(inst, {0, 1})
    assert sol.cost == 4.0


def test_coverage_partial_cover_formula(cov_fixture):
    inst = coverage_reduction(cov_fixture)
    sol = optimal_assignment(inst, {0, 2})  # covers {0,1,2}
    assert sol.cost == 3.0 + 3.0 * 1


def test_closing_element_facility_infeasible(cov_fixture):
    inst = coverage_reduction(cov_fixture)
    for u in range(4):
        f = element_facility_index(cov_fixture, u)
        with pytest.raises(InfeasibleError):
            optimal_assignment(inst, {f, 0})


def test_exact_capacitated_finds_exact_cover(cov_fixture):
    inst = coverage_reduction(cov_fixture)
    sol = exact_capacitated(inst)
    assert sol.cost == 4.0
    assert extract_coverage_solution(sol, cov_fixture) == [0, 1]


def test_extract_rejects_element_facility(cov_fixture):
    from colmedian import Solution

    bad = Solution(frozenset({0, 5}), {}, 0.0)
    with pytest.raises(ValueError):
        extract_coverage_solution(bad, cov_fixture)
    ok = Solution(frozenset({2}), {}, 0.0)
    assert extract_coverage_solution(ok, cov_fixture) == [2]


def test_equal_size_promise_flag():
    assert CoverageInstance(4, (frozenset({0, 1}), frozenset({2, 3})), 2).has_equal_size_promise
    assert not CoverageInstance(4, (frozenset({0}), frozenset({2, 3})), 2).has_equal_size_promise


def test_cost_law_over_all_selections():
    # equal-size subsets: every k-selection obeys covered + 3*uncovered
    rng = np.random.default_rng(37)
    for _ in range(6):
        k = int(rng.choice([2, 3]))
        size = int(rng.choice([1, 2]))
        u_size = k * size
        n_sets = int(rng.integers(k, 6))
        subsets = tuple(
            frozenset(int(x) for x in rng.choice(u_size, size=size, replace=False))
            for _ in range(n_sets)
        )
        cov = CoverageInstance(u_size, subsets, k)
        assert cov.has_equal_size_promise
        inst = coverage_reduction(cov)
        for combo in itertools.combinations(range(n_sets), k):
            covered = len(frozenset().union(*(subsets[i] for i in combo)))
            sol = optimal_assignment(inst, set(combo))
            assert sol.cost == float(covered + 3 * (u_size - covered))


# -- text formats -----------------------------------------------------------------


def test_graph_round_trip():
    g = cycle(5)
    assert parse_graph(format_graph(g)) == g


def test_graph_parse_errors():
    with pytest.raises(FormatError):
        parse_graph("graph 2\n")
    with pytest.raises(FormatError):
        parse_graph("graph 2 1\n0 1\n1 0\n")
    with pytest.raises(FormatError):
        parse_graph("graph 2 1\n0 0\n")


def test_coverage_round_trip(cov_fixture):
    assert parse_coverage(format_coverage(cov_fixture)) == cov_fixture


def test_coverage_parse_errors():
    with pytest.raises(FormatError):
        parse_coverage("coverage 4 2\n0 1\n2 3\n")
    with pytest.raises(FormatError):
        parse_coverage("coverage 4 1 1\n0 9\n")
