"""Instance model: metric validation, parsing, serialization, construction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colmedian import (
    FormatError,
    Instance,
    MetricViolationError,
    ParameterError,
    from_euclidean_points,
    parse_instance,
    serialize_instance,
    validate_metric,
)

from conftest import random_metric_instance


def test_uniform_metric_is_valid():
    d = np.ones((3, 3)) - np.eye(3)
    inst = Instance(2, 1, d, 1)
    assert validate_metric(inst, 0.0) == []


def test_triangle_violation_reported():
    d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    inst = Instance(2, 1, d, 1)
    violations = validate_metric(inst, 0.0)
    assert any(v.kind == "triangle" and v.indices == (0, 1, 2) for v in violations)


def test_euclidean_matrix_always_valid():
    rng = np.random.default_rng(0)
    for _ in range(10):
        pts_f = rng.normal(size=(6, 3))
        pts_c = rng.normal(size=(9, 3))
        inst = from_euclidean_points(pts_f, pts_c, 2)
        tol = 1e-9 * float(inst.dist.max())
        assert validate_metric(inst, tol) == []


def test_asymmetry_and_diagonal_reported():
    d = np.array([[0, 1], [2, 0.5]], dtype=float)
    inst = Instance(2, 0, d, 0)
    kinds = {v.kind for v in validate_metric(inst, 0.0)}
    assert "asymmetry" in kinds and "diagonal" in kinds


def test_validate_rejects_mismatched_size():
    d = np.zeros((3, 3))
    inst = Instance(2, 1, d, 1)
    object.__setattr__(inst, "num_clients", 5)  # simulate structural corruption
    with pytest.raises(ParameterError):
        validate_metric(inst)


# -- construction -------------------------------------------------------------


def test_from_euclidean_e1_fixture(e1):
    assert e1.num_facilities == 3 and e1.num_clients == 2 and e1.ell == 1
    cf = e1.client_facility
    assert cf[0, 0] == pytest.approx(0.4)
    assert cf[1, 2] == pytest.approx(0.2)
    assert e1.facility_facility[0, 2] == pytest.approx(5.0)


def test_from_euclidean_coincident_points():
    inst = from_euclidean_points([[0.0, 0.0]], [[0.0, 0.0]], 0)
    assert inst.client_facility[0, 0] == 0.0


def test_from_euclidean_345():
    inst = from_euclidean_points([[0.0, 0.0], [3.0, 4.0]], [], 1)
    assert inst.num_clients == 0
    assert inst.facility_facility[0, 1] == pytest.approx(5.0)


def test_from_euclidean_dimension_mismatch():
    with pytest.raises(ParameterError):
        from_euclidean_points([[0.0, 0.0]], [[1.0]], 0)


def test_instance_rejects_bad_parameters():
    d = np.zeros((2, 2))
    with pytest.raises(ParameterError):
        Instance(1, 1, d, 1)  # must keep one facility open
    with pytest.raises(ParameterError):
        Instance(2, 0, d, 3)
    with pytest.raises(ParameterError):
        Instance(2, 0, -np.ones((2, 2)), 0)
    with pytest.raises(ParameterError):
        Instance(2, 0, d, 0, capacities=(1,))
    with pytest.raises(ParameterError):
        Instance(2, 0, d, 0, capacities=(1.5, 1))  # fractional rejected


def test_instance_matrix_immutable(e1):
    with pytest.raises(ValueError):
        e1.dist[0, 0] = 1.0


def test_vacuous_instance_allows_closing_everything():
    inst = Instance(3, 0, np.zeros((3, 3)), 3)
    assert inst.num_clients == 0


# -- text format --------------------------------------------------------------


def test_parse_header_only():
    text = "colmedian 1\nfacilities 2\nclients 0\nell 2\nmatrix\n0 1\n1 0\n"
    inst = parse_instance(text)
    assert inst.num_clients == 0 and inst.ell == 2


def test_round_trip_bit_for_bit(e1):
    again = parse_instance(serialize_instance(e1))
    assert again.num_facilities == e1.num_facilities
    assert again.ell == e1.ell
    assert np.array_equal(again.dist, e1.dist)


def test_round_trip_random_instances():
    rng = np.random.default_rng(42)
    for _ in range(5):
        inst = random_metric_instance(rng, 5, 7, 2)
        again = parse_instance(serialize_instance(inst))
        assert np.array_equal(again.dist, inst.dist)


def test_round_trip_capacitated():
    inst = Instance(2, 2, np.array([[0, 1, 0, 1], [1, 0, 1, 0],
                                    [0, 1, 0, 1], [1, 0, 1, 0]], dtype=float),
                    1, (2, 2))
    again = parse_instance(serialize_instance(inst))
    assert again.capacities == (2, 2)


def test_parse_points_form():
    text = (
        "colmedian 1\nfacilities 3\nclients 2\nell 1\npoints 1\n"
        "0\n1\n5\n0.4\n4.8\n"
    )
    inst = parse_instance(text)
    assert inst.client_facility[0, 0] == pytest.approx(0.4)


def test_parse_points_form_with_capacities():
    text = (
        "colmedian 1\nfacilities 2\nclients 1\nell 1\ncapacities 3 3\n"
        "points 2\n0 0\n1 0\n0.25 0\n"
    )
    inst = parse_instance(text)
    assert inst.capacities == (3, 3)
    assert inst.client_facility[0, 0] == pytest.approx(0.25)


def test_parse_comments_and_blank_lines():
    text = (
        "# a comment\ncolmedian 1\n\nfacilities 2\nclients 0\nell 1\n"
        "matrix\n0 1 # trailing\n1 0\n"
    )
    inst = parse_instance(text)
    assert inst.num_facilities == 2


def test_parse_negative_distance_points_at_line():
    text = "colmedian 1\nfacilities 2\nclients 0\nell 0\nmatrix\n0 -1\n-1 0\n"
    with pytest.raises(FormatError) as err:
        parse_instance(text)
    assert err.value.line == 6


def test_parse_syntax_error_line_number():
    text = "colmedian 1\nfacilities 2\nclients 0\nell 0\nmatrix\n0 1\n1\n"
    with pytest.raises(FormatError) as err:
        parse_instance(text)
    assert err.value.line == 7


def test_parse_rejects_bad_magic():
    with pytest.raises(FormatError):
        parse_instance("colmedian 2\nfacilities 1\nclients 0\nell 0\nmatrix\n0\n")


def test_parse_rejects_ell_too_large():
    text = "colmedian 1\nfacilities 2\nclients 1\nell 2\nmatrix\n" + "0 1 1\n1 0 1\n1 1 0\n"
    with pytest.raises(ParameterError):
        parse_instance(text)


def test_parse_rejects_metric_violation():
    text = "colmedian 1\nfacilities 3\nclients 0\nell 0\nmatrix\n0 1 5\n1 0 1\n5 1 0\n"
    with pytest.raises(MetricViolationError) as err:
        parse_instance(text)
    assert err.value.violation.indices == (0, 1, 2)


def test_parse_rejects_fractional_capacity():
    text = (
        "colmedian 1\nfacilities 2\nclients 0\nell 0\ncapacities 1.5 1\n"
        "matrix\n0 1\n1 0\n"
    )
    with pytest.raises(FormatError):
        parse_instance(text)


def test_every_parsed_instance_passes_validation():
    rng = np.random.default_rng(7)
    for _ in range(5):
        inst = random_metric_instance(rng, 4, 6, 1)
        again = parse_instance(serialize_instance(inst))
        assert validate_metric(again) == []


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=1, max_size=6
    ),
    st.lists(
        st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=0, max_size=6
    ),
)
def test_euclidean_round_trip_property(fac, cli):
    inst = from_euclidean_points(fac, cli, 0)
    tol = 1e-9 * max(1.0, float(inst.dist.max()))
    assert validate_metric(inst, tol) == []
    again = parse_instance(serialize_instance(inst))
    assert np.array_equal(again.dist, inst.dist)
