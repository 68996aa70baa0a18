import math

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from fullstep.core import SolveStatus
from fullstep.exceptions import ConfigError, DegreeParityError, ProblemParseError
from fullstep.sos import bounds
from fullstep.sos import (
    TABLE_HEADER,
    Certified,
    NotCertified,
    SemialgebraicInstance,
    SosMethod,
    TableRow,
    basis_matrix,
    build_lower_bound_problem,
    certified_bound,
    certify,
    chebyshev_nodes,
    clenshaw_curtis_weights,
    conjecture_table,
    conjectured_value,
    interval_instance,
    recenter,
    solve_sos_bound,
    sos_solver_config,
    stengle_instance,
    table_csv,
    table_row,
    validate_table_degrees,
)


def test_chebyshev_nodes():
    assert_array_equal(chebyshev_nodes(2), [-1.0, 0.0, 1.0])
    h = math.sqrt(2) / 2
    assert_allclose(chebyshev_nodes(4), [-1.0, -h, 0.0, h, 1.0], atol=1e-15)
    nodes = chebyshev_nodes(20)
    assert_array_equal(nodes, -nodes[::-1])
    assert np.all(np.diff(nodes) > 0)
    with pytest.raises(ValueError):
        chebyshev_nodes(1)


@pytest.mark.parametrize("degree", [2, 8, 9, 20])
def test_clenshaw_curtis_weights(degree):
    w = clenshaw_curtis_weights(degree)
    assert w.sum() == pytest.approx(2.0)
    assert np.all(w > 0)
    assert_allclose(w, w[::-1], atol=1e-14)


def test_clenshaw_curtis_integrates_polynomials():
    nodes, w = chebyshev_nodes(8), clenshaw_curtis_weights(8)
    assert w @ nodes**2 == pytest.approx(2 / 3)
    assert w @ nodes**4 == pytest.approx(2 / 5)
    assert w @ nodes**3 == pytest.approx(0.0, abs=1e-15)


def test_basis_matrix():
    nodes = chebyshev_nodes(6)
    p = basis_matrix(nodes, 4)
    assert p.shape == (7, 4)
    assert_allclose(p[:, 0], 1.0)
    assert_allclose(p[:, 2], 2 * nodes**2 - 1, atol=1e-14)


def test_stengle_instance():
    inst = stengle_instance(20)
    assert inst.multiplier_sizes == [11, 8]
    assert_allclose(inst.objective_values(), 1 - inst.nodes**2, atol=1e-14)
    assert_allclose(inst.constraint_values()[1], (1 - inst.nodes**2) ** 3, atol=1e-14)
    assert conjectured_value(20) == 80
    assert conjectured_value(80) == 1520


def test_instance_validation():
    with pytest.raises(DegreeParityError):
        stengle_instance(21)
    with pytest.raises(DegreeParityError) as info:
        SemialgebraicInstance(degree=10, objective=[1.0], constraints=([0.0, 1.0],))
    assert info.value.path == "constraints[0]"
    with pytest.raises(ProblemParseError) as info:
        SemialgebraicInstance(degree=4, objective=[0, 0, 0, 0, 0, 1.0])
    assert info.value.path == "objective"
    with pytest.raises(ProblemParseError):
        SemialgebraicInstance(degree=0, objective=[1.0])


def test_instance_from_spec():
    inst = SemialgebraicInstance.from_spec(
        {"degree": 20, "objective": [1, 0, -1], "constraints": [[1, 0, -3, 0, 3, 0, -1]], "basis": "power"}
    )
    expected = stengle_instance(20)
    assert inst.degree == expected.degree
    assert_allclose(inst.objective, expected.objective)
    assert_allclose(inst.constraints[0], expected.constraints[0])
    with pytest.raises(ProblemParseError):
        SemialgebraicInstance.from_spec({"degree": 8, "basis": "legendre"})


def test_lower_bound_problem():
    inst = stengle_instance(8)
    problem = build_lower_bound_problem(inst)
    assert problem.m == 1
    assert problem.n == 9
    assert_allclose(problem.a, np.ones((1, 9)))
    assert_allclose(problem.c, 1 - inst.nodes**2, atol=1e-14)


CONVERGED = (SolveStatus.OPTIMAL, SolveStatus.NEAR_OPTIMAL)


@pytest.mark.parametrize(
    "degree, tolerance",
    [(20, 0.01), (40, 0.05), (60, 0.1), pytest.param(80, 0.5, marks=pytest.mark.slow)],
)
def test_two_phase_bound_matches_conjecture(degree, tolerance):
    inst = stengle_instance(degree)
    result = solve_sos_bound(inst, SosMethod.TWO_PHASE)
    assert result.status in CONVERGED, result.reason
    assert result.neg_inv_bound == pytest.approx(conjectured_value(degree), abs=tolerance)
    assert result.phase1.iterations <= 30
    assert result.phase1.centrality < 0.25
    assert result.upper >= result.bound - 1e-12
    assert result.iterations == result.outcome.iterations + result.phase1.iterations
    assert certify(inst, result.lam, result.certified).verdict == "certified"
    assert -1.0 / result.certified == pytest.approx(conjectured_value(degree), abs=tolerance)


@pytest.mark.parametrize(
    "degree, tolerance",
    [(20, 0.02), (40, 0.1), (60, 0.2), pytest.param(80, 1.0, marks=pytest.mark.slow)],
)
def test_hsd_bound_matches_conjecture(degree, tolerance):
    inst = stengle_instance(degree)
    result = solve_sos_bound(inst, SosMethod.HSD)
    assert result.status in CONVERGED, result.reason
    assert result.neg_inv_bound == pytest.approx(conjectured_value(degree), abs=tolerance)
    assert result.phase1 is None
    assert "beta" in result.outcome.extras
    assert certify(inst, result.lam, result.certified).verdict == "certified"
    assert -1.0 / result.certified == pytest.approx(conjectured_value(degree), abs=tolerance)


def test_largest_update_is_far_below_worst_case():
    result = solve_sos_bound(stengle_instance(20), SosMethod.TWO_PHASE, sos_solver_config(variant="largest"))
    assert result.status in CONVERGED, result.reason
    assert result.outcome.iterations <= result.outcome.bound // 4
    assert result.phase1.iterations <= 30


def test_phase1_receives_caller_config(monkeypatch):
    seen = {}
    real_start = bounds.two_phase_start

    def spy(*args, **kwargs):
        seen.update(kwargs)
        return real_start(*args, **kwargs)

    monkeypatch.setattr(bounds, "two_phase_start", spy)
    config = sos_solver_config(variant="adaptive")
    result = solve_sos_bound(stengle_instance(8), SosMethod.TWO_PHASE, config)
    assert seen["config"] is config
    assert result.status in CONVERGED, result.reason


def test_certified_bound_of_computed_lambda():
    inst = stengle_instance(8)
    assert certified_bound(inst, np.zeros(9)) is None
    result = solve_sos_bound(inst)
    gamma = certified_bound(inst, result.lam)
    assert gamma == pytest.approx(result.bound, abs=1e-6)
    assert gamma == pytest.approx(result.certified)
    assert certify(inst, result.lam, gamma).verdict == "certified"
    assert certify(inst, result.lam, gamma + 1.0).verdict == "not_certified"


def test_recenter_makes_lambda_certifiable():
    inst = stengle_instance(8)
    problem = build_lower_bound_problem(inst)
    start = clenshaw_curtis_weights(8) / 2.0
    lam = recenter(problem, start, tau=0.1)
    assert float(np.sum(lam)) == pytest.approx(1.0)
    gamma = certified_bound(inst, lam)
    assert gamma is not None
    assert certify(inst, lam, gamma).verdict == "certified"
    with pytest.raises(ValueError):
        recenter(problem, start, tau=0.0)


def test_interval_instance_bound_is_zero():
    result = solve_sos_bound(interval_instance(10))
    assert result.status in CONVERGED, result.reason
    assert result.bound == pytest.approx(0.0, abs=1e-6)


def test_certificate_of_computed_bound():
    inst = stengle_instance(20)
    result = solve_sos_bound(inst)
    verdict = certify(inst, result.lam, result.bound)
    assert isinstance(verdict, Certified)
    assert verdict.distance <= verdict.tau
    rejected = certify(inst, result.lam, 1.0)
    assert isinstance(rejected, NotCertified)
    assert rejected.verdict == "not_certified"
    boundary = certify(inst, np.zeros(21), result.bound)
    assert isinstance(boundary, NotCertified)
    assert math.isinf(boundary.distance)


def test_table_csv_layout():
    assert table_csv([]) == ",".join(TABLE_HEADER) + "\n"
    failed = TableRow(20, SosMethod.HSD, None, 0, 0.0, "numerical_failure", "x")
    assert failed.failed
    assert failed.csv_fields() == ["20", "FAILED", "FAILED", "80", "0", "0.000", "hsd"]
    ok = TableRow(20, SosMethod.TWO_PHASE, -0.0125, 42, 1.23456, "optimal")
    assert not ok.failed
    assert ok.csv_fields() == ["20", "-0.0125", "80.000000", "80", "42", "1.235", "two-phase"]


def test_conjecture_table_row():
    rows = conjecture_table([20], SosMethod.TWO_PHASE, timing=False)
    assert len(rows) == 1
    row = rows[0]
    assert not row.failed
    assert row.neg_inv == pytest.approx(80.0, abs=0.01)
    assert row.seconds == 0.0
    lines = table_csv(rows).splitlines()
    assert lines[0] == ",".join(TABLE_HEADER)
    assert lines[1].startswith("20,")
    assert lines[1].endswith(",0.000,two-phase")


def test_failing_row_is_marked():
    config = sos_solver_config(eps=1e-15, max_iterations=5)
    row = table_row(20, SosMethod.TWO_PHASE, config, timing=False)
    assert row.status == SolveStatus.ITERATION_LIMIT.value
    assert row.failed
    assert "FAILED" in table_csv([row])


def test_table_degree_validation():
    validate_table_degrees([8, 20])
    with pytest.raises(DegreeParityError):
        validate_table_degrees([21])
    with pytest.raises(ConfigError):
        validate_table_degrees([6])
