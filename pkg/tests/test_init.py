import math

import numpy as np
from numpy.testing import assert_allclose
import pytest

from conftest import simple_lp
from fullstep.cones.orthant import Orthant
from fullstep.config import make_solver_config
from fullstep.core import ConicProblem, SolveStatus, neighborhood_distance, solve
from fullstep.exceptions import ConfigError, PreconditionFailed
from fullstep.init import (
    MembershipInstance,
    backwards_phase1,
    build_phase1_problem,
    init_dual_membership,
    phase1_solve,
    transform_bounded,
    two_phase_start,
)


def _two_row_lp() -> ConicProblem:
    """min −x₁ − 2x₂，最优值 −5，在 (3, 1, 0, 0) 处取得"""
    return ConicProblem(
        a=[[1.0, 1.0, 1.0, 0.0], [1.0, 3.0, 0.0, 1.0]],
        b=[4.0, 6.0],
        c=[-1.0, -2.0, 0.0, 0.0],
        cone=Orthant(4),
    )


X0 = np.array([1.0, 1.0, 2.0, 2.0])


def test_membership_example():
    inst = MembershipInstance(t=[1.0, 3.0], w=[0.5, 0.5], cone=Orthant(2))
    start = init_dual_membership(inst, np.ones(2), 0.25)
    assert start.y[0] == pytest.approx(4 - 8 * math.sqrt(2))
    assert start.y[0] == pytest.approx(-7.31371, abs=1e-5)
    assert start.tau == pytest.approx(float(start.x @ start.s) / 2)
    assert neighborhood_distance(start.eval, start.s, start.tau) <= 0.25 * start.tau * (1 + 1e-12)
    assert_allclose(inst.t - start.y[0] * inst.w, start.s)


def test_membership_collinear_objective():
    inst = MembershipInstance(t=[2.0, 2.0], w=[0.5, 0.5], cone=Orthant(2))
    start = init_dual_membership(inst, np.ones(2), 0.25)
    assert start.tau == pytest.approx(1.0)
    assert neighborhood_distance(start.eval, start.s, start.tau) == pytest.approx(0.0, abs=1e-14)


def test_membership_preconditions():
    inst = MembershipInstance(t=[1.0, 3.0], w=[0.9, 0.1], cone=Orthant(2))
    with pytest.raises(PreconditionFailed):
        init_dual_membership(inst, np.ones(2), 0.25)
    with pytest.raises(PreconditionFailed):
        init_dual_membership(inst, np.array([2.0, 2.0]), 0.25)
    with pytest.raises(ConfigError):
        init_dual_membership(inst, np.ones(2), 0.3)


def test_phase1_start_when_w_is_the_gradient_direction():
    problem, start = build_phase1_problem(np.ones(2), np.array([0.5, 0.5]), Orthant(2))
    assert start.tau == pytest.approx(1.0)
    assert start.y[0] == pytest.approx(0.0)
    assert_allclose(start.s, [1.0, 1.0])
    report = phase1_solve(problem, start)
    assert report.iterations == 0
    assert report.centrality == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("variant", ["fixed", "adaptive", "largest"])
def test_phase1_stops_exactly_at_zero(variant):
    cone = Orthant(3)
    w = np.array([0.5, 0.3, 0.2])
    problem, start = build_phase1_problem(np.ones(3), w, cone)
    assert start.y[0] < 0
    config = make_solver_config(variant=variant, invariant_checks=True)
    report = phase1_solve(problem, start, 0.1, config)
    assert report.iterate.y[0] == 0.0
    assert 0.0 < report.alpha <= 1.0
    assert report.centrality < 0.25
    assert report.damped_distance <= 2 * 0.1 * report.tau * (1 + 1e-8)
    assert report.trace[-1].step in ("damped", "full")
    assert report.iterations >= 1
    assert len(report.dual_path) == report.iterations
    assert all(y < 0 for y in report.dual_path[:-1])
    assert report.dual_path[-1] == 0.0


def test_two_phase_then_solve():
    inst = MembershipInstance(t=[1.0, 2.0, 3.0], w=[0.5, 0.3, 0.2], cone=Orthant(3))
    start, report = two_phase_start(inst, np.ones(3))
    assert report.centrality < 0.25
    assert float(start.x @ inst.w) == pytest.approx(1.0)
    assert neighborhood_distance(start.eval, start.s, start.tau) <= 0.25 * start.tau * (1 + 1e-10)
    outcome = solve(inst.problem(), start, make_solver_config(invariant_checks=True))
    assert outcome.status is SolveStatus.OPTIMAL, outcome.reason
    assert float(inst.t @ outcome.state.x) == pytest.approx(2.0, abs=1e-7)


def test_phase1_rejects_large_radius():
    problem, start = build_phase1_problem(np.ones(2), np.array([0.5, 0.5]), Orthant(2))
    with pytest.raises(ConfigError):
        phase1_solve(problem, start, eta=0.2)


def test_bounded_transform_round_trip():
    problem = _two_row_lp()
    transform = transform_bounded(problem, np.ones(4), 11.0, X0)
    anchor = transform.cone.interior_point()
    assert transform.cone.dim == 6 - 3
    assert transform.cone.nu == 6
    assert_allclose(transform.restrict(anchor), X0, atol=1e-12)
    assert_allclose(transform.cone.ambient(anchor)[-2:], [5.0, 1.0], atol=1e-12)
    assert float(transform.problem.a[0] @ anchor) == pytest.approx(1.0)
    assert float(transform.problem.c @ anchor) == pytest.approx(float(problem.c @ X0))


def test_bounded_problem_solved_by_two_phase():
    problem = _two_row_lp()
    transform = transform_bounded(problem, np.ones(4), 11.0, X0)
    start, report = two_phase_start(transform.membership(), transform.cone.interior_point())
    assert report.centrality < 0.25
    outcome = solve(transform.problem, start, make_solver_config())
    assert outcome.status is SolveStatus.OPTIMAL, outcome.reason
    x = transform.restrict(outcome.state.x)
    assert float(problem.c @ x) == pytest.approx(-5.0, abs=1e-6)
    assert problem.primal_residual(x) <= 1e-8


def test_backwards_start_fires_immediately_on_central_point():
    lp = simple_lp()
    start = backwards_phase1(lp, np.ones(2))
    assert start.tau == 1.0
    assert_allclose(start.y, [0.0])


def test_backwards_then_solve():
    problem = _two_row_lp()
    start = backwards_phase1(problem, X0)
    assert neighborhood_distance(start.eval, start.s, start.tau) <= 0.25 * start.tau
    assert problem.dual_residual(start.y, start.s) <= 1e-10
    outcome = solve(problem, start, make_solver_config())
    assert outcome.status is SolveStatus.OPTIMAL, outcome.reason
    assert float(problem.c @ outcome.state.x) == pytest.approx(-5.0, abs=1e-6)


def test_backwards_preconditions():
    problem = _two_row_lp()
    with pytest.raises(PreconditionFailed):
        backwards_phase1(problem, np.ones(4))
    with pytest.raises(ConfigError):
        backwards_phase1(problem, X0, eta_tilde=0.5)
