import numpy as np
from numpy.testing import assert_allclose
import pytest

from conftest import simple_lp
from fullstep.cones.orthant import Orthant
from fullstep.config import make_solver_config
from fullstep.core import ConicProblem, SolveStatus
from fullstep.hsd import (
    Certificate,
    HsdThresholds,
    Solution,
    Unclassified,
    build_embedding,
    equality_residual,
    extract,
    hsd_newton,
    hsd_solve,
    hsd_step,
)
from fullstep.hsd.solver import HsdModel


def _infeasible_lp() -> ConicProblem:
    return ConicProblem(a=[[1.0, 1.0]], b=[-1.0], c=[1.0, 1.0], cone=Orthant(2))


def _unbounded_lp() -> ConicProblem:
    """min −x₁ s.t. x₁ − x₂ = 0，沿 (t, t) 无界"""
    return ConicProblem(a=[[1.0, -1.0]], b=[0.0], c=[-1.0, 0.0], cone=Orthant(2))


def test_embedding_start_is_central():
    emb, st = build_embedding(simple_lp())
    assert emb.cone.nu == 3
    assert emb.anchor_gap + 1.0 == pytest.approx(emb.cone.nu)
    assert st.mu == pytest.approx(1.0)
    assert st.theta == pytest.approx(st.mu)
    assert_allclose(equality_residual(emb, st), 0.0, atol=1e-14)
    assert_allclose(emb.g, -emb.g.T)


def test_newton_direction_keeps_equalities():
    emb, st = build_embedding(_infeasible_lp())
    tau = 0.8
    d = hsd_newton(emb, st, tau)
    following = hsd_step(emb, st, d)
    assert_allclose(equality_residual(emb, following), 0.0, atol=1e-12)
    ev = st.eval
    recentered = d.slack + st.slack + tau * ev.gradient + tau * ev.hessian_times(d.primal)
    assert_allclose(recentered, 0.0, atol=1e-12)
    assert d.primal @ d.slack == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("variant", ["fixed", "adaptive", "largest"])
def test_solves_feasible_lp_with_invariant_checks(variant):
    emb, st = build_embedding(simple_lp())
    outcome = hsd_solve(emb, st, make_solver_config(variant=variant, invariant_checks=True))
    assert outcome.status is SolveStatus.OPTIMAL, outcome.reason
    recovered = extract(emb, outcome.state)
    assert isinstance(recovered, Solution)
    assert recovered.primal_objective == pytest.approx(2.0, abs=1e-6)
    assert recovered.dual_objective == pytest.approx(2.0, abs=1e-6)
    assert recovered.primal_residual <= 1e-6
    assert 0.0 < outcome.extras["omega"] < 1.0
    assert outcome.extras["beta"] == pytest.approx(1.0 - 0.75 * outcome.extras["omega"])


def test_theta_tracks_mu_along_the_path():
    emb, st = build_embedding(simple_lp())
    model = HsdModel(emb)
    outcome = hsd_solve(emb, st, make_solver_config(variant="fixed", max_iterations=25))
    final = outcome.state
    model.check_state(final, final.tau, 0.25)
    assert final.theta == pytest.approx(final.mu, rel=1e-8)
    assert final.kappa * final.xi >= 0.75 * final.tau * (1 - 1e-8)


def test_primal_infeasible_certificate():
    emb, st = build_embedding(_infeasible_lp())
    outcome = hsd_solve(emb, st, make_solver_config())
    assert outcome.status is SolveStatus.CERTIFICATE
    recovered = extract(emb, outcome.state)
    assert isinstance(recovered, Certificate)
    assert recovered.infeasibility == ["primal_infeasible"]
    assert recovered.b_dot_y > 0


def test_dual_infeasible_certificate():
    emb, st = build_embedding(_unbounded_lp())
    outcome = hsd_solve(emb, st, make_solver_config())
    assert outcome.status is SolveStatus.CERTIFICATE
    recovered = extract(emb, outcome.state)
    assert isinstance(recovered, Certificate)
    assert "dual_infeasible" in recovered.infeasibility
    assert recovered.neg_c_dot_x > 0


def test_extract_reports_unclassified():
    emb, st = build_embedding(simple_lp())
    vanishing = st.__class__(
        y=st.y, x=st.x * 1e-9, xi=1e-12, theta=1e-9, s=st.s * 1e-9, kappa=1e-12, tau=1e-9, eval=st.eval
    )
    recovered = extract(emb, vanishing, HsdThresholds(xi_ratio=1e-6))
    assert isinstance(recovered, Unclassified)
    assert "xi" in recovered.diagnostics


def test_thresholds_from_config():
    thresholds = HsdThresholds.from_config()
    assert thresholds.xi_ratio == pytest.approx(1e-6)
    assert thresholds.ray_tol == pytest.approx(1e-8)


def _dense_embedding_direction(emb, st, tau):
    """把嵌入等式与扩展锥 τH̃Δx̃ + Δs̃ = −(s̃ + τg̃) 拼成一个稠密方程组直接求解。"""
    m, n = emb.m, emb.n
    size = m + n + 2
    ev = st.eval
    system = np.zeros((size + n + 1, size + n + 1))
    system[:size, :size] = emb.g
    system[m : m + n + 1, size:] = -np.eye(n + 1)
    system[size:, m : m + n + 1] = tau * ev.hessian
    system[size:, size:] = np.eye(n + 1)
    rhs = np.concatenate([np.zeros(size), -(st.slack + tau * ev.gradient)])
    sol = np.linalg.solve(system, rhs)
    return sol[:m], sol[m : m + n], sol[m + n], sol[m + n + 1], sol[size : size + n], sol[-1]


@pytest.mark.parametrize("problem", [simple_lp(), _infeasible_lp(), _unbounded_lp()])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_newton_direction_matches_extended_cone_system(problem, seed):
    rng = np.random.default_rng(seed)
    emb, st = build_embedding(problem)
    x = rng.uniform(0.5, 2.0, emb.n)
    xi = float(rng.uniform(0.5, 2.0))
    state = st.__class__(
        y=rng.standard_normal(emb.m),
        x=x,
        xi=xi,
        theta=float(rng.uniform(0.5, 2.0)),
        s=rng.uniform(0.5, 2.0, emb.n),
        kappa=float(rng.uniform(0.5, 2.0)),
        tau=1.0,
        eval=emb.cone.evaluate(np.append(x, xi)),
    )
    tau = float(rng.uniform(0.3, 1.0))
    d = hsd_newton(emb, state, tau)
    dy, dx, dxi, dtheta, ds, dkappa = _dense_embedding_direction(emb, state, tau)
    assert_allclose(d.dy, dy, atol=1e-9)
    assert_allclose(d.dx, dx, atol=1e-9)
    assert d.dxi == pytest.approx(dxi, abs=1e-9)
    assert d.dtheta == pytest.approx(dtheta, abs=1e-9)
    assert_allclose(d.ds, ds, atol=1e-9)
    assert d.dkappa == pytest.approx(dkappa, abs=1e-9)


@pytest.mark.parametrize("variant", ["fixed", "adaptive", "largest"])
def test_infeasible_lp_with_invariant_checks(variant):
    emb, st = build_embedding(_infeasible_lp())
    outcome = hsd_solve(emb, st, make_solver_config(variant=variant, invariant_checks=True))
    assert outcome.status is SolveStatus.CERTIFICATE, outcome.reason
    recovered = extract(emb, outcome.state)
    assert isinstance(recovered, Certificate)
    assert recovered.infeasibility == ["primal_infeasible"]


def test_converged_requires_recovered_gap():
    emb, st = build_embedding(simple_lp())
    model = HsdModel(emb)
    # 嵌入间隙很小但 ξ 也小：还原后的 xᵀs/ξ² 仍然很大
    shrunk = st.__class__(
        y=st.y, x=st.x * 1e-5, xi=1e-4, theta=1e-10, s=st.s * 1e-5, kappa=1e-6, tau=1e-10, eval=st.eval
    )
    assert shrunk.gap <= 1e-8
    assert not model.converged(shrunk, 1e-8)
    assert model.converged(shrunk, 1e-1)
