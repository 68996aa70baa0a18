"""单等式约束问题的两阶段初始化：Phase 1 沿辅助中心路径前进，在 y 穿过 0 时以阻尼步停止。"""

from dataclasses import dataclass, field

import numpy as np

from ..cones import Cone
from ..config import SolverConfig, UpdateVariant, base_config, make_solver_config
from ..core import (
    ConicProblem,
    Iterate,
    Proposal,
    StandardModel,
    TraceRecord,
    check_iteration_invariants,
    get_strategy,
    neighborhood_distance,
    tau_fixed,
)
from ..core.solver import check_start
from ..core.strategies import direction_norms
from ..exceptions import (
    ConfigError,
    IterationLimitReached,
    NotInterior,
    NotPositiveDefinite,
    NumericalFailure,
)
from ..log import logger
from .membership import MembershipInstance, init_dual_membership

PHASE1_ETA_MAX = 0.1
CENTRALITY_LIMIT = 0.25
BRACKET_SLACK = 1e-8


@dataclass
class Phase1Report:
    iterate: Iterate
    alpha: float
    rescaled: np.ndarray
    eta: float
    mu: float
    tau: float
    tau_previous: float
    centrality: float
    damped_distance: float
    trace: list[TraceRecord] = field(default_factory=list)
    # 每次迭代后的 y，最后一项是穿越点 0
    dual_path: list[float] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.trace)


def build_phase1_problem(
    x0: np.ndarray,
    w: np.ndarray,
    cone: Cone,
    eta: float = PHASE1_ETA_MAX,
) -> tuple[ConicProblem, Iterate]:
    """
    Phase 1 问题 min (νw)ᵀx s.t. eᵀx = 1, e = −g(x₀)/ν，以及 𝒩(η̃, τ₀) 中 y₀ ≤ 0 的初始点。
    w = e 时初始点就是 (x₀, 0, −g(x₀))，τ₀ = 1。
    """
    x0 = np.asarray(x0, dtype=float)
    w = np.asarray(w, dtype=float)
    ev = cone.evaluate(x0)
    nu = ev.nu
    e = -ev.gradient / nu
    problem = ConicProblem(a=e[None, :], b=np.ones(1), c=nu * w, cone=cone)
    start = init_dual_membership(MembershipInstance(t=nu * w, w=e, cone=cone), x0, eta, y_cap=0.0)
    return problem, start


def _phase1_config(eta: float, config: SolverConfig | None) -> SolverConfig:
    if config is None:
        config = make_solver_config(variant=base_config.get("phase1_variant"))
    return config.with_overrides(eta=eta)


def phase1_solve(
    problem: ConicProblem,
    start: Iterate,
    eta: float = PHASE1_ETA_MAX,
    config: SolverConfig | None = None,
) -> Phase1Report:
    """
    在 Phase 1 问题上以半径 η̃ 跟踪中心路径；某步将使 y 由负变正时，
    改用当前 τ 处的牛顿方向并取 α = −y/Δy，恰好停在 y = 0。
    """
    if not 0 < eta <= PHASE1_ETA_MAX:
        raise ConfigError(f"Phase 1 邻域半径 η̃ = {eta} 须满足 η̃ ≤ 1/10")
    config = _phase1_config(eta, config)
    model = StandardModel(problem)
    strategy = get_strategy(config.variant)
    nu = model.nu
    check_start(model, start, config)
    state = start
    tau_previous = start.tau
    trace: list[TraceRecord] = []
    dual_path: list[float] = []
    logger.info(f"Phase 1 开始: ν = {nu:g}, η̃ = {eta:g}, τ₀ = {start.tau:.6e}, y₀ = {start.y[0]:.6e}")

    def record(following: Iterate, proposal: Proposal, alpha: float) -> None:
        dx_norm, ds_norm = direction_norms(state, proposal.direction)
        trace.append(
            TraceRecord(
                iteration=len(trace) + 1,
                tau=following.tau,
                tau_direction=proposal.tau_direction,
                mu=following.mu,
                gap=following.gap,
                distance=neighborhood_distance(following.eval, following.s, following.tau),
                step="full" if alpha == 1.0 else "damped",
                alpha=alpha,
                dx_norm=dx_norm,
                ds_norm=ds_norm,
            )
        )
        dual_path.append(float(following.y[0]))

    if state.y[0] >= 0:
        return _finish(problem, state, 0.0, state.tau, tau_previous, eta, config, trace, dual_path)

    while len(trace) < config.max_iterations:
        y = float(state.y[0])
        try:
            proposal = strategy.propose(model, state, config)
            if proposal.candidate.y[0] >= 0:
                direction = model.direction(state, state.tau)
                dy = float(direction.dy[0])
                if y + dy >= 0:
                    alpha = 1.0 if y + dy == 0 else -y / dy
                    final = model.step(state, direction, alpha)
                    final = Iterate(x=final.x, y=np.zeros(1), s=final.s, tau=state.tau, eval=final.eval)
                    damped = Proposal(direction, final, state.tau, state.tau)
                    record(final, damped, alpha)
                    return _finish(problem, final, alpha, state.tau, tau_previous, eta, config, trace, dual_path)
                candidate = model.step(state, direction, 1.0)
                proposal = Proposal(direction, candidate, state.tau, tau_fixed(state.tau, nu, eta))
            if config.invariant_checks:
                check_iteration_invariants(model, state, proposal, config)
        except (NotInterior, NotPositiveDefinite) as e:
            raise NumericalFailure(f"Phase 1 数值失败: {e}") from e
        following = proposal.candidate.with_tau(proposal.tau_next)
        record(following, proposal, 1.0)
        logger.debug(f"Phase 1 第 {len(trace)} 次迭代: τ = {following.tau:.6e}, y = {following.y[0]:.6e}")
        tau_previous = proposal.tau_direction
        state = following
    raise IterationLimitReached(f"Phase 1 在 {config.max_iterations} 次迭代内未到达 y = 0")


def _finish(
    problem: ConicProblem,
    final: Iterate,
    alpha: float,
    tau: float,
    tau_previous: float,
    eta: float,
    config: SolverConfig,
    trace: list[TraceRecord],
    dual_path: list[float],
) -> Phase1Report:
    nu = final.eval.nu
    mu = final.gap / nu
    if mu <= 0:
        raise NumericalFailure(f"Phase 1 终点对偶间隙非正: μ = {mu:.3e}")
    rescaled = final.x / mu
    w = problem.c / nu
    ev = problem.cone.evaluate(rescaled)
    centrality = ev.dual_norm(nu * w + ev.gradient)
    if centrality >= CENTRALITY_LIMIT:
        raise NumericalFailure(f"Phase 1 终点中心性不足: ‖νw + g(x/μ)‖* = {centrality:.6f} ≥ 1/4")
    # 最后一次满步与阻尼步的 ‖Δx‖ₓ 共同决定间隙下界
    delta = max([eta] + [r.dx_norm for r in trace[-2:]])
    lower = (1.0 - delta**2 / nu) * tau
    upper = max(tau_previous, tau)
    if config.variant is UpdateVariant.FIXED:
        upper = tau / (1.0 - config.theta(nu))
    if not lower * (1 - BRACKET_SLACK) <= mu <= upper * (1 + BRACKET_SLACK):
        raise NumericalFailure(f"Phase 1 终点 μ = {mu:.6e} 不在 [{lower:.6e}, {upper:.6e}] 内")
    damped_distance = neighborhood_distance(final.eval, final.s, tau)
    if damped_distance > 2 * eta * tau * (1 + BRACKET_SLACK):
        raise NumericalFailure(f"阻尼步后距离 {damped_distance:.6e} 超过 2η̃τ")
    logger.info(
        f"Phase 1 完成: {len(trace)} 次迭代, α = {alpha:.6f}, μ = {mu:.6e}, 中心性 = {centrality:.4f}"
    )
    return Phase1Report(
        iterate=final,
        alpha=alpha,
        rescaled=rescaled,
        eta=eta,
        mu=mu,
        tau=tau,
        tau_previous=tau_previous,
        centrality=centrality,
        damped_distance=damped_distance,
        trace=trace,
        dual_path=dual_path,
    )


def init_after_phase1(report: Phase1Report, inst: MembershipInstance, eta: float = 0.25) -> Iterate:
    """以 Phase 1 得到的 x/μ 作为 x₀（再按 wᵀx₀ = 1 归一化）调用对偶成员初始化。"""
    x0 = report.rescaled / float(report.rescaled @ inst.w)
    return init_dual_membership(inst, x0, eta)


def two_phase_start(
    inst: MembershipInstance,
    x0: np.ndarray,
    eta: float = 0.25,
    phase1_eta: float = PHASE1_ETA_MAX,
    config: SolverConfig | None = None,
) -> tuple[Iterate, Phase1Report]:
    """完整的两阶段初始化：构造并求解 Phase 1，再构造 𝒩(η, τ₀) 中的初始点。"""
    problem, start = build_phase1_problem(x0, inst.w, inst.cone, phase1_eta)
    report = phase1_solve(problem, start, phase1_eta, config)
    return init_after_phase1(report, inst, eta), report
