import math
from typing import Any, Callable

from ..config import SolverConfig, UpdateVariant
from ..exceptions import (
    InvalidTolerance,
    NotInterior,
    NotPositiveDefinite,
    NumericalFailure,
    SingularSystem,
    StartNotInNeighborhood,
)
from ..log import logger
from .model import PathModel, StandardModel
from .newton import neighborhood_distance
from .problem import ConicProblem, Iterate, SolveOutcome, SolveStatus, TraceRecord
from .strategies import Proposal, direction_norms, get_strategy

INVARIANT_SLACK = 1e-8
ORTHOGONALITY_TOL = 1e-10
MONOTONE_SLACK = 1e-12
# 线性残差超过该值即视为数值失败
DRIFT_LIMIT = 1e-6


def theoretical_iteration_bound(tau0: float, nu: float, eta: float, eps: float) -> int:
    """⌈(2/η)(√ν+1)·ln(τ₀ν/ε)⌉ + 1"""
    if min(tau0, nu, eta, eps) <= 0:
        raise InvalidTolerance("迭代上界的所有参数都必须为正")
    if eps > tau0 * nu:
        raise InvalidTolerance(f"ε = {eps:g} 大于初始间隙 τ₀ν = {tau0 * nu:g}，迭代上界无意义")
    return math.ceil((2.0 / eta) * (math.sqrt(nu) + 1.0) * math.log(tau0 * nu / eps)) + 1


def check_iteration_invariants(
    model: PathModel,
    state: Any,
    proposal: Proposal,
    config: SolverConfig,
) -> None:
    """逐次迭代检查正交性、方向范数、间隙区间、邻域保持与 τ 单调性。"""
    eta = config.eta
    nu = model.nu
    ev = state.eval
    tau = state.tau
    tau_dir = proposal.tau_direction
    tau_next = proposal.tau_next
    direction = proposal.direction
    dx, ds = direction.primal, direction.slack
    grow = 1 + INVARIANT_SLACK

    def fail(name: str, detail: str) -> None:
        raise NumericalFailure(f"不变量被破坏 [{name}]: {detail}")

    inner = abs(float(dx @ ds))
    scale = 1.0 + float((dx @ dx) ** 0.5 * (ds @ ds) ** 0.5)
    if inner > ORTHOGONALITY_TOL * scale:
        fail("orthogonality", f"|ΔxᵀΔs| = {inner:.3e}")

    # 方向在 τ_dir 处求解时，δ = max(η, dist(τ_dir)/τ_dir) 同时界住 ‖Δx‖ₓ、‖Δs‖*/τ_dir 与再中心化残差
    delta = max(eta, neighborhood_distance(ev, state.slack, tau_dir) / tau_dir)
    dx_norm, ds_norm = direction_norms(state, direction)
    if dx_norm > delta * grow:
        fail("direction-norm", f"‖Δx‖ₓ = {dx_norm:.6e} > δ = {delta:.6e}")
    if ds_norm > delta * tau_dir * grow:
        fail("direction-norm", f"‖Δs‖*ₓ = {ds_norm:.6e} > δτ = {delta * tau_dir:.6e}")

    recentered = ev.dual_norm(state.slack + tau_dir * ev.gradient + ds)
    if recentered > delta * tau_dir * grow:
        fail("recentering", f"‖s + τg + Δs‖*ₓ = {recentered:.6e} > δτ")

    gap = proposal.candidate.gap
    if not tau_dir * (nu - delta**2) * (1 - INVARIANT_SLACK) <= gap <= tau_dir * nu * grow:
        fail("gap-bracket", f"x⁺ᵀs⁺ = {gap:.6e} 不在 [τ(ν−δ²), τν] 内, τ = {tau_dir:.6e}")

    distance = neighborhood_distance(proposal.candidate.eval, proposal.candidate.slack, tau_next)
    if distance > eta * tau_next * grow:
        fail("neighborhood", f"距离 {distance:.6e} > ητ⁺ = {eta * tau_next:.6e}")

    if not tau_next < tau:
        fail("monotone-tau", f"τ⁺ = {tau_next:.6e} ≥ τ = {tau:.6e}")
    if config.variant is not UpdateVariant.FIXED:
        cap = (1.0 - config.theta(nu)) * tau * (1 + MONOTONE_SLACK)
        if tau_next > cap:
            fail("monotone-tau", f"τ⁺ = {tau_next:.6e} > (1−ϑ)τ")


def check_start(model: PathModel, start: Any, config: SolverConfig) -> float:
    distance = neighborhood_distance(start.eval, start.slack, start.tau)
    if distance > config.eta * start.tau * (1 + INVARIANT_SLACK):
        raise StartNotInNeighborhood(
            f"初始点不在 𝒩(η, τ₀) 内: 距离 {distance:.6e} > ητ₀ = {config.eta * start.tau:.6e}"
        )
    residual = model.residual(start)
    if residual > DRIFT_LIMIT:
        raise StartNotInNeighborhood(f"初始点线性不可行: 相对残差 {residual:.3e}")
    return distance


def follow_path(
    model: PathModel,
    start: Any,
    config: SolverConfig,
    on_commit: Callable[[Any, Any, Proposal], None] | None = None,
) -> SolveOutcome:
    """
    全牛顿步路径跟踪：在 x̃ᵀs̃ > ε 时按所选策略迭代，记录轨迹。
    """
    check_start(model, start, config)
    strategy = get_strategy(config.variant)
    nu = model.nu
    try:
        bound = theoretical_iteration_bound(start.tau, nu, config.eta, config.eps)
    except InvalidTolerance:
        bound = 1
    state = start
    trace: list[TraceRecord] = []
    logger.info(
        f"开始路径跟踪: ν = {nu:g}, η = {config.eta:g}, ε = {config.eps:g}, "
        f"策略 = {config.variant.value}, 理论迭代上界 = {bound}"
    )

    def finish(status: SolveStatus, reason: str | None = None) -> SolveOutcome:
        log = logger.info if status in (SolveStatus.OPTIMAL, SolveStatus.NEAR_OPTIMAL) else logger.warning
        log(f"路径跟踪结束: {status.value}，迭代 {len(trace)} 次，间隙 {state.gap:.3e}" + (f"，原因: {reason}" if reason else ""))
        return SolveOutcome(status=status, state=state, trace=trace, bound=bound, reason=reason)

    def stalled(reason: str) -> SolveOutcome:
        # 间隙已在 stall_factor·ε 以内时，数值崩溃只说明 ε 低于可达精度
        if model.converged(state, config.stall_factor * config.eps) and model.residual(state) <= config.feas_tol:
            return finish(SolveStatus.NEAR_OPTIMAL, reason)
        return finish(SolveStatus.NUMERICAL_FAILURE, reason)

    while True:
        if model.converged(state, config.eps):
            residual = model.residual(state)
            if residual > config.feas_tol:
                return finish(SolveStatus.NUMERICAL_FAILURE, f"线性残差 {residual:.3e} 超过 feas_tol")
            return finish(SolveStatus.OPTIMAL)
        verdict = model.classify(state)
        if verdict is not None:
            return finish(SolveStatus.CERTIFICATE, verdict)
        if len(trace) >= config.max_iterations:
            return finish(SolveStatus.ITERATION_LIMIT, f"达到最大迭代次数 {config.max_iterations}")
        try:
            proposal = strategy.propose(model, state, config)
        except NumericalFailure as e:
            return stalled(e.reason)
        except (NotInterior, NotPositiveDefinite, SingularSystem) as e:
            return stalled(f"{type(e).__name__}: {e}")
        following = proposal.candidate.with_tau(proposal.tau_next)
        if config.invariant_checks:
            try:
                check_iteration_invariants(model, state, proposal, config)
                model.check_state(following, state.tau, config.eta)
            except NumericalFailure as e:
                return finish(SolveStatus.NUMERICAL_FAILURE, e.reason)
        residual = model.residual(following)
        if residual > DRIFT_LIMIT:
            return finish(SolveStatus.NUMERICAL_FAILURE, f"线性残差漂移 {residual:.3e}")
        dx_norm, ds_norm = direction_norms(state, proposal.direction)
        record = TraceRecord(
            iteration=len(trace) + 1,
            tau=proposal.tau_next,
            tau_direction=proposal.tau_direction,
            mu=following.mu,
            gap=following.gap,
            distance=neighborhood_distance(following.eval, following.slack, following.tau),
            step="full",
            alpha=1.0,
            dx_norm=dx_norm,
            ds_norm=ds_norm,
        )
        trace.append(record)
        logger.debug(
            f"第 {record.iteration} 次迭代: τ = {record.tau:.6e}, μ = {record.mu:.6e}, "
            f"间隙 = {record.gap:.6e}, 距离/τ = {record.distance / record.tau:.4f}"
        )
        if on_commit is not None:
            on_commit(state, following, proposal)
        state = following


def solve(problem: ConicProblem, start: Iterate, config: SolverConfig) -> SolveOutcome:
    """从 𝒩(η, τ₀) 中的严格可行点出发求解标准形式锥规划。"""
    return follow_path(StandardModel(problem), start, config)


def outcome_summary(problem: ConicProblem, outcome: SolveOutcome) -> dict[str, float]:
    it: Iterate = outcome.state
    return {
        "primal_objective": float(problem.c @ it.x),
        "dual_objective": float(problem.b @ it.y),
        "gap": it.gap,
        "primal_residual": problem.primal_residual(it.x),
        "dual_residual": problem.dual_residual(it.y, it.s),
    }
