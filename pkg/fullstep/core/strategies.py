from abc import ABC, abstractmethod
from dataclasses import dataclass
import math
from typing import Any

from ..config import SolverConfig, UpdateVariant
from ..exceptions import (
    NegativeDiscriminant,
    NotInterior,
    NotPositiveDefinite,
    NumericalFailure,
    SingularSystem,
)
from ..log import logger
from .model import PathModel, as_model
from .newton import neighborhood_distance

# 判别式相对截断：[−DISCRIMINANT_TOL·b², 0) 内视为舍入误差
DISCRIMINANT_TOL = 1e-12
ADAPTIVE_POST_SLACK = 1e-10
ADAPTIVE_SAFETY = 1e-6
# 满步须落在 Dikin 椭球 ‖Δx‖ₓ < 1 内
DIKIN_RADIUS = 1.0
FALLBACK_SLACK = 1e-8


@dataclass(frozen=True)
class Proposal:
    """一次迭代的候选结果：方向、满步后的点以及新的 τ"""

    direction: Any
    candidate: Any
    tau_direction: float
    tau_next: float
    trials: int = 1


def tau_fixed(tau: float, nu: float, eta: float) -> float:
    """τ⁺ = (1 − ϑ)τ，ϑ = (η/2)/(√ν + 1)。"""
    if tau <= 0:
        raise ValueError(f"路径参数 τ 必须为正: {tau}")
    return (1.0 - (eta / 2.0) / (math.sqrt(nu) + 1.0)) * tau


def tau_adaptive(candidate: Any, nu: float, eta: float, ceiling: float | None = None) -> float:
    """
    满步后使候选点仍在 𝒩(η, τ) 中的最小 τ。

    ‖s + τg‖*² = ‖s‖*² + 2τ·gᵀH⁻¹s + τ²‖g‖*²，三项都用同一个因子计算，
    取二次不等式的较小根，写成无抵消形式 c / (−b + √disc)。
    根按略小的半径 η(1 − ADAPTIVE_SAFETY) 求出，使返回点严格位于邻域内部；
    给定 ceiling（通常是固定更新的 τ）时，根落在其上方或复核失败都退回 ceiling。
    """
    ev = candidate.eval
    ws = ev.factor.solve_lower(candidate.slack)
    wg = ev.factor.solve_lower(ev.gradient)
    radius = eta * (1.0 - ADAPTIVE_SAFETY)
    a = float(wg @ wg) - radius**2
    b = float(wg @ ws)
    c = float(ws @ ws)
    if -b <= 0:
        raise NumericalFailure(f"候选点对偶间隙非正: xᵀs = {-b:.3e}")
    disc = b * b - a * c
    if disc < 0:
        if disc < -DISCRIMINANT_TOL * b * b:
            if ceiling is None:
                raise NegativeDiscriminant(f"自适应更新判别式为负: {disc:.3e}")
            disc = None
        else:
            disc = 0.0
    candidates = [] if disc is None else [c / (-b + math.sqrt(disc))]
    if ceiling is not None:
        candidates = [min(t, ceiling) for t in candidates] + [ceiling]
    for k, tau_plus in enumerate(candidates):
        distance = neighborhood_distance(ev, candidate.slack, tau_plus)
        if distance <= eta * tau_plus * (1 + ADAPTIVE_POST_SLACK):
            if k > 0:
                logger.debug(f"自适应根复核失败，退回上界 τ = {tau_plus:.6e}")
            return tau_plus
    raise NumericalFailure(
        f"自适应更新后点不在邻域内: 距离 {distance:.6e} > ητ⁺ = {eta * tau_plus:.6e}"
    )


def _attempt(
    model: PathModel,
    state: Any,
    tau_try: float,
    config: SolverConfig,
    residual_limit: float,
) -> tuple[Any, Any] | None:
    """在 τ_try 处求解并走满步；候选点离开邻域或线性残差超限时返回 None。"""
    try:
        direction = model.direction(state, tau_try)
        if not state.eval.local_norm(direction.primal) < DIKIN_RADIUS:
            return None
        candidate = model.step(state, direction, 1.0)
    except (NotInterior, NotPositiveDefinite, SingularSystem):
        return None
    eta = config.eta
    if neighborhood_distance(candidate.eval, candidate.slack, tau_try) > eta * tau_try:
        return None
    if model.residual(candidate) > residual_limit:
        return None
    return direction, candidate


def tau_largest(target: Any, state: Any, config: SolverConfig) -> Proposal:
    """
    回溯线搜索近似最大步长更新：从 (1−ϑ)τ 出发，只要在 τ_try 处重新求解的
    满步仍落在 𝒩(η, τ_try) 内就继续乘以收缩因子；第一次失败后在最后一个
    成功值与失败值之间做几何二分细化。单次迭代 τ 不低于 min_tau_ratio·τ，
    总求解次数不超过 max_trials + 1。

    首个试探即失败时退回固定更新：方向在 τ 处求解，τ⁺ = (1−ϑ)τ。
    """
    model = as_model(target)
    eta = config.eta
    residual_limit = max(config.feas_tol, model.residual(state))
    floor = config.min_tau_ratio * state.tau
    tau_ok = tau_fixed(state.tau, model.nu, eta)
    result = _attempt(model, state, tau_ok, config, residual_limit)
    if result is None:
        logger.info(f"最大步长更新在 τ = {tau_ok:.6e} 处首次试探失败，回退到固定更新步")
        direction = model.direction(state, state.tau)
        candidate = model.step(state, direction, 1.0)
        if neighborhood_distance(candidate.eval, candidate.slack, tau_ok) > eta * tau_ok * (1 + FALLBACK_SLACK):
            raise NumericalFailure("固定更新步也未能回到邻域内")
        return Proposal(direction, candidate, state.tau, tau_ok, trials=2)
    direction, candidate = result
    tau_fail: float | None = None
    trials = 1
    refinements = 0
    while trials <= config.max_trials:
        if tau_fail is None:
            trial = tau_ok * config.shrink_factor
            if trial < floor:
                break
        else:
            if refinements >= config.refinements:
                break
            trial = math.sqrt(tau_ok * tau_fail)
            refinements += 1
        trials += 1
        result = _attempt(model, state, trial, config, residual_limit)
        if result is None:
            tau_fail = trial
            continue
        tau_ok = trial
        direction, candidate = result
    return Proposal(direction, candidate, tau_ok, tau_ok, trials=trials)


class UpdateStrategy(ABC):
    """τ 更新策略的抽象基类"""

    variant: UpdateVariant

    @abstractmethod
    def propose(self, model: PathModel, state: Any, config: SolverConfig) -> Proposal:
        """
        计算一次迭代的方向、满步候选点与新的 τ。
        """
        raise NotImplementedError


class FixedUpdate(UpdateStrategy):
    variant = UpdateVariant.FIXED

    def propose(self, model: PathModel, state: Any, config: SolverConfig) -> Proposal:
        direction = model.direction(state, state.tau)
        candidate = model.step(state, direction, 1.0)
        return Proposal(direction, candidate, state.tau, tau_fixed(state.tau, model.nu, config.eta))


class AdaptiveUpdate(UpdateStrategy):
    variant = UpdateVariant.ADAPTIVE

    def propose(self, model: PathModel, state: Any, config: SolverConfig) -> Proposal:
        direction = model.direction(state, state.tau)
        candidate = model.step(state, direction, 1.0)
        return Proposal(
            direction,
            candidate,
            state.tau,
            tau_adaptive(candidate, model.nu, config.eta, ceiling=tau_fixed(state.tau, model.nu, config.eta)),
        )


class LargestUpdate(UpdateStrategy):
    variant = UpdateVariant.LARGEST

    def propose(self, model: PathModel, state: Any, config: SolverConfig) -> Proposal:
        return tau_largest(model, state, config)


def get_strategy(variant: UpdateVariant | str) -> UpdateStrategy:
    """
    τ 更新策略工厂函数。
    """
    normalized = UpdateVariant(str(getattr(variant, "value", variant)).lower())
    if normalized is UpdateVariant.FIXED:
        return FixedUpdate()
    if normalized is UpdateVariant.ADAPTIVE:
        return AdaptiveUpdate()
    return LargestUpdate()


def direction_norms(state: Any, direction: Any) -> tuple[float, float]:
    ev = state.eval
    return ev.local_norm(direction.primal), ev.dual_norm(direction.slack)


__all__ = [
    "AdaptiveUpdate",
    "FixedUpdate",
    "LargestUpdate",
    "Proposal",
    "UpdateStrategy",
    "direction_norms",
    "get_strategy",
    "tau_adaptive",
    "tau_fixed",
    "tau_largest",
]
