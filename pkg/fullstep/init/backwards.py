import math

import numpy as np

from ..config import BACKWARDS_ETA_MAX, ETA_MAX
from ..core import ConicProblem, Iterate, neighborhood_distance, newton_direction, take_step
from ..exceptions import (
    ConfigError,
    IterationLimitReached,
    NotInterior,
    NotPositiveDefinite,
    NumericalFailure,
    PreconditionFailed,
)
from ..log import logger

FEASIBILITY_TOL = 1e-8


def backwards_phase1(
    problem: ConicProblem,
    x0: np.ndarray,
    eta_tilde: float = 0.2,
    eta: float = 0.25,
    max_iterations: int | None = None,
) -> Iterate:
    """
    沿以 −g(x₀) 为目标的辅助中心路径反向前进（τ⁺ = (1+ϑ)τ），
    直到 ‖c − Aᵀy + τg(x)‖*ₓ ≤ ητ，返回原问题的初始点 (x, y, c − Aᵀy, τ)。
    """
    if not 0 < eta_tilde <= BACKWARDS_ETA_MAX:
        raise ConfigError(f"反向 Phase 1 的 η̃ = {eta_tilde} 须满足 η̃ ≤ 1/3")
    if not 0 < eta <= ETA_MAX:
        raise ConfigError(f"η = {eta} 超出 (0, 1/4]")
    x0 = np.asarray(x0, dtype=float)
    if problem.primal_residual(x0) > FEASIBILITY_TOL * (1 + np.linalg.norm(problem.b)):
        raise PreconditionFailed("反向 Phase 1 需要 Ax₀ = b")
    cone = problem.cone
    ev = cone.evaluate(x0)
    nu = ev.nu
    auxiliary = ConicProblem(a=problem.a, b=problem.b, c=-ev.gradient, cone=cone)
    state = Iterate(x=x0.copy(), y=np.zeros(problem.m), s=-ev.gradient, tau=1.0, eval=ev)
    growth = 1.0 + (eta_tilde / 2.0) / (math.sqrt(nu) + 1.0)
    cap = max_iterations if max_iterations is not None else math.ceil(500 * (math.sqrt(nu) + 1.0))

    for k in range(cap + 1):
        s = problem.c - problem.a.T @ state.y
        if neighborhood_distance(state.eval, s, state.tau) <= eta * state.tau:
            logger.info(f"反向 Phase 1 在第 {k} 次迭代切换到原问题, τ = {state.tau:.6e}")
            return Iterate(x=state.x, y=state.y, s=s, tau=state.tau, eval=state.eval)
        if k == cap:
            break
        try:
            direction = newton_direction(auxiliary, state)
            state = take_step(cone, state, direction, 1.0).with_tau(state.tau * growth)
        except (NotInterior, NotPositiveDefinite) as e:
            raise NumericalFailure(f"反向 Phase 1 数值失败: {e}") from e
        distance = neighborhood_distance(state.eval, state.s, state.tau)
        if distance > eta_tilde * state.tau * (1 + 1e-8):
            raise NumericalFailure(f"反向 Phase 1 离开辅助路径邻域: 距离 {distance:.6e}")
        logger.debug(f"反向 Phase 1 第 {k + 1} 次迭代: τ = {state.tau:.6e}")
    raise IterationLimitReached(f"反向 Phase 1 在 {cap} 次迭代内未进入原问题的邻域")
