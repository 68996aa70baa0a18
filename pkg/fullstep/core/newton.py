import numpy as np

from ..cones import BarrierEval, Cone
from ..exceptions import DimensionMismatch
from ..linalg import cholesky, schur_complement, solve_spd, symmetrize
from .problem import ConicProblem, Iterate, StandardDirection


def neighborhood_distance(ev: BarrierEval, s: np.ndarray, tau: float) -> float:
    """‖s + τ·g(x)‖*ₓ"""
    if tau <= 0:
        raise ValueError(f"路径参数 τ 必须为正: {tau}")
    s = np.asarray(s, dtype=float)
    if s.shape[0] != ev.dim:
        raise DimensionMismatch(f"s 的维度 {s.shape[0]} 与 x 的维度 {ev.dim} 不一致")
    return ev.dual_norm(s + tau * ev.gradient)


def newton_direction(problem: ConicProblem, it: Iterate, tau: float | None = None) -> StandardDirection:
    """
    求解 AΔx = 0, AᵀΔy + Δs = 0, τHΔx + Δs = −(s + τg)，经 Schur 补 A·H⁻¹·Aᵀ 消元。
    """
    tau = it.tau if tau is None else tau
    ev = it.eval
    r = it.s + tau * ev.gradient
    schur, v = schur_complement(ev.factor, problem.a)
    schur_factor = cholesky(symmetrize(schur))
    dy = solve_spd(schur_factor, v.T @ ev.factor.solve_lower(r))
    aty = problem.a.T @ dy
    dx = ev.inverse_hessian_times(aty - r) / tau
    return StandardDirection(dx=dx, dy=dy, ds=-aty)


def take_step(cone: Cone, it: Iterate, direction: StandardDirection, alpha: float = 1.0) -> Iterate:
    """沿方向走步长 α 并重新计算障碍函数；离开锥内部时抛出 NotInterior。"""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"步长 α 必须在 (0, 1] 内: {alpha}")
    x = it.x + alpha * direction.dx
    return Iterate(
        x=x,
        y=it.y + alpha * direction.dy,
        s=it.s + alpha * direction.ds,
        tau=it.tau,
        eval=cone.evaluate(x),
    )
