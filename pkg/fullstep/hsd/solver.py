from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..config import SolverConfig, base_config
from ..core import PathModel, Proposal, SolveOutcome, follow_path
from ..exceptions import NumericalFailure
from ..log import logger
from .embedding import (
    Embedding,
    HsdDirection,
    HsdState,
    equality_residual,
    hsd_newton,
    hsd_step,
)

THETA_RTOL = 1e-8
THETA_ATOL = 1e-14
KAPPA_XI_SLACK = 1e-8


@dataclass(frozen=True)
class HsdThresholds:
    xi_ratio: float = 1e-6
    ray_tol: float = 1e-8

    @classmethod
    def from_config(cls) -> "HsdThresholds":
        return cls(
            xi_ratio=float(base_config.get("xi_threshold", 1e-6)),
            ray_tol=float(base_config.get("ray_tol", 1e-8)),
        )


class HsdModel(PathModel):
    """扩展锥 𝒦×ℝ₊ 上（参数 ν+1）的嵌入中心路径"""

    def __init__(self, emb: Embedding, thresholds: HsdThresholds | None = None):
        self.emb = emb
        self.cone = emb.cone
        self.thresholds = thresholds or HsdThresholds()

    def direction(self, state: HsdState, tau: float) -> HsdDirection:
        return hsd_newton(self.emb, state, tau)

    def step(self, state: HsdState, direction: HsdDirection, alpha: float) -> HsdState:
        return hsd_step(self.emb, state, direction, alpha)

    def residual(self, state: HsdState) -> float:
        return float(np.linalg.norm(equality_residual(self.emb, state))) / (1.0 + self.emb.anchor_gap)

    def converged(self, state: HsdState, eps: float) -> bool:
        """
        嵌入间隙 ≤ ε 之外，ξ 未被判为趋零时还要求还原后的间隙 xᵀs/ξ² 与
        对偶不可行度 θ/ξ 都 ≤ ε；否则除以 ξ 会把残留误差放大。
        """
        if state.gap > eps:
            return False
        scale = max(state.xi, state.kappa, state.theta)
        if state.xi / scale < self.thresholds.xi_ratio:
            return True
        return float(state.x @ state.s) / state.xi**2 <= eps and state.theta / state.xi <= eps

    def classify(self, state: HsdState) -> str | None:
        scale = max(state.xi, state.kappa, state.theta)
        cutoff = self.thresholds.xi_ratio
        if state.xi / scale < cutoff and state.kappa / scale >= cutoff:
            return f"ξ/max(ξ,κ,θ) = {state.xi / scale:.3e} 低于阈值，判定为不可行"
        return None

    def check_state(self, state: HsdState, tau_previous: float, eta: float) -> None:
        mu = state.mu
        if abs(state.theta - mu) > THETA_RTOL * abs(mu) + THETA_ATOL:
            raise NumericalFailure(f"不变量被破坏 [theta-mu]: θ = {state.theta:.12e}, μ = {mu:.12e}")
        if state.kappa * state.xi < (1 - eta) * state.tau * (1 - KAPPA_XI_SLACK):
            raise NumericalFailure(
                f"不变量被破坏 [kappa-xi]: κξ = {state.kappa * state.xi:.6e} < (1−η)τ = {(1 - eta) * state.tau:.6e}"
            )


def hsd_solve(
    emb: Embedding,
    st: HsdState,
    config: SolverConfig,
    thresholds: HsdThresholds | None = None,
) -> SolveOutcome:
    """在嵌入上运行所选 τ 更新策略，记录 ω = min τ_k/τ_{k−1} 与 β = 1 − (1−η)ω。"""
    model = HsdModel(emb, thresholds)
    ratios: list[float] = []

    def on_commit(before: Any, after: Any, proposal: Proposal) -> None:
        ratios.append(after.tau / before.tau)

    outcome = follow_path(model, st, config, on_commit=on_commit)
    omega = min(ratios) if ratios else 1.0
    final: HsdState = outcome.state
    outcome.extras.update(
        {
            "omega": omega,
            "beta": 1.0 - (1.0 - config.eta) * omega,
            "xi": final.xi,
            "kappa": final.kappa,
            "theta": final.theta,
        }
    )
    logger.info(
        f"HSD 求解结束: ξ = {final.xi:.3e}, κ = {final.kappa:.3e}, θ = {final.theta:.3e}, "
        f"β = {outcome.extras['beta']:.6f}"
    )
    return outcome


@dataclass
class Solution:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    gap: float
    kind: str = "solution"


@dataclass
class Certificate:
    infeasibility: list[str]
    y: np.ndarray
    x: np.ndarray
    b_dot_y: float
    neg_c_dot_x: float
    kind: str = "certificate"


@dataclass
class Unclassified:
    reason: str
    diagnostics: dict[str, float] = field(default_factory=dict)
    kind: str = "unclassified"


def extract(
    emb: Embedding,
    st: HsdState,
    thresholds: HsdThresholds | None = None,
) -> Solution | Certificate | Unclassified:
    """按 ξ 与 κ 的相对大小给出原问题的解、不可行性证书或无法分类。"""
    thresholds = thresholds or HsdThresholds()
    p = emb.problem
    diagnostics = {"xi": st.xi, "kappa": st.kappa, "theta": st.theta, "mu": st.mu}
    xi_min = thresholds.xi_ratio * max(1.0, st.kappa)
    if st.xi > 0 and st.xi >= xi_min:
        x, y, s = st.x / st.xi, st.y / st.xi, st.s / st.xi
        return Solution(
            x=x,
            y=y,
            s=s,
            primal_objective=float(p.c @ x),
            dual_objective=float(p.b @ y),
            primal_residual=p.primal_residual(x),
            dual_residual=p.dual_residual(y, s),
            gap=float(x @ s),
        )
    if st.kappa > st.xi:
        b_dot_y = float(p.b @ st.y)
        neg_c_dot_x = float(-(p.c @ st.x))
        kinds = []
        if b_dot_y > thresholds.ray_tol:
            kinds.append("primal_infeasible")
        if neg_c_dot_x > thresholds.ray_tol:
            kinds.append("dual_infeasible")
        if kinds:
            return Certificate(infeasibility=kinds, y=st.y.copy(), x=st.x.copy(), b_dot_y=b_dot_y, neg_c_dot_x=neg_c_dot_x)
        return Unclassified("κ 占优但射线符号检验均未通过", diagnostics)
    return Unclassified("ξ 与 κ 同时趋于零", diagnostics)
