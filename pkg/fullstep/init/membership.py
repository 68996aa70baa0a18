from dataclasses import dataclass

import numpy as np

from ..cones import Cone
from ..config import ETA_MAX
from ..core import ConicProblem, Iterate
from ..exceptions import ConfigError, PreconditionFailed

NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class MembershipInstance:
    """min tᵀx s.t. wᵀx = 1, x ∈ 𝒦，其中 w ∈ (𝒦*)°"""

    t: np.ndarray
    w: np.ndarray
    cone: Cone

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float))

    def problem(self) -> ConicProblem:
        return ConicProblem(a=self.w[None, :], b=np.ones(1), c=self.t, cone=self.cone)


def init_dual_membership(
    inst: MembershipInstance,
    x0: np.ndarray,
    eta: float,
    y_cap: float | None = None,
) -> Iterate:
    """
    以满足 x₀ᵀw = 1 的内点 x₀ 构造 𝒩(η, τ₀) 中的初始迭代点：
    y₀ = x₀ᵀt − ν‖t − (x₀ᵀt)w‖* / (η − ‖νw + g(x₀)‖*)，s₀ = t − y₀w，τ₀ = x₀ᵀs₀/ν。

    y_cap 给出 y₀ 的上限（取更小的 y₀ 仍满足同一邻域结论）。
    """
    if not 0 < eta <= ETA_MAX:
        raise ConfigError(f"η = {eta} 超出 (0, 1/4]")
    x0 = np.asarray(x0, dtype=float)
    normalization = float(x0 @ inst.w)
    if abs(normalization - 1.0) > NORMALIZATION_TOL:
        raise PreconditionFailed(f"需要 x₀ᵀw = 1，实际为 {normalization:.12g}")
    ev = inst.cone.evaluate(x0)
    nu = ev.nu
    offset = ev.dual_norm(nu * inst.w + ev.gradient)
    if offset >= eta:
        raise PreconditionFailed(
            f"‖νw + g(x₀)‖* = {offset:.6g} ≥ η = {eta:g}；可取 w := −g(x₀)/ν"
        )
    xt = float(x0 @ inst.t)
    spread = ev.dual_norm(inst.t - xt * inst.w)
    if spread > 1e-14 * max(1.0, ev.dual_norm(inst.t)):
        y0 = xt - nu * spread / (eta - offset)
    else:
        # t 与 w 共线时任意 τ₀ > 0 均可，取 τ₀ = 1
        y0 = xt - nu
    if y_cap is not None:
        y0 = min(y0, y_cap)
    s0 = inst.t - y0 * inst.w
    return Iterate(x=x0.copy(), y=np.array([y0]), s=s0, tau=float(x0 @ s0) / nu, eval=ev)
