from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from ..cones import Cone
from .newton import newton_direction, take_step
from .problem import ConicProblem, Iterate, StandardDirection


class PathModel(ABC):
    """
    中心路径模型：路径跟踪驱动与 τ 更新策略只通过这组接口访问迭代点，
    标准形式与 HSD 嵌入各有一个实现。
    """

    cone: Cone

    @property
    def nu(self) -> float:
        return self.cone.nu

    @abstractmethod
    def direction(self, state: Any, tau: float) -> Any:
        """当前点在参数 τ 处的牛顿方向。"""
        raise NotImplementedError

    @abstractmethod
    def step(self, state: Any, direction: Any, alpha: float) -> Any:
        """沿方向走步长 α，τ 保持不变。"""
        raise NotImplementedError

    @abstractmethod
    def residual(self, state: Any) -> float:
        """线性约束的相对残差。"""
        raise NotImplementedError

    def converged(self, state: Any, eps: float) -> bool:
        """停止判据：默认 xᵀs ≤ ε。"""
        return state.gap <= eps

    def classify(self, state: Any) -> str | None:
        """提前停止的分类结论，没有时返回 None。"""
        return None

    def check_state(self, state: Any, tau_previous: float, eta: float) -> None:
        """模型特有的逐次迭代不变量，违反时抛出 NumericalFailure。"""
        return None


class StandardModel(PathModel):
    """标准形式 min cᵀx s.t. Ax = b 的中心路径"""

    def __init__(self, problem: ConicProblem):
        self.problem = problem
        self.cone = problem.cone

    def direction(self, state: Iterate, tau: float) -> StandardDirection:
        return newton_direction(self.problem, state, tau)

    def step(self, state: Iterate, direction: StandardDirection, alpha: float) -> Iterate:
        return take_step(self.cone, state, direction, alpha)

    def residual(self, state: Iterate) -> float:
        p = self.problem
        primal = p.primal_residual(state.x) / (1.0 + float(np.linalg.norm(p.b)))
        dual = p.dual_residual(state.y, state.s) / (1.0 + float(np.linalg.norm(p.c)))
        return max(primal, dual)


def as_model(target: ConicProblem | PathModel) -> PathModel:
    if isinstance(target, PathModel):
        return target
    return StandardModel(target)
