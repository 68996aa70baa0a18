from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..exceptions import DimensionMismatch
from ..linalg import SpdFactor, solve_spd


@dataclass(frozen=True)
class BarrierEval:
    """内点 x 处的障碍函数值、梯度、Hessian（含 Cholesky 因子）与参数 ν"""

    point: np.ndarray
    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    factor: SpdFactor
    nu: float

    @property
    def dim(self) -> int:
        return self.point.shape[0]

    def _check(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"向量维度 {v.shape[0]} 与锥维度 {self.dim} 不一致")
        return v

    def inverse_hessian_times(self, v: np.ndarray) -> np.ndarray:
        return solve_spd(self.factor, self._check(v))

    def hessian_times(self, v: np.ndarray) -> np.ndarray:
        v = self._check(v)
        return self.factor.lower @ self.factor.multiply_upper(v)

    def dual_norm(self, v: np.ndarray) -> float:
        """‖v‖*ₓ = √(vᵀH⁻¹v)，经 L⁻¹v 计算。"""
        return float(np.linalg.norm(self.factor.solve_lower(self._check(v))))

    def local_norm(self, v: np.ndarray) -> float:
        """‖v‖ₓ = √(vᵀHv)，经 Lᵀv 计算。"""
        return float(np.linalg.norm(self.factor.multiply_upper(self._check(v))))


class Cone(ABC):
    """带对数齐次自和谐障碍函数的凸锥"""

    @property
    @abstractmethod
    def dim(self) -> int:
        raise NotImplementedError

    @property
    @abstractmethod
    def nu(self) -> float:
        raise NotImplementedError

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> BarrierEval:
        """
        计算 x 处的障碍函数预言机；x 不在内部时抛出 NotInterior。
        """
        raise NotImplementedError

    @abstractmethod
    def interior_point(self) -> np.ndarray:
        """锥的规范内点（HSD 锚点、自检的默认点）。"""
        raise NotImplementedError

    def describe(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, ν={self.nu:g})"

    def _check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.shape[0] != self.dim:
            raise DimensionMismatch(f"{self.describe()} 收到形状为 {x.shape} 的点")
        return x


def evaluate(cone: Cone, x: np.ndarray) -> BarrierEval:
    return cone.evaluate(x)


def dual_local_norm(ev: BarrierEval, v: np.ndarray) -> float:
    return ev.dual_norm(v)


def local_norm(ev: BarrierEval, v: np.ndarray) -> float:
    return ev.local_norm(v)


def build_cone(spec: dict[str, Any]) -> Cone:
    """
    锥工厂函数：根据 JSON 描述构造锥。
    """
    cone_type = str(spec.get("type", "")).lower()
    if cone_type == "orthant":
        from .orthant import Orthant

        return Orthant(int(spec["dim"]))
    if cone_type == "product":
        from .composite import Product

        return Product([build_cone(member) for member in spec["cones"]])
    if cone_type == "extended":
        from .composite import Extended

        return Extended(build_cone(spec["inner"]))
    if cone_type == "moment":
        from ..sos.moment_cone import MomentCone
        from ..sos.instance import SemialgebraicInstance

        instance = SemialgebraicInstance.from_spec(spec)
        return MomentCone.from_instance(instance)
    raise ValueError(f"未知的锥类型: '{spec.get('type')}'")


__all__ = [
    "BarrierEval",
    "Cone",
    "build_cone",
    "dual_local_norm",
    "evaluate",
    "local_norm",
]
