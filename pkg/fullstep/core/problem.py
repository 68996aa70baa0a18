from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

import numpy as np

from ..cones import BarrierEval, Cone
from ..exceptions import DimensionMismatch, PreconditionFailed
from ..linalg import numerical_rank


@dataclass(frozen=True)
class ConicProblem:
    """标准锥规划 min cᵀx s.t. Ax = b, x ∈ 𝒦"""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    cone: Cone

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        m, n = a.shape
        if m < 1:
            raise DimensionMismatch("约束矩阵 A 至少需要一行")
        if b.shape != (m,):
            raise DimensionMismatch(f"b 的长度 {b.shape[0]} 与 A 的行数 {m} 不一致")
        if c.shape != (n,):
            raise DimensionMismatch(f"c 的长度 {c.shape[0]} 与 A 的列数 {n} 不一致")
        if self.cone.dim != n:
            raise DimensionMismatch(f"锥维度 {self.cone.dim} 与 A 的列数 {n} 不一致")
        if numerical_rank(a) < m:
            raise PreconditionFailed("约束矩阵 A 不是行满秩的")

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def nu(self) -> float:
        return self.cone.nu

    def primal_residual(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(self.a @ x - self.b))

    def dual_residual(self, y: np.ndarray, s: np.ndarray) -> float:
        return float(np.linalg.norm(self.a.T @ y + s - self.c))


@dataclass(frozen=True)
class Iterate:
    """严格可行的原始-对偶迭代点 (x, y, s) 及路径参数 τ"""

    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    tau: float
    eval: BarrierEval

    @property
    def primal(self) -> np.ndarray:
        return self.x

    @property
    def slack(self) -> np.ndarray:
        return self.s

    @property
    def gap(self) -> float:
        return float(self.x @ self.s)

    @property
    def mu(self) -> float:
        return self.gap / self.eval.nu

    def with_tau(self, tau: float) -> "Iterate":
        return replace(self, tau=tau)


@dataclass(frozen=True)
class StandardDirection:
    dx: np.ndarray
    dy: np.ndarray
    ds: np.ndarray

    @property
    def primal(self) -> np.ndarray:
        return self.dx

    @property
    def slack(self) -> np.ndarray:
        return self.ds


class SolveStatus(str, Enum):
    """求解结束状态"""

    OPTIMAL = "optimal"
    # 间隙已降到 stall_factor·ε 以内，继续迭代只剩舍入噪声
    NEAR_OPTIMAL = "near_optimal"
    ITERATION_LIMIT = "iteration_limit"
    NUMERICAL_FAILURE = "numerical_failure"
    CERTIFICATE = "certificate"


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    tau: float
    tau_direction: float
    mu: float
    gap: float
    distance: float
    step: str
    alpha: float
    dx_norm: float
    ds_norm: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "iteration": self.iteration,
            "tau": self.tau,
            "tau_direction": self.tau_direction,
            "mu": self.mu,
            "gap": self.gap,
            "distance": self.distance,
            "step": self.step,
            "alpha": self.alpha,
            "dx_norm": self.dx_norm,
            "ds_norm": self.ds_norm,
        }


@dataclass
class SolveOutcome:
    status: SolveStatus
    state: Any
    trace: list[TraceRecord] = field(default_factory=list)
    bound: int = 0
    reason: str | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def optimal(self) -> bool:
        return self.status in (SolveStatus.OPTIMAL, SolveStatus.NEAR_OPTIMAL)
