from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..exceptions import DegreeParityError, ProblemParseError
from ..utils.models import SosInstanceFile, parse_model
from .chebyshev import chebyshev_degree, chebyshev_nodes, from_power_basis, values_at

ONE_MINUS_X2 = [1.0, 0.0, -1.0]
STENGLE_CONSTRAINT = [1.0, 0.0, -3.0, 0.0, 3.0, 0.0, -1.0]


@dataclass(frozen=True)
class SemialgebraicInstance:
    """
    [−1, 1] 上的下界问题 max γ s.t. f − γ ∈ 𝓜_D(g)。
    多项式均以 Chebyshev 系数存储，g₀ = 1 不显式列出。
    """

    degree: int
    objective: np.ndarray
    constraints: tuple[np.ndarray, ...] = ()
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objective", np.atleast_1d(np.asarray(self.objective, dtype=float)))
        object.__setattr__(
            self,
            "constraints",
            tuple(np.atleast_1d(np.asarray(g, dtype=float)) for g in self.constraints),
        )
        d = self.degree
        if d < 2:
            raise ProblemParseError("degree", f"层级 D 至少为 2，收到 {d}")
        if d % 2:
            raise DegreeParityError("degree", f"层级 D = {d} 必须为偶数")
        if (deg := chebyshev_degree(self.objective)) > d:
            raise ProblemParseError("objective", f"目标多项式次数 {deg} 超过 D = {d}")
        for i, g in enumerate(self.constraints):
            deg = chebyshev_degree(g)
            if deg > d:
                raise ProblemParseError(f"constraints[{i}]", f"约束多项式次数 {deg} 超过 D = {d}")
            if (d - deg) % 2:
                raise DegreeParityError(
                    f"constraints[{i}]", f"D − deg g = {d} − {deg} 为奇数，乘子次数不是整数"
                )

    @property
    def all_constraints(self) -> list[np.ndarray]:
        return [np.ones(1), *self.constraints]

    @property
    def multiplier_sizes(self) -> list[int]:
        """各 SOS 乘子 Gram 矩阵的阶 kᵢ = (D − deg gᵢ)/2 + 1。"""
        return [(self.degree - chebyshev_degree(g)) // 2 + 1 for g in self.all_constraints]

    @property
    def nodes(self) -> np.ndarray:
        return chebyshev_nodes(self.degree)

    def objective_values(self) -> np.ndarray:
        return values_at(self.nodes, self.objective)

    def constraint_values(self) -> list[np.ndarray]:
        nodes = self.nodes
        return [values_at(nodes, g) for g in self.all_constraints]

    @classmethod
    def from_file(cls, model: SosInstanceFile, name: str = "custom") -> "SemialgebraicInstance":
        convert = from_power_basis if model.basis == "power" else np.asarray
        return cls(
            degree=model.degree,
            objective=convert(model.objective),
            constraints=tuple(convert(g) for g in model.constraints),
            name=name,
        )

    @classmethod
    def from_spec(cls, spec: dict[str, Any]) -> "SemialgebraicInstance":
        data = {k: spec[k] for k in ("degree", "objective", "constraints", "basis") if k in spec}
        return cls.from_file(parse_model(SosInstanceFile, data))


def stengle_instance(degree: int) -> SemialgebraicInstance:
    """f = 1 − x²，g₁ = (1 − x²)³；f 在 [−1, 1] 上非负，但有限层级的下界为负。"""
    return SemialgebraicInstance(
        degree=degree,
        objective=from_power_basis(ONE_MINUS_X2),
        constraints=(from_power_basis(STENGLE_CONSTRAINT),),
        name="stengle",
    )


def interval_instance(degree: int) -> SemialgebraicInstance:
    """f = g₁ = 1 − x²，f = 0 + g₁·1 直接给出最优下界 0。"""
    return SemialgebraicInstance(
        degree=degree,
        objective=from_power_basis(ONE_MINUS_X2),
        constraints=(from_power_basis(ONE_MINUS_X2),),
        name="interval",
    )


def conjectured_value(degree: int) -> float:
    """stengle 实例的猜想值 −1/γ*_D = (D/2)(D/2 − 2)。"""
    half = degree / 2
    return half * (half - 2)


EXAMPLES = {
    "stengle": stengle_instance,
    "interval": interval_instance,
}
