from dataclasses import dataclass

import numpy as np

from ..cones.composite import Product, Restricted
from ..cones.orthant import Orthant
from ..core import ConicProblem
from ..exceptions import EmptyKernel
from ..linalg import nullspace
from .membership import MembershipInstance


@dataclass(frozen=True)
class BoundedTransform:
    """
    有界问题的单约束表示：锥 𝒦_{A,b,U} = Restricted(𝒦×ℝ²₊, Z)，
    约束 (zᵀx + ξ + ζ)/(U+1) = 1 写在 Z 坐标下。
    """

    original: ConicProblem
    problem: ConicProblem
    cone: Restricted
    z: np.ndarray
    upper: float

    def lift(self, x: np.ndarray) -> np.ndarray:
        """可行点 x ↦ (x, U − zᵀx, 1) 的 Z 坐标。"""
        x = np.asarray(x, dtype=float)
        ambient = np.concatenate([x, [self.upper - float(self.z @ x), 1.0]])
        return self.cone.coordinates(ambient)

    def restrict(self, u: np.ndarray) -> np.ndarray:
        return self.cone.ambient(u)[: self.original.n]

    def membership(self) -> MembershipInstance:
        return MembershipInstance(t=self.problem.c, w=self.problem.a[0], cone=self.cone)


def transform_bounded(
    problem: ConicProblem,
    z: np.ndarray,
    upper: float,
    x0: np.ndarray | None = None,
) -> BoundedTransform:
    """
    构造 𝒦_{A,b,U} = {(x,ξ,ζ) ∈ 𝒦×ℝ₊×ℝ₊ : zᵀx+ξ−Uζ = 0, Ax−bζ = 0} 上的单约束问题。
    调用方需保证所有可行 x 满足 zᵀx < U，这里不做验证。
    """
    z = np.asarray(z, dtype=float)
    n, m = problem.n, problem.m
    rows = np.vstack(
        [
            np.concatenate([z, [1.0, -upper]]),
            np.hstack([problem.a, np.zeros((m, 1)), -problem.b[:, None]]),
        ]
    )
    basis = nullspace(rows)
    if basis.k == 0:
        raise EmptyKernel("有界化后的齐次方程组只有零解")
    cone = Restricted(Product([problem.cone, Orthant(2)]), basis)
    coefficient = basis.basis.T @ np.concatenate([z, [1.0, 1.0]]) / (upper + 1.0)
    objective = basis.basis.T @ np.concatenate([problem.c, [0.0, 0.0]])
    transform = BoundedTransform(
        original=problem,
        problem=ConicProblem(a=coefficient[None, :], b=np.ones(1), c=objective, cone=cone),
        cone=cone,
        z=z,
        upper=float(upper),
    )
    if x0 is not None:
        anchor = transform.lift(x0)
        cone = Restricted(cone.inner, basis, anchor=anchor)
        transform = BoundedTransform(
            original=problem,
            problem=ConicProblem(a=coefficient[None, :], b=np.ones(1), c=objective, cone=cone),
            cone=cone,
            z=z,
            upper=float(upper),
        )
    return transform
