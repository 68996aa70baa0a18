from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from ..cones import BarrierEval, Cone
from ..exceptions import NotInterior, NotPositiveDefinite
from ..linalg import cholesky, gram_factor, symmetrize
from .chebyshev import basis_matrix, chebyshev_nodes, clenshaw_curtis_weights
from .instance import SemialgebraicInstance


@dataclass(frozen=True)
class MomentConeSpec:
    """插值节点、各约束在节点处的取值 wᵢ 与基矩阵 Pᵢ"""

    nodes: np.ndarray
    weights: tuple[np.ndarray, ...]
    bases: tuple[np.ndarray, ...]

    @property
    def sizes(self) -> list[int]:
        return [p.shape[1] for p in self.bases]

    @property
    def nu(self) -> int:
        return sum(self.sizes)

    def moment_matrices(self, lam: np.ndarray) -> list[np.ndarray]:
        """Mᵢ(λ) = Pᵢᵀ·diag(wᵢ∘λ)·Pᵢ"""
        return [p.T @ ((w * lam)[:, None] * p) for w, p in zip(self.weights, self.bases)]


class MomentCone(Cone):
    """
    伪矩锥 𝓜_D(g)*，障碍函数 f(λ) = −Σᵢ ln det Mᵢ(λ)，ν = Σᵢ kᵢ。

    记 Qᵢ = Pᵢ Mᵢ⁻¹ Pᵢᵀ，则 ∂f/∂λⱼ = −Σᵢ wᵢⱼ (Qᵢ)ⱼⱼ，H = Σᵢ (wᵢwᵢᵀ)∘Qᵢ∘Qᵢ。
    H 的因子由 Khatri–Rao 矩阵 K（KᵀK = H）的 QR 分解给出，高次数时不会因平方条件数而失效。
    """

    def __init__(self, spec: MomentConeSpec):
        self.spec = spec

    @classmethod
    def from_instance(cls, inst: SemialgebraicInstance) -> "MomentCone":
        nodes = chebyshev_nodes(inst.degree)
        spec = MomentConeSpec(
            nodes=nodes,
            weights=tuple(inst.constraint_values()),
            bases=tuple(basis_matrix(nodes, k) for k in inst.multiplier_sizes),
        )
        return cls(spec)

    @property
    def dim(self) -> int:
        return self.spec.nodes.shape[0]

    @property
    def nu(self) -> float:
        return float(self.spec.nu)

    def evaluate(self, x: np.ndarray) -> BarrierEval:
        lam = self._check_point(x)
        if not np.all(np.isfinite(lam)):
            raise NotInterior("λ 含非有限分量")
        value = 0.0
        gradient = np.zeros(self.dim)
        hessian = np.zeros((self.dim, self.dim))
        stacked = []
        for i, (m, w, p) in enumerate(zip(self.spec.moment_matrices(lam), self.spec.weights, self.spec.bases)):
            try:
                lower = cholesky(symmetrize(m)).lower
            except NotPositiveDefinite as e:
                raise NotInterior(f"第 {i} 个矩矩阵非正定（主元 {e.pivot}）") from e
            value -= 2.0 * float(np.sum(np.log(np.diag(lower))))
            r = sla.solve_triangular(lower, p.T, lower=True, check_finite=False)
            q = r.T @ r
            gradient -= w * np.diag(q)
            hessian += np.outer(w, w) * q * q
            stacked.append(_khatri_rao_rows(r, w))
        hessian = symmetrize(hessian)
        try:
            factor = gram_factor(np.vstack(stacked))
        except NotPositiveDefinite as e:
            raise NotInterior(f"障碍函数 Hessian 非正定（主元 {e.pivot}）") from e
        return BarrierEval(
            point=lam.copy(),
            value=value,
            gradient=gradient,
            hessian=hessian,
            factor=factor,
            nu=self.nu,
        )

    def interior_point(self) -> np.ndarray:
        """归一化的 Clenshaw–Curtis 权，即均匀测度在节点上的取值，和为 1。"""
        return clenshaw_curtis_weights(self.dim - 1) / 2.0


def build_moment_cone(inst: SemialgebraicInstance) -> tuple[MomentConeSpec, MomentCone]:
    cone = MomentCone.from_instance(inst)
    return cone.spec, cone


def _khatri_rao_rows(r: np.ndarray, w: np.ndarray) -> np.ndarray:
    """行 (a, b), a ≤ b：cₐᵦ·w∘rₐ∘r_b，非对角行 cₐᵦ = √2，使 KᵀK = (wwᵀ)∘Q∘Q。"""
    upper, lower = np.triu_indices(r.shape[0])
    scale = np.where(upper == lower, 1.0, np.sqrt(2.0))
    return (scale[:, None] * r[upper] * r[lower]) * w[None, :]
