import numpy as np
from scipy.linalg import block_diag

from ..exceptions import DimensionMismatch, NotInterior, NotPositiveDefinite
from ..linalg import NullspaceBasis, SpdFactor, cholesky, symmetrize
from . import BarrierEval, Cone


class Product(Cone):
    """锥的笛卡尔积；障碍函数按块相加，ν 为各块之和"""

    def __init__(self, members: list[Cone]):
        if not members:
            raise ValueError("乘积锥至少需要一个成员")
        self.members = list(members)
        self._offsets = np.cumsum([0] + [m.dim for m in self.members])

    @property
    def dim(self) -> int:
        return int(self._offsets[-1])

    @property
    def nu(self) -> float:
        return float(sum(m.nu for m in self.members))

    def split(self, x: np.ndarray) -> list[np.ndarray]:
        return [x[a:b] for a, b in zip(self._offsets[:-1], self._offsets[1:])]

    def evaluate(self, x: np.ndarray) -> BarrierEval:
        x = self._check_point(x)
        evals = [m.evaluate(part) for m, part in zip(self.members, self.split(x))]
        return BarrierEval(
            point=x.copy(),
            value=float(sum(e.value for e in evals)),
            gradient=np.concatenate([e.gradient for e in evals]),
            hessian=block_diag(*[e.hessian for e in evals]),
            factor=SpdFactor(block_diag(*[e.factor.lower for e in evals])),
            nu=self.nu,
        )

    def interior_point(self) -> np.ndarray:
        return np.concatenate([m.interior_point() for m in self.members])


class Extended(Cone):
    """HSD 扩展锥 𝒦×ℝ₊，障碍函数 f(x) − ln ξ，参数 ν+1"""

    def __init__(self, inner: Cone):
        self.inner = inner

    @property
    def dim(self) -> int:
        return self.inner.dim + 1

    @property
    def nu(self) -> float:
        return self.inner.nu + 1.0

    def evaluate(self, x: np.ndarray) -> BarrierEval:
        x = self._check_point(x)
        xi = x[-1]
        if not (np.isfinite(xi) and xi > 0):
            raise NotInterior(f"齐次化变量 ξ 非正: {xi:.3e}")
        ev = self.inner.evaluate(x[:-1])
        return BarrierEval(
            point=x.copy(),
            value=ev.value - float(np.log(xi)),
            gradient=np.append(ev.gradient, -1.0 / xi),
            hessian=block_diag(ev.hessian, [[1.0 / xi**2]]),
            factor=SpdFactor(block_diag(ev.factor.lower, [[1.0 / xi]])),
            nu=self.nu,
        )

    def interior_point(self) -> np.ndarray:
        return np.append(self.inner.interior_point(), 1.0)


class Restricted(Cone):
    """
    锥在线性子空间 range(Z) 上的限制，工作于 k 维坐标 u（环境点 x = Z·u）。

    对数齐次性在子空间上保持，因此参数 ν 与内层锥相同。
    """

    def __init__(self, inner: Cone, basis: NullspaceBasis, anchor: np.ndarray | None = None):
        if basis.ambient_dimension != inner.dim:
            raise DimensionMismatch(
                f"零空间基的环境维度 {basis.ambient_dimension} 与内层锥维度 {inner.dim} 不一致"
            )
        self.inner = inner
        self.basis = basis
        self._anchor = None if anchor is None else np.asarray(anchor, dtype=float)

    @property
    def z(self) -> np.ndarray:
        return self.basis.basis

    @property
    def dim(self) -> int:
        return self.basis.k

    @property
    def nu(self) -> float:
        return self.inner.nu

    def ambient(self, u: np.ndarray) -> np.ndarray:
        return self.z @ u

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        """range(Z) 中环境点的坐标 Zᵀx。"""
        return self.z.T @ np.asarray(x, dtype=float)

    def evaluate(self, u: np.ndarray) -> BarrierEval:
        if self.dim == 0:
            raise NotInterior("限制锥的坐标空间为空")
        u = self._check_point(u)
        ev = self.inner.evaluate(self.ambient(u))
        hessian = symmetrize(self.z.T @ ev.hessian @ self.z)
        try:
            factor = cholesky(hessian)
        except NotPositiveDefinite as e:
            raise NotInterior(f"限制后的 Hessian 非正定（主元 {e.pivot}）") from e
        return BarrierEval(
            point=u.copy(),
            value=ev.value,
            gradient=self.z.T @ ev.gradient,
            hessian=hessian,
            factor=factor,
            nu=self.nu,
        )

    def interior_point(self) -> np.ndarray:
        if self._anchor is None:
            raise NotImplementedError("限制锥没有给定的规范内点")
        return self._anchor.copy()
