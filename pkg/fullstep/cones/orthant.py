import numpy as np

from ..exceptions import NotInterior
from ..linalg import SpdFactor
from . import BarrierEval, Cone


class Orthant(Cone):
    """非负象限 ℝⁿ₊，障碍函数 −Σ ln xᵢ，ν = n"""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"象限维度必须为正: {n}")
        self._n = n

    @property
    def dim(self) -> int:
        return self._n

    @property
    def nu(self) -> float:
        return float(self._n)

    def evaluate(self, x: np.ndarray) -> BarrierEval:
        x = self._check_point(x)
        ok = (x > 0) & np.isfinite(x)
        if not ok.all():
            bad = int(np.argmin(ok))
            raise NotInterior(f"象限坐标非正: x[{bad}] = {x[bad]:.3e}")
        inv = 1.0 / x
        return BarrierEval(
            point=x.copy(),
            value=float(-np.sum(np.log(x))),
            gradient=-inv,
            hessian=np.diag(inv**2),
            factor=SpdFactor(np.diag(inv)),
            nu=self.nu,
        )

    def interior_point(self) -> np.ndarray:
        return np.ones(self._n)
