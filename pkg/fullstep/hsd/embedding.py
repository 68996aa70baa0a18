"""齐次自对偶嵌入：模型组装、迭代状态与牛顿方程组。"""

from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg as sla

from ..cones import BarrierEval
from ..cones.composite import Extended
from ..core import ConicProblem
from ..exceptions import SingularSystem


@dataclass(frozen=True)
class Embedding:
    problem: ConicProblem
    cone: Extended
    x_bar: np.ndarray
    y_bar: np.ndarray
    s_bar: np.ndarray
    b_bar: np.ndarray
    c_bar: np.ndarray
    z_bar: float
    g: np.ndarray

    @property
    def m(self) -> int:
        return self.problem.m

    @property
    def n(self) -> int:
        return self.problem.n

    @property
    def anchor_gap(self) -> float:
        return float(self.x_bar @ self.s_bar)

    def rhs(self) -> np.ndarray:
        r = np.zeros(self.m + self.n + 2)
        r[-1] = -(self.anchor_gap + 1.0)
        return r


@dataclass(frozen=True)
class HsdState:
    y: np.ndarray
    x: np.ndarray
    xi: float
    theta: float
    s: np.ndarray
    kappa: float
    tau: float
    eval: BarrierEval

    @property
    def primal(self) -> np.ndarray:
        return np.append(self.x, self.xi)

    @property
    def slack(self) -> np.ndarray:
        return np.append(self.s, self.kappa)

    @property
    def gap(self) -> float:
        return float(self.x @ self.s) + self.xi * self.kappa

    @property
    def mu(self) -> float:
        return self.gap / self.eval.nu

    def with_tau(self, tau: float) -> "HsdState":
        return replace(self, tau=tau)

    def stacked(self) -> np.ndarray:
        """(y, x, ξ, θ)"""
        return np.concatenate([self.y, self.x, [self.xi, self.theta]])


@dataclass(frozen=True)
class HsdDirection:
    dy: np.ndarray
    dx: np.ndarray
    dxi: float
    dtheta: float
    ds: np.ndarray
    dkappa: float

    @property
    def primal(self) -> np.ndarray:
        return np.append(self.dx, self.dxi)

    @property
    def slack(self) -> np.ndarray:
        return np.append(self.ds, self.dkappa)

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.dy, self.dx, [self.dxi, self.dtheta]])


def skew_matrix(problem: ConicProblem, b_bar: np.ndarray, c_bar: np.ndarray, z_bar: float) -> np.ndarray:
    m, n = problem.m, problem.n
    a, b, c = problem.a, problem.b, problem.c
    iy, ix, ixi, ith = slice(0, m), slice(m, m + n), m + n, m + n + 1
    g = np.zeros((m + n + 2, m + n + 2))
    g[iy, ix] = a
    g[iy, ixi] = -b
    g[iy, ith] = b_bar
    g[ix, iy] = -a.T
    g[ix, ixi] = c
    g[ix, ith] = -c_bar
    g[ixi, iy] = b
    g[ixi, ix] = -c
    g[ixi, ith] = z_bar
    g[ith, iy] = -b_bar
    g[ith, ix] = c_bar
    g[ith, ixi] = -z_bar
    return g


def build_embedding(
    problem: ConicProblem,
    x_bar: np.ndarray | None = None,
    y_bar: np.ndarray | None = None,
) -> tuple[Embedding, HsdState]:
    """以 s̄ = −g(x̄) 组装嵌入，返回中心路径上 τ = 1 的初始点 (x̄, ȳ, s̄, 1, 1, 1)。"""
    x_bar = problem.cone.interior_point() if x_bar is None else np.asarray(x_bar, dtype=float)
    y_bar = np.zeros(problem.m) if y_bar is None else np.asarray(y_bar, dtype=float)
    ev = problem.cone.evaluate(x_bar)
    s_bar = -ev.gradient
    b_bar = problem.b - problem.a @ x_bar
    c_bar = problem.c - problem.a.T @ y_bar - s_bar
    z_bar = float(problem.c @ x_bar - problem.b @ y_bar + 1.0)
    cone = Extended(problem.cone)
    emb = Embedding(
        problem=problem,
        cone=cone,
        x_bar=x_bar.copy(),
        y_bar=y_bar.copy(),
        s_bar=s_bar,
        b_bar=b_bar,
        c_bar=c_bar,
        z_bar=z_bar,
        g=skew_matrix(problem, b_bar, c_bar, z_bar),
    )
    start = HsdState(
        y=y_bar.copy(),
        x=x_bar.copy(),
        xi=1.0,
        theta=1.0,
        s=s_bar.copy(),
        kappa=1.0,
        tau=1.0,
        eval=cone.evaluate(np.append(x_bar, 1.0)),
    )
    return emb, start


def hsd_newton(emb: Embedding, st: HsdState, tau: float | None = None) -> HsdDirection:
    """
    求解 G·(Δy,Δx,Δξ,Δθ) − (0,Δs,Δκ,0) = 0, τHΔx + Δs = −s − τg, (τ/ξ²)Δξ + Δκ = −κ + τ/ξ。

    用 H 的因子消去 Δx 后得到关于 (Δy, Δξ, Δθ) 的 (m+2) 阶方程组。
    """
    tau = st.tau if tau is None else tau
    p = emb.problem
    m, n = p.m, p.n
    lower = st.eval.factor.lower[:n, :n]
    gradient = st.eval.gradient[:n]
    r_s = -st.s - tau * gradient
    r_k = -st.kappa + tau / st.xi
    cols = np.column_stack([p.a.T, -p.c, emb.c_bar])
    v = sla.solve_triangular(lower, cols, lower=True, check_finite=False)
    w = sla.solve_triangular(lower, r_s, lower=True, check_finite=False)
    coupling = np.zeros((m + 2, m + 2))
    coupling[:m, m] = -p.b
    coupling[:m, m + 1] = emb.b_bar
    coupling[m, :m] = p.b
    coupling[m, m] = tau / st.xi**2
    coupling[m, m + 1] = emb.z_bar
    coupling[m + 1, :m] = -emb.b_bar
    coupling[m + 1, m] = -emb.z_bar
    system = v.T @ v / tau + coupling
    rhs = -(v.T @ w) / tau
    rhs[m] += r_k
    try:
        sol = sla.solve(system, rhs, check_finite=False)
    except (sla.LinAlgError, ValueError) as e:
        raise SingularSystem(f"HSD 牛顿方程组奇异: {e}") from e
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("HSD 牛顿方程组的解含非有限值")
    bv = cols @ sol
    dx = sla.cho_solve((lower, True), bv + r_s, check_finite=False) / tau
    dxi = float(sol[m])
    return HsdDirection(
        dy=sol[:m],
        dx=dx,
        dxi=dxi,
        dtheta=float(sol[m + 1]),
        ds=-bv,
        dkappa=r_k - tau / st.xi**2 * dxi,
    )


def hsd_step(emb: Embedding, st: HsdState, d: HsdDirection, alpha: float = 1.0) -> HsdState:
    x = st.x + alpha * d.dx
    xi = st.xi + alpha * d.dxi
    return HsdState(
        y=st.y + alpha * d.dy,
        x=x,
        xi=xi,
        theta=st.theta + alpha * d.dtheta,
        s=st.s + alpha * d.ds,
        kappa=st.kappa + alpha * d.dkappa,
        tau=st.tau,
        eval=emb.cone.evaluate(np.append(x, xi)),
    )


def equality_residual(emb: Embedding, st: HsdState) -> np.ndarray:
    m, n = emb.m, emb.n
    slack = np.zeros(m + n + 2)
    slack[m : m + n] = st.s
    slack[m + n] = st.kappa
    return emb.g @ st.stacked() - slack - emb.rhs()
