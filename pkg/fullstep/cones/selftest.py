"""障碍函数预言机的自检：对数齐次恒等式、有限差分与 Dikin 球探测。"""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import NotInterior, SolverError
from ..log import logger
from . import Cone

IDENTITY_RTOL = 1e-8
FD_RTOL = 1e-5
FD_STEP = 1e-6
DIKIN_DIRECTIONS = 20
DIKIN_SCALE = 0.99


@dataclass
class SelfTestReport:
    cone: str
    nu: float
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures and not self.degenerate

    def fail(self, message: str) -> None:
        logger.debug(f"[自检] {self.cone}: {message}")
        self.failures.append(message)


def _relative(error: float, scale: float) -> float:
    return error / max(scale, 1e-300)


def _check_identities(cone: Cone, x: np.ndarray, report: SelfTestReport, label: str) -> None:
    ev = cone.evaluate(x)
    nu = ev.nu
    g = ev.gradient
    hx = ev.hessian_times(x)
    if _relative(np.linalg.norm(hx + g), np.linalg.norm(g)) > IDENTITY_RTOL:
        report.fail(f"{label}: H(x)x ≠ −g(x)")
    if abs(g @ x + nu) > IDENTITY_RTOL * nu:
        report.fail(f"{label}: gᵀx = {g @ x:.12g}，应为 −ν = {-nu:g}")
    if abs(ev.dual_norm(g) - np.sqrt(nu)) > IDENTITY_RTOL * np.sqrt(nu):
        report.fail(f"{label}: ‖g‖* = {ev.dual_norm(g):.12g}，应为 √ν")
    if abs(ev.local_norm(x) - np.sqrt(nu)) > IDENTITY_RTOL * np.sqrt(nu):
        report.fail(f"{label}: ‖x‖ₓ ≠ √ν")


def _check_homogeneity(cone: Cone, x: np.ndarray, t: float, report: SelfTestReport) -> None:
    ev = cone.evaluate(x)
    scaled = cone.evaluate(t * x)
    if abs(scaled.value - ev.value + ev.nu * np.log(t)) > IDENTITY_RTOL * (1 + abs(ev.value)):
        report.fail(f"t={t:.4g}: f(tx) ≠ f(x) − ν ln t")
    if _relative(np.linalg.norm(scaled.gradient - ev.gradient / t), np.linalg.norm(ev.gradient / t)) > IDENTITY_RTOL:
        report.fail(f"t={t:.4g}: g(tx) ≠ g(x)/t")
    expected = ev.hessian / t**2
    if _relative(np.linalg.norm(scaled.hessian - expected), np.linalg.norm(expected)) > IDENTITY_RTOL:
        report.fail(f"t={t:.4g}: H(tx) ≠ H(x)/t²")


def _check_finite_differences(cone: Cone, x: np.ndarray, report: SelfTestReport) -> None:
    ev = cone.evaluate(x)
    h = FD_STEP * (1.0 + np.linalg.norm(x))
    n = x.shape[0]
    fd_grad = np.empty(n)
    fd_hess = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        try:
            plus, minus = cone.evaluate(x + e), cone.evaluate(x - e)
        except NotInterior:
            report.fail(f"有限差分步长离开锥内部（坐标 {j}）")
            return
        fd_grad[j] = (plus.value - minus.value) / (2 * h)
        fd_hess[:, j] = (plus.gradient - minus.gradient) / (2 * h)
    if _relative(np.linalg.norm(fd_grad - ev.gradient), max(np.linalg.norm(ev.gradient), 1.0)) > FD_RTOL:
        report.fail("梯度与有限差分不一致")
    if _relative(np.linalg.norm(fd_hess - ev.hessian), max(np.linalg.norm(ev.hessian), 1.0)) > FD_RTOL:
        report.fail("Hessian 与有限差分不一致")


def _check_dikin_ball(cone: Cone, x: np.ndarray, rng: np.random.Generator, report: SelfTestReport) -> None:
    ev = cone.evaluate(x)
    for _ in range(DIKIN_DIRECTIONS):
        v = rng.standard_normal(x.shape[0])
        u = v / ev.local_norm(v)
        try:
            cone.evaluate(x + DIKIN_SCALE * u)
        except NotInterior:
            report.fail("单位 Dikin 球内的点不在锥内部")
            return


def self_test(cone: Cone, x: np.ndarray, seed: int = 0) -> SelfTestReport:
    """
    在 x 及随机缩放点 t·x 处检查 LHSCB 性质，返回失败列表，从不抛出异常。
    """
    report = SelfTestReport(cone=cone.describe(), nu=cone.nu)
    if cone.dim == 0:
        report.degenerate = True
        report.notes.append("degenerate: empty coordinate space")
        return report
    rng = np.random.default_rng(seed)
    x = np.asarray(x, dtype=float)
    try:
        t = float(rng.uniform(0.1, 10.0))
        _check_identities(cone, x, report, "x")
        _check_identities(cone, t * x, report, "t·x")
        _check_homogeneity(cone, x, t, report)
        _check_finite_differences(cone, x, report)
        _check_dikin_ball(cone, x, rng, report)
    except SolverError as e:
        report.fail(f"预言机异常: {e}")
    if report.passed:
        logger.debug(f"[自检] {report.cone} 全部通过")
    return report
