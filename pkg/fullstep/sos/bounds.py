"""下界问题组装、两种初始化方式的求解、λ 证书检验与猜想表。"""

import csv
from dataclasses import dataclass, field
from enum import Enum
import io
import math
import time

import numpy as np

from ..config import SolverConfig, base_config, make_solver_config
from ..core import ConicProblem, Iterate, SolveOutcome, SolveStatus, newton_direction, solve, take_step
from ..exceptions import ConfigError, DegreeParityError, IterationLimitReached, NotInterior, SolverError
from ..hsd import HsdState, HsdThresholds, Solution, build_embedding, extract, hsd_solve
from ..init import MembershipInstance, Phase1Report, two_phase_start
from ..log import logger
from .instance import SemialgebraicInstance, conjectured_value, stengle_instance
from .moment_cone import MomentCone

TABLE_HEADER = ["D", "dObj", "neg_inv_dObj", "conjectured", "iters", "seconds", "method"]
MIN_TABLE_DEGREE = 8
# 证书检验使用半径为 1 的邻域
CERTIFICATE_RADIUS = 1.0
# certified_bound 求 γ 时使用的半径，留出与 CERTIFICATE_RADIUS 之间的余量
BOUND_RADIUS = 0.75
RECENTER_STEPS = 100
RECENTER_TOL = 1e-3


class SosMethod(str, Enum):
    TWO_PHASE = "two-phase"
    HSD = "hsd"


@dataclass
class SosResult:
    instance: SemialgebraicInstance
    method: SosMethod
    status: SolveStatus
    bound: float | None
    lam: np.ndarray | None
    outcome: SolveOutcome
    upper: float | None = None
    certified: float | None = None
    phase1: Phase1Report | None = None
    seconds: float = 0.0
    reason: str | None = None

    @property
    def iterations(self) -> int:
        extra = self.phase1.iterations if self.phase1 is not None else 0
        return self.outcome.iterations + extra

    @property
    def neg_inv_bound(self) -> float | None:
        if self.bound is None or self.bound == 0.0:
            return None
        return -1.0 / self.bound


@dataclass(frozen=True)
class Certified:
    tau: float
    distance: float
    verdict: str = "certified"


@dataclass(frozen=True)
class NotCertified:
    distance: float
    reason: str
    verdict: str = "not_certified"


def build_lower_bound_problem(inst: SemialgebraicInstance, cone: MomentCone | None = None) -> ConicProblem:
    """min fᵀλ s.t. 1ᵀλ = 1, λ ∈ 𝓜_D(g)*，f 为目标多项式在节点处的取值。"""
    cone = cone or MomentCone.from_instance(inst)
    n = cone.dim
    return ConicProblem(a=np.ones((1, n)), b=np.ones(1), c=inst.objective_values(), cone=cone)


def sos_solver_config(**overrides) -> SolverConfig:
    defaults = {"variant": base_config.get("sos_variant"), "eps": base_config.get("sos_eps")}
    return make_solver_config(**{**defaults, **overrides})


def upper_bound_from_certificate(inst: SemialgebraicInstance, lam: np.ndarray) -> float:
    """按 1ᵀλ̂ = 1 缩放后 λ̂ 原始可行，fᵀλ̂ 是层级 D 最优值的上界。"""
    lam = np.asarray(lam, dtype=float)
    total = float(np.sum(lam))
    if not total > 0:
        raise NotInterior(f"1ᵀλ = {total:.3e} 非正")
    scaled = lam / total
    MomentCone.from_instance(inst).evaluate(scaled)
    return float(inst.objective_values() @ scaled)


def recenter(
    problem: ConicProblem,
    lam: np.ndarray,
    tau: float,
    y0: float = 0.0,
    max_steps: int = RECENTER_STEPS,
) -> np.ndarray:
    """
    固定 τ 的阻尼牛顿中心化：α = 1/(1 + ‖Δx‖ₓ) 保证每步严格可行，
    牛顿减量 ‖Δx‖ₓ ≤ RECENTER_TOL 时停止。HSD 还原出的 λ 只在扰动问题的中心路径上，
    中心化后才能通过 certify 检验。
    """
    if not tau > 0:
        raise ValueError(f"中心化参数 τ 必须为正: {tau}")
    x = np.asarray(lam, dtype=float) / float(np.sum(lam))
    y = np.array([y0])
    for step in range(max_steps):
        ev = problem.cone.evaluate(x)
        it = Iterate(x=x, y=y, s=problem.c - problem.a.T @ y, tau=tau, eval=ev)
        direction = newton_direction(problem, it)
        decrement = ev.local_norm(direction.dx)
        if decrement <= RECENTER_TOL:
            logger.debug(f"中心化在第 {step} 步收敛: ‖Δx‖ₓ = {decrement:.3e}")
            return x
        following = take_step(problem.cone, it, direction, 1.0 / (1.0 + decrement))
        x, y = following.x, following.y
    logger.warning(f"中心化在 {max_steps} 步内未收敛")
    return x


def _recenter_recovered(problem: ConicProblem, recovered: Solution, state: HsdState) -> np.ndarray:
    """以还原间隙 (fᵀλ − γ̂)/ν 为 τ 中心化 HSD 的 λ；失败时原样返回。"""
    nu = problem.cone.nu
    lam = recovered.x / float(np.sum(recovered.x))
    tau = (float(problem.c @ lam) - recovered.dual_objective) / nu
    if not tau > 0:
        tau = state.tau / state.xi**2
    try:
        return recenter(problem, lam, tau, y0=recovered.dual_objective)
    except SolverError as e:
        logger.warning(f"HSD 解的中心化失败，使用未中心化的 λ: {e}")
        return recovered.x


def certified_bound(
    inst: SemialgebraicInstance,
    lam: np.ndarray,
    radius: float = BOUND_RADIUS,
    cone: MomentCone | None = None,
) -> float | None:
    """
    由 λ 推出能通过 certify 的最大下界 γ。

    记 λ̂ = λ/1ᵀλ，a₀ = fᵀλ̂，p = f − a₀·1，q = ν·1 + g(λ̂)，则 γ = a₀ − νt 时
    s + τg = p + tq 且 τ = t。取满足 ‖p + tq‖* ≤ radius·t 的最小 t > 0，
    即二次不等式 (‖q‖*² − radius²)t² + 2⟨p, q⟩t + ‖p‖*² ≤ 0 的最小正解。
    λ 不在内部或不存在这样的 t 时返回 None。
    """
    cone = cone or MomentCone.from_instance(inst)
    lam = np.asarray(lam, dtype=float)
    total = float(np.sum(lam))
    if not total > 0:
        return None
    scaled = lam / total
    try:
        ev = cone.evaluate(scaled)
    except NotInterior as e:
        logger.warning(f"λ 不在锥内部，无法给出可检验下界: {e}")
        return None
    f = inst.objective_values()
    a0 = float(scaled @ f)
    p = f - a0
    q = ev.nu + ev.gradient
    lp, lq = ev.factor.solve_lower(p), ev.factor.solve_lower(q)
    quad = float(lq @ lq) - radius**2
    half = float(lp @ lq)
    const = float(lp @ lp)
    disc = half**2 - quad * const
    if disc < 0:
        return None
    # 两根之积为 const/quad，用该形式避免相消
    denom = -half + math.sqrt(disc)
    if not denom > 0 or not const > 0:
        return None
    t = const / denom
    return a0 - ev.nu * t


def solve_sos_bound(
    inst: SemialgebraicInstance,
    method: SosMethod = SosMethod.TWO_PHASE,
    config: SolverConfig | None = None,
) -> SosResult:
    """
    求解下界问题，返回对偶值 γ̂（即 bᵀy）作为下界以及原始解 λ。

    two-phase: 以归一化 Clenshaw–Curtis 权为 x₀ 运行 Phase 1，再从 𝒩(η, τ₀) 出发求解；
    hsd: 在齐次自对偶嵌入上求解并按 ξ 恢复原问题的解，再把 λ 中心化。
    两种方法都附带由 λ 推出、可被 certify 接受的下界 certified。
    """
    method = SosMethod(method)
    config = config or sos_solver_config()
    cone = MomentCone.from_instance(inst)
    problem = build_lower_bound_problem(inst, cone)
    logger.info(f"SOS 下界: 实例 {inst.name}, D = {inst.degree}, ν = {cone.nu:g}, 方法 = {method.value}")
    phase1: Phase1Report | None = None
    started = time.perf_counter()
    if method is SosMethod.TWO_PHASE:
        membership = MembershipInstance(t=problem.c, w=problem.a[0], cone=cone)
        start, phase1 = two_phase_start(
            membership,
            cone.interior_point(),
            eta=config.eta,
            phase1_eta=float(base_config.get("phase1_eta")),
            config=config,
        )
        outcome = solve(problem, start, config)
        bound: float | None = float(outcome.state.y[0])
        lam: np.ndarray | None = outcome.state.x
        reason = outcome.reason
    else:
        emb, st = build_embedding(problem)
        thresholds = HsdThresholds.from_config()
        outcome = hsd_solve(emb, st, config, thresholds)
        recovered = extract(emb, outcome.state, thresholds)
        if isinstance(recovered, Solution):
            bound, reason = recovered.dual_objective, outcome.reason
            lam = _recenter_recovered(problem, recovered, outcome.state)
        else:
            bound, lam = None, None
            reason = outcome.reason or f"HSD 未恢复出解: {recovered.kind}"
    seconds = time.perf_counter() - started

    upper = certified = None
    if lam is not None:
        try:
            upper = upper_bound_from_certificate(inst, lam)
        except NotInterior as e:
            logger.warning(f"缩放后的 λ̂ 不在锥内部，无法给出上界: {e}")
        certified = certified_bound(inst, lam, cone=cone)
    result = SosResult(
        instance=inst,
        method=method,
        status=outcome.status,
        bound=bound,
        lam=lam,
        outcome=outcome,
        upper=upper,
        certified=certified,
        phase1=phase1,
        seconds=seconds,
        reason=reason,
    )
    if bound is not None:
        logger.info(f"SOS 下界结束: γ̂ = {bound:.12g}, 可检验下界 = {certified}, 上界 = {upper}, 共 {result.iterations} 次迭代")
    return result


def certify(
    inst: SemialgebraicInstance,
    lam: np.ndarray,
    gamma: float,
    cone: MomentCone | None = None,
) -> Certified | NotCertified:
    """
    检验 (λ, γ) 是否落在 𝒩(1, τ) 中：s = f − γ·1 的节点取值，τ = λᵀs/ν，
    ‖s + τg(λ)‖*_λ ≤ τ 时 λ 证明 f − γ 在 [−1, 1] 上非负。
    """
    cone = cone or MomentCone.from_instance(inst)
    lam = np.asarray(lam, dtype=float)
    total = float(np.sum(lam))
    if not total > 0:
        return NotCertified(distance=math.inf, reason="1ᵀλ 非正")
    scaled = lam / total
    try:
        ev = cone.evaluate(scaled)
    except NotInterior as e:
        return NotCertified(distance=math.inf, reason=f"λ 不在锥内部: {e}")
    s = inst.objective_values() - gamma
    tau = float(scaled @ s) / ev.nu
    if not tau > 0:
        return NotCertified(distance=math.inf, reason=f"τ = λᵀs/ν = {tau:.3e} 非正")
    distance = ev.dual_norm(s + tau * ev.gradient)
    if distance <= CERTIFICATE_RADIUS * tau:
        return Certified(tau=tau, distance=distance)
    return NotCertified(distance=distance, reason=f"‖s + τg‖* = {distance:.6e} > τ = {tau:.6e}")


@dataclass
class TableRow:
    degree: int
    method: SosMethod
    d_obj: float | None
    iterations: int
    seconds: float
    status: str
    reason: str | None = None
    upper: float | None = field(default=None, compare=False)

    @property
    def conjectured(self) -> float:
        return conjectured_value(self.degree)

    @property
    def failed(self) -> bool:
        converged = self.status in (SolveStatus.OPTIMAL.value, SolveStatus.NEAR_OPTIMAL.value)
        return not converged or self.d_obj is None or self.d_obj >= 0

    @property
    def neg_inv(self) -> float | None:
        if self.d_obj is None or self.d_obj == 0.0:
            return None
        return -1.0 / self.d_obj

    def csv_fields(self) -> list[str]:
        if self.failed:
            d_obj = neg_inv = "FAILED"
        else:
            d_obj, neg_inv = f"{self.d_obj:.12g}", f"{self.neg_inv:.6f}"
        return [
            str(self.degree),
            d_obj,
            neg_inv,
            f"{self.conjectured:g}",
            str(self.iterations),
            f"{self.seconds:.3f}",
            self.method.value,
        ]


def validate_table_degrees(degrees: list[int]) -> None:
    for d in degrees:
        if d % 2:
            raise DegreeParityError("degrees", f"D = {d} 必须为偶数")
        if d < MIN_TABLE_DEGREE:
            raise ConfigError(f"猜想表要求 D ≥ {MIN_TABLE_DEGREE}，收到 {d}")


def table_row(
    degree: int,
    method: SosMethod,
    config: SolverConfig | None = None,
    timing: bool = True,
) -> TableRow:
    """单行求解；求解失败记入行内，不向上抛出。"""
    method = SosMethod(method)
    try:
        result = solve_sos_bound(stengle_instance(degree), method, config)
    except IterationLimitReached as e:
        logger.warning(f"猜想表 D = {degree} ({method.value}) 达到迭代上限: {e}")
        return TableRow(degree, method, None, 0, 0.0, SolveStatus.ITERATION_LIMIT.value, str(e))
    except SolverError as e:
        logger.warning(f"猜想表 D = {degree} ({method.value}) 求解失败: {e}")
        return TableRow(degree, method, None, 0, 0.0, "failed", f"{type(e).__name__}: {e}")
    row = TableRow(
        degree=degree,
        method=method,
        d_obj=result.bound,
        iterations=result.iterations,
        seconds=result.seconds if timing else 0.0,
        status=result.status.value,
        reason=result.reason,
        upper=result.upper,
    )
    if row.failed:
        logger.warning(f"猜想表 D = {degree} ({method.value}) 标记为 FAILED: {row.status} {row.reason or ''}")
    return row


def conjecture_table(
    degrees: list[int],
    method: SosMethod | list[SosMethod] = SosMethod.TWO_PHASE,
    config: SolverConfig | None = None,
    timing: bool = True,
) -> list[TableRow]:
    validate_table_degrees(degrees)
    methods = [SosMethod(m) for m in (method if isinstance(method, list) else [method])]
    return [table_row(d, m, config, timing) for m in methods for d in degrees]


def table_csv(rows: list[TableRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buffer.getvalue()
