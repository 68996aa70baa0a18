from dataclasses import dataclass, field
from enum import Enum
import time
from typing import Any

import numpy as np

from ..cones import build_cone
from ..config import SolverConfig, base_config
from ..core import ConicProblem, Iterate, SolveOutcome, SolveStatus, solve
from ..exceptions import (
    ConfigError,
    DimensionMismatch,
    PreconditionFailed,
    ProblemParseError,
)
from ..hsd import Certificate, HsdThresholds, Solution, build_embedding, extract, hsd_solve
from ..init import (
    BoundedTransform,
    MembershipInstance,
    backwards_phase1,
    init_dual_membership,
    transform_bounded,
    two_phase_start,
)
from ..log import logger
from ..utils.models import ProblemFile, RunReport


class InitMethod(str, Enum):
    MEMBERSHIP = "membership"
    TWO_PHASE = "two-phase"
    BACKWARDS = "backwards"
    HSD = "hsd"


def exit_code_for(status: str) -> int:
    """numerical_failure → 2，iteration_limit → 3，其余（含 near_optimal、HSD 证书与无法分类）→ 0"""
    if status == SolveStatus.NUMERICAL_FAILURE.value:
        return 2
    if status == SolveStatus.ITERATION_LIMIT.value:
        return 3
    return 0


def build_problem(spec: ProblemFile, source: str = "") -> ConicProblem:
    """由已校验的问题文件构造 ConicProblem；结构错误统一转为 ProblemParseError。"""
    try:
        cone = build_cone(spec.cone.to_spec())
    except (ValueError, KeyError) as e:
        raise ProblemParseError(f"{source}:cone" if source else "cone", str(e)) from e
    try:
        return ConicProblem(a=np.array(spec.a), b=np.array(spec.b), c=np.array(spec.c), cone=cone)
    except (DimensionMismatch, PreconditionFailed) as e:
        raise ProblemParseError(source, str(e)) from e


@dataclass
class SolveContext:
    """一次求解任务的上下文"""

    spec: ProblemFile
    config: SolverConfig
    source: str = ""
    init: InitMethod = InitMethod.HSD
    timing: bool = True
    include_trace: bool = False

    problem: ConicProblem | None = None
    outcome: SolveOutcome | None = None
    extras: dict[str, Any] = field(default_factory=dict)
    objectives: dict[str, float | None] = field(default_factory=dict)
    seconds: float = 0.0
    status: str | None = None


class SolveService:
    """求解服务：构造问题、按所选方式初始化、跟踪路径并生成 RunReport"""

    def __init__(self, ctx: SolveContext):
        self.ctx = ctx

    def run(self) -> RunReport:
        self.ctx.problem = build_problem(self.ctx.spec, self.ctx.source)
        logger.info(
            f"求解 {self.ctx.source or '问题'}: m = {self.ctx.problem.m}, n = {self.ctx.problem.n}, "
            f"ν = {self.ctx.problem.nu:g}, 初始化 = {self.ctx.init.value}"
        )
        started = time.perf_counter()
        runner = {
            InitMethod.MEMBERSHIP: self._run_membership,
            InitMethod.TWO_PHASE: self._run_two_phase,
            InitMethod.BACKWARDS: self._run_backwards,
            InitMethod.HSD: self._run_hsd,
        }[self.ctx.init]
        runner()
        self.ctx.seconds = time.perf_counter() - started if self.ctx.timing else 0.0
        return self._report()

    def _single_row(self) -> MembershipInstance:
        p = self.ctx.problem
        if p.m != 1:
            raise ConfigError(f"{self.ctx.init.value} 初始化需要单约束问题，当前 m = {p.m}")
        if p.b[0] == 0:
            raise PreconditionFailed("单约束问题要求 b ≠ 0")
        return MembershipInstance(t=p.c, w=p.a[0] / p.b[0], cone=p.cone)

    def _normalized_x0(self, inst: MembershipInstance) -> np.ndarray:
        x0 = np.array(self.ctx.spec.x0) if self.ctx.spec.x0 is not None else inst.cone.interior_point()
        scale = float(inst.w @ x0)
        if not scale > 0:
            raise PreconditionFailed(f"x₀ᵀw = {scale:.3e} 非正，无法归一化")
        return x0 / scale

    def _finish_standard(self, problem: ConicProblem, start: Iterate, y_scale: float = 1.0) -> None:
        outcome = solve(problem, start, self.ctx.config)
        it: Iterate = outcome.state
        original = self.ctx.problem
        y = it.y * y_scale
        self.ctx.outcome = outcome
        self.ctx.objectives = {
            "primal_objective": float(original.c @ it.x),
            "dual_objective": float(original.b @ y),
            "gap": it.gap,
            "primal_residual": original.primal_residual(it.x),
            "dual_residual": original.dual_residual(y, it.s),
        }

    def _run_membership(self) -> None:
        inst = self._single_row()
        start = init_dual_membership(inst, self._normalized_x0(inst), self.ctx.config.eta)
        self._finish_standard(inst.problem(), start, 1.0 / self.ctx.problem.b[0])

    def _run_two_phase(self) -> None:
        p = self.ctx.problem
        if p.m == 1:
            inst = self._single_row()
            start, report = two_phase_start(
                inst,
                self._normalized_x0(inst),
                eta=self.ctx.config.eta,
                phase1_eta=float(base_config.get("phase1_eta")),
            )
            self._record_phase1(report)
            self._finish_standard(inst.problem(), start, 1.0 / p.b[0])
            return
        bound = self.ctx.spec.bound
        if bound is None or self.ctx.spec.x0 is None:
            raise ConfigError("多约束问题的 two-phase 初始化需要 bound 与可行的 x0")
        transform = transform_bounded(p, np.array(bound.z), bound.upper, np.array(self.ctx.spec.x0))
        inst = transform.membership()
        start, report = two_phase_start(
            inst,
            transform.cone.interior_point(),
            eta=self.ctx.config.eta,
            phase1_eta=float(base_config.get("phase1_eta")),
        )
        self._record_phase1(report)
        self._finish_bounded(transform, start)

    def _finish_bounded(self, transform: BoundedTransform, start: Iterate) -> None:
        outcome = solve(transform.problem, start, self.ctx.config)
        it: Iterate = outcome.state
        x = transform.restrict(it.x)
        self.ctx.outcome = outcome
        self.ctx.objectives = {
            "primal_objective": float(self.ctx.problem.c @ x),
            "dual_objective": float(it.y[0]),
            "gap": it.gap,
            "primal_residual": self.ctx.problem.primal_residual(x),
            "dual_residual": None,
        }
        self.ctx.extras["x"] = x.tolist()

    def _record_phase1(self, report) -> None:
        self.ctx.extras["phase1"] = {
            "iterations": report.iterations,
            "alpha": report.alpha,
            "mu": report.mu,
            "centrality": report.centrality,
            "damped_distance": report.damped_distance,
        }

    def _run_backwards(self) -> None:
        if self.ctx.spec.x0 is None:
            raise ConfigError("backwards 初始化需要问题文件给出满足 Ax₀ = b 的内点 x0")
        p = self.ctx.problem
        start = backwards_phase1(
            p,
            np.array(self.ctx.spec.x0),
            eta_tilde=float(base_config.get("backwards_eta")),
            eta=self.ctx.config.eta,
        )
        self._finish_standard(p, start)

    def _run_hsd(self) -> None:
        p = self.ctx.problem
        emb, st = build_embedding(p)
        thresholds = HsdThresholds.from_config()
        outcome = hsd_solve(emb, st, self.ctx.config, thresholds)
        self.ctx.outcome = outcome
        recovered = extract(emb, outcome.state, thresholds)
        self.ctx.extras["classification"] = recovered.kind
        if isinstance(recovered, Solution):
            self.ctx.objectives = {
                "primal_objective": recovered.primal_objective,
                "dual_objective": recovered.dual_objective,
                "gap": recovered.gap,
                "primal_residual": recovered.primal_residual,
                "dual_residual": recovered.dual_residual,
            }
            self.ctx.extras["x"] = recovered.x.tolist()
        elif isinstance(recovered, Certificate):
            self.ctx.extras["infeasibility"] = recovered.infeasibility
            self.ctx.extras["b_dot_y"] = recovered.b_dot_y
            self.ctx.extras["neg_c_dot_x"] = recovered.neg_c_dot_x
            self.ctx.status = SolveStatus.CERTIFICATE.value
        else:
            self.ctx.extras["unclassified_reason"] = recovered.reason
            if outcome.status is not SolveStatus.NUMERICAL_FAILURE:
                self.ctx.status = recovered.kind

    def _report(self) -> RunReport:
        outcome = self.ctx.outcome
        extras = {**self.ctx.extras, **_plain(outcome.extras)}
        return RunReport(
            status=self.ctx.status or outcome.status.value,
            method=self.ctx.init.value,
            variant=self.ctx.config.variant.value,
            iterations=outcome.iterations,
            iteration_bound=outcome.bound,
            seconds=self.ctx.seconds,
            reason=outcome.reason,
            config=self.ctx.config.model_dump(mode="json"),
            extras=extras,
            trace=[r.to_dict() for r in outcome.trace] if self.ctx.include_trace else None,
            **self.ctx.objectives,
        )


def _plain(values: dict[str, Any]) -> dict[str, Any]:
    return {k: float(v) if isinstance(v, (np.floating, float)) else v for k, v in values.items()}
