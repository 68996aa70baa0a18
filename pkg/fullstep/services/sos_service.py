import asyncio
from dataclasses import dataclass
from typing import Any

from ..config import SolverConfig, base_config
from ..log import logger
from ..sos import (
    Certified,
    SemialgebraicInstance,
    SosMethod,
    SosResult,
    TableRow,
    certify,
    conjectured_value,
    solve_sos_bound,
    table_row,
    validate_table_degrees,
)
from ..utils.models import RunReport


@dataclass
class SosContext:
    """一次 SOS 下界任务的上下文"""

    instance: SemialgebraicInstance
    config: SolverConfig
    method: SosMethod = SosMethod.TWO_PHASE
    timing: bool = True
    include_trace: bool = False

    result: SosResult | None = None


class SosService:
    def __init__(self, ctx: SosContext):
        self.ctx = ctx

    def run(self) -> RunReport:
        ctx = self.ctx
        ctx.result = solve_sos_bound(ctx.instance, ctx.method, ctx.config)
        return self._report(ctx.result)

    def _report(self, result: SosResult) -> RunReport:
        inst = self.ctx.instance
        extras: dict[str, Any] = {
            "instance": inst.name,
            "degree": inst.degree,
            "nu": float(sum(inst.multiplier_sizes)),
            "bound": result.bound,
            "neg_inv_bound": result.neg_inv_bound,
            "upper_bound": result.upper,
            "certified_bound": result.certified,
        }
        if inst.name == "stengle":
            extras["conjectured"] = conjectured_value(inst.degree)
        if result.phase1 is not None:
            extras["phase1_iterations"] = result.phase1.iterations
        gamma = result.certified if result.certified is not None else result.bound
        if result.lam is not None and gamma is not None:
            verdict = certify(inst, result.lam, gamma)
            extras["certificate"] = verdict.verdict
            if isinstance(verdict, Certified):
                extras["certificate_tau"] = verdict.tau
            else:
                extras["certificate_reason"] = verdict.reason
        for key in ("omega", "beta", "xi", "kappa", "theta"):
            if key in result.outcome.extras:
                extras[key] = float(result.outcome.extras[key])
        trace = None
        if self.ctx.include_trace:
            phase1 = result.phase1.trace if result.phase1 is not None else []
            trace = [{"phase": 1, **r.to_dict()} for r in phase1] + [
                {"phase": 2, **r.to_dict()} for r in result.outcome.trace
            ]
        return RunReport(
            status=result.status.value,
            method=result.method.value,
            variant=self.ctx.config.variant.value,
            iterations=result.iterations,
            iteration_bound=result.outcome.bound,
            primal_objective=result.upper,
            dual_objective=result.bound,
            gap=float(result.outcome.state.gap),
            seconds=result.seconds if self.ctx.timing else 0.0,
            reason=result.reason,
            config=self.ctx.config.model_dump(mode="json"),
            extras=extras,
            trace=trace,
        )


async def run_table(
    degrees: list[int],
    methods: list[SosMethod],
    config: SolverConfig | None = None,
    timing: bool = True,
    workers: int | None = None,
) -> list[TableRow]:
    """各行相互独立，在工作线程中并行求解，结果按 (method, D) 原顺序返回。"""
    validate_table_degrees(degrees)
    limit = asyncio.Semaphore(max(1, int(workers or base_config.get("table_workers", 4))))

    async def one(degree: int, method: SosMethod) -> TableRow:
        async with limit:
            return await asyncio.to_thread(table_row, degree, method, config, timing)

    rows = await asyncio.gather(*(one(d, m) for m in methods for d in degrees))
    failed = sum(1 for r in rows if r.failed)
    if failed:
        logger.warning(f"猜想表共 {len(rows)} 行，其中 {failed} 行求解失败")
    return list(rows)
