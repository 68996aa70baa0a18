import asyncio
from functools import wraps
import json
from pathlib import Path
import sys
from typing import Any, Awaitable, Callable

from arclet.alconna import Arparma
from arclet.alconna.exceptions import SpecialOptionTriggered

from .cones import build_cone
from .cones.selftest import self_test
from .config import SolverConfig, base_config, make_solver_config
from .exceptions import (
    ConfigError,
    InvalidTolerance,
    IterationLimitReached,
    PreconditionFailed,
    ProblemParseError,
    SolverError,
    StartNotInNeighborhood,
)
from .log import logger, set_level
from .services import InitMethod, SolveContext, SolveService, SosContext, SosService, exit_code_for, run_table
from .sos import EXAMPLES, MomentCone, SemialgebraicInstance, SosMethod, sos_solver_config, table_csv
from .utils import (
    ConeModel,
    load_problem_file,
    load_sos_instance,
    parse_model,
    read_json,
    write_text,
    write_trace,
)

DEFAULT_DEGREES = [20, 40, 60, 80]

Handler = Callable[..., Awaitable[int]]


def reports_errors(func: Handler) -> Handler:
    """把异常映射为退出码：1 解析或配置错误，2 数值失败，3 迭代上限。"""

    @wraps(func)
    async def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return await func(*args, **kwargs)
        except (ProblemParseError, ConfigError, PreconditionFailed, StartNotInNeighborhood, InvalidTolerance) as e:
            logger.error(f"❌ {type(e).__name__}: {e}")
            return 1
        except IterationLimitReached as e:
            logger.error(f"❌ 达到迭代上限: {e}")
            return 3
        except SolverError as e:
            logger.error(f"❌ 数值失败 {type(e).__name__}: {e}")
            return 2

    return wrapper


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _switch(value: str | None, name: str) -> bool | None:
    if value is None:
        return None
    lowered = str(value).lower()
    if lowered in ("on", "true", "1"):
        return True
    if lowered in ("off", "false", "0"):
        return False
    raise ConfigError(f"{name} 只接受 on/off，收到 '{value}'")


def _number(value: str | None, name: str, kind: type = float) -> Any:
    if value is None:
        return None
    try:
        return kind(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name} 不是合法的数值: '{value}'") from e


def _overrides(
    variant: str | None,
    eta: str | None,
    eps: str | None,
    max_iter: str | None,
    check_invariants: str | None,
) -> dict[str, Any]:
    return {
        "variant": variant,
        "eta": _number(eta, "--eta"),
        "eps": _number(eps, "--eps"),
        "max_iterations": _number(max_iter, "--max-iter", int),
        "invariant_checks": _switch(check_invariants, "--check-invariants"),
    }


def parse_degrees(text: str | None) -> list[int]:
    """'20,40,60' 或 '20:100:20'（含终点）；空串得到空列表。"""
    if text is None:
        return list(DEFAULT_DEGREES)
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            start, stop, step = (int(part) for part in text.split(":"))
            return list(range(start, stop + 1, step))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"无法解析层级列表 '{text}'") from e


def parse_methods(text: str | None) -> list[SosMethod]:
    if not text:
        return [SosMethod.TWO_PHASE]
    try:
        return [SosMethod(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"未知的求解方式: '{text}'") from e


@reports_errors
async def solve_handler(
    problem: str,
    variant: str | None = None,
    eta: str | None = None,
    eps: str | None = None,
    max_iter: str | None = None,
    check_invariants: str | None = None,
    timing: str | None = None,
    init: str | None = None,
    trace: str | None = None,
) -> int:
    config = make_solver_config(**_overrides(variant, eta, eps, max_iter, check_invariants))
    try:
        method = InitMethod(init or InitMethod.HSD.value)
    except ValueError as e:
        raise ConfigError(f"未知的初始化方式: '{init}'") from e
    spec = await load_problem_file(Path(problem))
    ctx = SolveContext(
        spec=spec,
        config=config,
        source=problem,
        init=method,
        timing=_switch(timing, "--timing") is not False,
        include_trace=trace is not None,
    )
    report = SolveService(ctx).run()
    if trace is not None:
        await write_trace(Path(trace), report.trace or [])
    _emit(report.model_dump_json(indent=2))
    return exit_code_for(report.status)


async def _sos_instance(instance: str | None, example: str | None, degree: str | None) -> SemialgebraicInstance:
    if instance is not None:
        model = await load_sos_instance(Path(instance))
        return SemialgebraicInstance.from_file(model, name=Path(instance).stem)
    name = (example or "stengle").lower()
    if name not in EXAMPLES:
        raise ConfigError(f"未知的内置实例 '{example}'，可选: {', '.join(EXAMPLES)}")
    if degree is None:
        raise ConfigError("内置实例需要 --degree")
    return EXAMPLES[name](_number(degree, "--degree", int))


@reports_errors
async def sos_handler(
    instance: str | None = None,
    example: str | None = None,
    degree: str | None = None,
    method: str | None = None,
    variant: str | None = None,
    eta: str | None = None,
    eps: str | None = None,
    max_iter: str | None = None,
    check_invariants: str | None = None,
    timing: str | None = None,
    trace: str | None = None,
) -> int:
    config = sos_solver_config(**_overrides(variant, eta, eps, max_iter, check_invariants))
    try:
        sos_method = SosMethod(method or SosMethod.TWO_PHASE.value)
    except ValueError as e:
        raise ConfigError(f"未知的求解方式: '{method}'") from e
    inst = await _sos_instance(instance, example, degree)
    ctx = SosContext(
        instance=inst,
        config=config,
        method=sos_method,
        timing=_switch(timing, "--timing") is not False,
        include_trace=trace is not None,
    )
    report = SosService(ctx).run()
    if trace is not None:
        await write_trace(Path(trace), report.trace or [])
    _emit(report.model_dump_json(indent=2))
    return exit_code_for(report.status)


@reports_errors
async def table_handler(
    degrees: str | list[int] | None = None,
    methods: str | None = None,
    out: str | None = None,
    workers: str | None = None,
    variant: str | None = None,
    eta: str | None = None,
    eps: str | None = None,
    max_iter: str | None = None,
    check_invariants: str | None = None,
    timing: str | None = None,
) -> int:
    config: SolverConfig = sos_solver_config(**_overrides(variant, eta, eps, max_iter, check_invariants))
    degree_list = degrees if isinstance(degrees, list) else parse_degrees(degrees)
    rows = await run_table(
        degree_list,
        parse_methods(methods),
        config,
        timing=_switch(timing, "--timing") is not False,
        workers=_number(workers, "--workers", int),
    )
    text = table_csv(rows)
    if out is not None:
        await write_text(Path(out), text)
    else:
        _emit(text)
    return 0


@reports_errors
async def selftest_handler(
    cone: str | None = None,
    example: str | None = None,
    degree: str | None = None,
    seed: str | None = None,
) -> int:
    if cone is not None:
        model = parse_model(ConeModel, await read_json(Path(cone)), cone)
        try:
            target = build_cone(model.to_spec())
        except (ValueError, KeyError) as e:
            raise ProblemParseError(cone, str(e)) from e
    else:
        inst = await _sos_instance(None, example, degree)
        target = MomentCone.from_instance(inst)
    report = self_test(target, target.interior_point(), seed=_number(seed, "--seed", int) or 0)
    _emit(
        json.dumps(
            {
                "cone": report.cone,
                "nu": report.nu,
                "passed": report.passed,
                "failures": report.failures,
                "notes": report.notes,
            },
            indent=2,
            ensure_ascii=False,
        )
    )
    return 0 if report.passed else 2


@reports_errors
async def config_handler(init: bool | str | None = None) -> int:
    if init:
        path = await base_config.write_defaults(Path(init) if isinstance(init, str) else None)
        _emit(str(path))
        return 0
    effective = {key: base_config.get(key) for key in base_config.defaults()}
    _emit(json.dumps(effective, indent=2, ensure_ascii=False))
    return 0


HANDLERS: dict[str, Handler] = {
    "solve": solve_handler,
    "sos": sos_handler,
    "table": table_handler,
    "selftest": selftest_handler,
    "config": config_handler,
}


def _collect(sub: Any) -> dict[str, Any]:
    values = dict(sub.args)
    for name, option in sub.options.items():
        values[name] = next(iter(option.args.values())) if option.args else True
    return values


async def dispatch(arp: Arparma) -> int:
    if not arp.matched:
        if isinstance(arp.error_info, SpecialOptionTriggered):
            return 0
        logger.error(f"❌ 命令解析失败: {arp.error_info}")
        return 1
    set_level("DEBUG" if "verbose" in arp.options else str(base_config.get("log_level", "WARNING")))
    for name, handler in HANDLERS.items():
        if sub := arp.subcommands.get(name):
            return await handler(**_collect(sub))
    logger.error("❌ 请指定子命令: solve / sos / table / selftest / config")
    return 1


def main(argv: list[str] | None = None) -> int:
    from . import fullstep_alc

    tokens = list(sys.argv[1:] if argv is None else argv)
    arp = fullstep_alc.parse(["fullstep", *tokens])
    return asyncio.run(dispatch(arp))
