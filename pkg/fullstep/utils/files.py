import json
from pathlib import Path
from typing import Any

import aiofiles

from ..exceptions import ProblemParseError
from ..log import logger
from .models import ProblemFile, RunReport, SosInstanceFile, parse_model


async def read_json(path: Path) -> Any:
    """读取 JSON 文件；文件不存在或格式错误时抛出 ProblemParseError。"""
    path = Path(path)
    if not path.is_file():
        raise ProblemParseError(str(path), "文件不存在")
    async with aiofiles.open(path, "r", encoding="utf-8") as f:
        text = await f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemParseError(f"{path}:{e.lineno}:{e.colno}", e.msg) from e


async def load_problem_file(path: Path) -> ProblemFile:
    data = await read_json(path)
    problem = parse_model(ProblemFile, data, str(path))
    logger.debug(f"已读取问题文件 {path}: m = {len(problem.a)}, n = {len(problem.c)}")
    return problem


async def load_sos_instance(path: Path) -> SosInstanceFile:
    data = await read_json(path)
    return parse_model(SosInstanceFile, data, str(path))


async def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(text)
    logger.info(f"已写入 {path}")
    return path


async def write_report(path: Path, report: RunReport) -> Path:
    return await write_text(path, report.model_dump_json(indent=2))


async def write_trace(path: Path, trace: list[dict[str, Any]]) -> Path:
    return await write_text(path, json.dumps(trace, indent=2, ensure_ascii=False))
