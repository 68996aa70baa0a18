import sys

from loguru import logger

logger.remove()
_handler_id = logger.add(sys.stderr, level="WARNING", format="{time:HH:mm:ss} | {level: <7} | {message}")


def set_level(level: str) -> None:
    """重新设置日志输出等级。"""
    global _handler_id
    logger.remove(_handler_id)
    _handler_id = logger.add(
        sys.stderr, level=level.upper(), format="{time:HH:mm:ss} | {level: <7} | {message}"
    )


__all__ = ["logger", "set_level"]
