from dataclasses import dataclass
from enum import Enum
import math
import os
from pathlib import Path
import sys
from typing import Any

import aiofiles
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
import tomli_w

from .exceptions import ConfigError
from .log import logger

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PACKAGE_DIR = Path(__file__).parent
PROBLEMS_DIR = PACKAGE_DIR / "problems"
CONFIG_ENV = "FULLSTEP_CONFIG"
DEFAULT_CONFIG_FILE = Path("fullstep.toml")

# 邻域保持只对 η ≤ 1/4 成立
ETA_MAX = 0.25
# 反向 Phase 1 的辅助路径允许到 1/3
BACKWARDS_ETA_MAX = 1.0 / 3.0


class UpdateVariant(str, Enum):
    """τ 更新策略"""

    FIXED = "fixed"
    ADAPTIVE = "adaptive"
    LARGEST = "largest"


@dataclass(frozen=True)
class RegisterConfig:
    key: str
    value: Any
    help: str


CONFIG_ENTRIES: list[RegisterConfig] = [
    RegisterConfig("eta", 0.25, "中心路径邻域半径 η，须满足 0 < η ≤ 1/4"),
    RegisterConfig("eps", 1e-8, "停止条件：对偶间隙 xᵀs ≤ eps"),
    RegisterConfig("variant", "adaptive", "τ 更新策略: fixed / adaptive / largest"),
    RegisterConfig("max_iterations", 20000, "最大迭代次数"),
    RegisterConfig("feas_tol", 1e-9, "线性可行性容差"),
    RegisterConfig("shrink_factor", 0.5, "最大步长更新的回溯收缩因子"),
    RegisterConfig("max_trials", 40, "最大步长更新的回溯次数上限"),
    RegisterConfig("refinements", 4, "最大步长更新在首次失败后的几何二分细化次数"),
    RegisterConfig("min_tau_ratio", 1e-4, "最大步长更新单次迭代允许的最小 τ⁺/τ"),
    RegisterConfig("stall_factor", 100.0, "数值停滞时接受的间隙倍数 gap ≤ stall_factor·eps"),
    RegisterConfig("invariant_checks", False, "是否逐次迭代检查理论不变量"),
    RegisterConfig("phase1_eta", 0.1, "两阶段法 Phase 1 的邻域半径 η̃（≤ 1/10）"),
    RegisterConfig("phase1_variant", "largest", "Phase 1 使用的 τ 更新策略"),
    RegisterConfig("backwards_eta", 0.2, "反向 Phase 1 辅助路径的邻域半径（≤ 1/3）"),
    RegisterConfig("sos_variant", "largest", "SOS 下界求解使用的 τ 更新策略"),
    RegisterConfig("sos_eps", 1e-9, "SOS 下界求解的停止容差"),
    RegisterConfig("xi_threshold", 1e-6, "HSD 分类阈值 ξ/max(ξ,κ,θ)"),
    RegisterConfig("ray_tol", 1e-8, "HSD 射线符号检验容差"),
    RegisterConfig("table_workers", 4, "表格命令并行求解的最大行数"),
    RegisterConfig("log_level", "WARNING", "日志等级"),
]


class BaseConfigStore:
    """注册配置项的默认值，并允许 TOML 文件覆盖。"""

    def __init__(self, entries: list[RegisterConfig]):
        self._defaults = {entry.key: entry.value for entry in entries}
        self._overrides: dict[str, Any] | None = None

    @property
    def path(self) -> Path:
        return Path(os.environ.get(CONFIG_ENV, DEFAULT_CONFIG_FILE))

    def _load(self) -> dict[str, Any]:
        if self._overrides is not None:
            return self._overrides
        self._overrides = {}
        path = self.path
        if not path.exists():
            return self._overrides
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8")) or {}
        except tomllib.TOMLDecodeError as e:
            logger.error(f"配置文件 {path} 格式错误，无法解析: {e}")
            return self._overrides
        unknown = set(data) - set(self._defaults)
        if unknown:
            logger.warning(f"配置文件 {path} 含有未知配置项: {sorted(unknown)}")
        self._overrides = {k: v for k, v in data.items() if k in self._defaults}
        logger.info(f"已从 {path} 加载 {len(self._overrides)} 个配置项。")
        return self._overrides

    def get(self, key: str, default: Any = None) -> Any:
        if key not in self._defaults:
            return default
        return self._load().get(key, self._defaults[key])

    def reload(self) -> None:
        self._overrides = None

    def defaults(self) -> dict[str, Any]:
        return dict(self._defaults)

    async def write_defaults(self, path: Path | None = None) -> Path:
        """将默认配置写入 TOML 文件。"""
        target = path or self.path
        target.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(target, "wb") as f:
            await f.write(tomli_w.dumps(self._defaults).encode("utf-8"))
        logger.info(f"默认配置已写入 {target}")
        return target


base_config = BaseConfigStore(CONFIG_ENTRIES)


class SolverConfig(BaseModel):
    """路径跟踪求解器的参数。ϑ 由 η 与 ν 推导，不单独存储。"""

    model_config = ConfigDict(frozen=True)

    eta: float = Field(default=0.25, gt=0)
    eps: float = Field(default=1e-8, gt=0)
    variant: UpdateVariant = UpdateVariant.ADAPTIVE
    max_iterations: int = Field(default=20000, ge=0)
    feas_tol: float = Field(default=1e-9, gt=0)
    shrink_factor: float = Field(default=0.5, gt=0, lt=1)
    max_trials: int = Field(default=40, ge=0)
    refinements: int = Field(default=4, ge=0)
    min_tau_ratio: float = Field(default=1e-4, gt=0, lt=1)
    stall_factor: float = Field(default=100.0, ge=1)
    invariant_checks: bool = False

    @field_validator("eta")
    @classmethod
    def _eta_within_proof(cls, v: float) -> float:
        if v > ETA_MAX:
            raise ValueError(
                f"η = {v} 不被支持：邻域保持性要求 η ≤ 1/4"
            )
        return v

    def theta(self, nu: float) -> float:
        return (self.eta / 2.0) / (math.sqrt(nu) + 1.0)

    def with_overrides(self, **overrides: Any) -> "SolverConfig":
        return make_solver_config(**{**self.model_dump(), **overrides})


def make_solver_config(**overrides: Any) -> SolverConfig:
    """从注册配置与覆盖参数构造 SolverConfig，校验失败时抛出 ConfigError。"""
    values = {
        key: base_config.get(key)
        for key in SolverConfig.model_fields
        if base_config.get(key) is not None
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SolverConfig(**values)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise ConfigError(messages) from e
