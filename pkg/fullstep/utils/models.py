"""问题文件、SOS 实例文件与运行报告的数据模型。"""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..exceptions import ProblemParseError


def format_location(loc: tuple[Any, ...]) -> str:
    """pydantic 错误位置 ('cone', 'cones', 0, 'dim') 转为 cone.cones[0].dim。"""
    parts: list[str] = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts)


def parse_model(model_cls: type[BaseModel], data: Any, source: str = "") -> Any:
    """校验数据，失败时抛出带首个出错位置的 ProblemParseError。"""
    try:
        return model_cls.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = format_location(tuple(first.get("loc", ())))
        path = f"{source}:{location}" if source and location else (source or location)
        raise ProblemParseError(path, first.get("msg", str(e))) from e


class ConeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["orthant", "product", "extended", "moment"]
    dim: int | None = Field(default=None, ge=1)
    cones: list["ConeModel"] | None = None
    inner: "ConeModel | None" = None
    degree: int | None = Field(default=None, ge=2)
    constraints: list[list[float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _required_fields(self) -> "ConeModel":
        required = {"orthant": "dim", "product": "cones", "extended": "inner", "moment": "degree"}
        key = required[self.type]
        if getattr(self, key) is None:
            raise ValueError(f"{self.type} 锥缺少字段 '{key}'")
        if self.type == "product" and not self.cones:
            raise ValueError("product 锥至少需要一个成员")
        return self

    def to_spec(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


ConeModel.model_rebuild()


class BoundModel(BaseModel):
    """所有可行 x 满足 zᵀx < upper"""

    z: list[float]
    upper: float = Field(gt=0)


class ProblemFile(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    a: list[list[float]] = Field(alias="A", min_length=1)
    b: list[float]
    c: list[float]
    cone: ConeModel
    x0: list[float] | None = None
    bound: BoundModel | None = None

    @model_validator(mode="after")
    def _shapes(self) -> "ProblemFile":
        n = len(self.c)
        for i, row in enumerate(self.a):
            if len(row) != n:
                raise ValueError(f"A 的第 {i} 行长度 {len(row)} 与 c 的长度 {n} 不一致")
        if len(self.b) != len(self.a):
            raise ValueError(f"b 的长度 {len(self.b)} 与 A 的行数 {len(self.a)} 不一致")
        if self.x0 is not None and len(self.x0) != n:
            raise ValueError(f"x0 的长度 {len(self.x0)} 与变量个数 {n} 不一致")
        if self.bound is not None and len(self.bound.z) != n:
            raise ValueError(f"bound.z 的长度 {len(self.bound.z)} 与变量个数 {n} 不一致")
        return self


class SosInstanceFile(BaseModel):
    """单变量多项式以 Chebyshev 系数（或 basis = "power" 时的升幂系数）给出"""

    model_config = ConfigDict(extra="forbid")

    degree: int = Field(ge=2)
    objective: list[float] = Field(default_factory=lambda: [0.0], min_length=1)
    constraints: list[list[float]] = Field(default_factory=list)
    basis: Literal["chebyshev", "power"] = "chebyshev"


class RunReport(BaseModel):
    status: str
    method: str
    variant: str
    iterations: int
    iteration_bound: int | None = None
    primal_objective: float | None = None
    dual_objective: float | None = None
    gap: float | None = None
    primal_residual: float | None = None
    dual_residual: float | None = None
    seconds: float = 0.0
    reason: str | None = None
    config: dict[str, Any] = Field(default_factory=dict)
    extras: dict[str, Any] = Field(default_factory=dict)
    trace: list[dict[str, Any]] | None = None
