class SolverError(Exception):
    """求解器错误基类"""

    pass


class DimensionMismatch(SolverError, ValueError):
    """向量或矩阵维度不一致"""

    pass


class NotPositiveDefinite(SolverError):
    """Cholesky 分解遇到非正主元"""

    def __init__(self, pivot: int, message: str | None = None):
        self.pivot = pivot
        super().__init__(message or f"矩阵非正定，失败主元位置: {pivot}")


class NotInterior(SolverError):
    """点不在锥的内部"""

    pass


class NumericalFailure(SolverError):
    """数值失败（不变量被破坏或分解失败）"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class NegativeDiscriminant(NumericalFailure):
    """自适应更新的判别式为负（候选点不在任何邻域内）"""

    pass


class StartNotInNeighborhood(SolverError):
    """初始点不在中心路径邻域内"""

    pass


class InvalidTolerance(SolverError, ValueError):
    """容差不合法"""

    pass


class PreconditionFailed(SolverError):
    """前置条件不满足"""

    pass


class EmptyKernel(SolverError):
    """齐次方程组只有零解"""

    pass


class SingularSystem(SolverError):
    """线性方程组奇异"""

    pass


class IterationLimitReached(SolverError):
    """达到最大迭代次数"""

    pass


class ConfigError(SolverError, ValueError):
    """配置参数不合法"""

    pass


class ProblemParseError(SolverError):
    """问题文件解析失败（带出错位置）"""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class DegreeParityError(ProblemParseError):
    """次数奇偶性不满足要求"""

    pass
