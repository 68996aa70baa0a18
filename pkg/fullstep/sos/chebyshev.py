"""Chebyshev 插值基：第二类 Chebyshev 点、Clenshaw–Curtis 权与基矩阵。"""

import numpy as np
from numpy.polynomial import chebyshev as C


def chebyshev_nodes(degree: int) -> np.ndarray:
    """
    D+1 个第二类 Chebyshev 点 cos(jπ/D)，升序排列。

    写成 sin(π(2j−D)/(2D)) 使点集严格关于 0 对称，端点恰为 ±1。
    """
    if degree < 2:
        raise ValueError(f"插值次数 D 至少为 2，收到 {degree}")
    j = np.arange(degree + 1)
    return np.sin(np.pi * (2 * j - degree) / (2 * degree))


def clenshaw_curtis_weights(degree: int) -> np.ndarray:
    """[−1, 1] 上 D+1 点 Clenshaw–Curtis 求积权（与 chebyshev_nodes 同序，总和为 2）"""
    if degree < 2:
        raise ValueError(f"插值次数 D 至少为 2，收到 {degree}")
    n = degree
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    inner = theta[1:n]
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2 * k * inner) / (4 * k**2 - 1)
        v -= np.cos(n * inner) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * inner) / (4 * k**2 - 1)
    w[1:n] = 2.0 * v / n
    # 权关于中点对称，降序节点的权即升序节点的权
    return w


def basis_matrix(nodes: np.ndarray, columns: int) -> np.ndarray:
    """T₀, …, T_{columns−1} 在各节点处的取值，形状 (len(nodes), columns)。"""
    return C.chebvander(nodes, columns - 1)


def chebyshev_degree(coefficients: np.ndarray, tol: float = 1e-12) -> int:
    """去掉相对量级低于 tol 的尾部系数后的多项式次数。"""
    coefficients = np.atleast_1d(np.asarray(coefficients, dtype=float))
    scale = max(1.0, float(np.max(np.abs(coefficients)))) if coefficients.size else 1.0
    trimmed = C.chebtrim(coefficients, tol * scale)
    if trimmed.size == 1 and trimmed[0] == 0.0:
        return 0
    return trimmed.size - 1


def values_at(nodes: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    return C.chebval(nodes, np.asarray(coefficients, dtype=float))


def from_power_basis(coefficients: list[float]) -> np.ndarray:
    """单项式系数（升幂）转 Chebyshev 系数。"""
    return C.poly2cheb(np.asarray(coefficients, dtype=float))
