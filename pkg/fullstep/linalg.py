"""稠密对称线性代数：Cholesky 分解、三角求解、Schur 补与正交零空间基。"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla
from scipy.linalg import lapack

from .exceptions import DimensionMismatch, NotPositiveDefinite, PreconditionFailed

# 数值秩判定：奇异值小于 RANK_RCOND × 最大奇异值视为零
RANK_RCOND = 1e-10
# 对称性容差：max|M − Mᵀ| ≤ SYMMETRY_TOL × max(1, max|M|)
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SpdFactor:
    """对称正定矩阵 M = L·Lᵀ 的下三角因子"""

    lower: np.ndarray

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    def matrix(self) -> np.ndarray:
        return self.lower @ self.lower.T

    def solve_lower(self, rhs: np.ndarray) -> np.ndarray:
        """返回 L⁻¹·rhs。"""
        _check_rows(self, rhs)
        return sla.solve_triangular(self.lower, rhs, lower=True, check_finite=False)

    def multiply_upper(self, v: np.ndarray) -> np.ndarray:
        """返回 Lᵀ·v。"""
        _check_rows(self, v)
        return self.lower.T @ v


@dataclass(frozen=True)
class NullspaceBasis:
    """ker(B) 的正交基 Z（n×k）"""

    basis: np.ndarray
    defining: np.ndarray

    @property
    def ambient_dimension(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]


def _check_rows(factor: SpdFactor, rhs: np.ndarray) -> None:
    if np.shape(rhs)[0] != factor.dimension:
        raise DimensionMismatch(
            f"右端项行数 {np.shape(rhs)[0]} 与因子维度 {factor.dimension} 不一致"
        )


def cholesky(matrix: np.ndarray) -> SpdFactor:
    """对称矩阵的 Cholesky 分解；主元非正或非有限时抛出 NotPositiveDefinite。"""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"Cholesky 需要方阵，收到形状 {m.shape}")
    if m.shape[0] == 0:
        return SpdFactor(np.zeros((0, 0)))
    finite = np.isfinite(m)
    if not finite.all():
        row = int(np.argmin(finite.all(axis=1)))
        raise NotPositiveDefinite(row + 1, f"矩阵含非有限元素，位于第 {row + 1} 行")
    scale = max(1.0, float(np.max(np.abs(m))))
    asymmetry = float(np.max(np.abs(m - m.T)))
    if asymmetry > SYMMETRY_TOL * scale:
        raise PreconditionFailed(f"Cholesky 需要对称矩阵，max|M − Mᵀ| = {asymmetry:.3e}")
    lower, info = lapack.dpotrf(m, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefinite(int(info))
    if info < 0:
        raise ValueError(f"dpotrf 参数错误: {info}")
    return SpdFactor(lower)


def gram_factor(k: np.ndarray) -> SpdFactor:
    """Gram 矩阵 KᵀK 的下三角因子，经 K 的 QR 分解得到，不显式形成 KᵀK。

    条件数不会被平方；R 的对角元为零时抛出 NotPositiveDefinite。
    """
    k = np.atleast_2d(np.asarray(k, dtype=float))
    n = k.shape[1]
    if n == 0:
        return SpdFactor(np.zeros((0, 0)))
    if k.shape[0] < n:
        raise NotPositiveDefinite(k.shape[0] + 1, f"Gram 矩阵秩亏：{k.shape[0]} 行少于 {n} 列")
    if not np.isfinite(k).all():
        raise NotPositiveDefinite(1, "Gram 因子的输入含非有限元素")
    (r,) = sla.qr(k, mode="r", check_finite=False)
    r = r[:n]
    diag = np.diag(r)
    zero = np.flatnonzero(diag == 0.0)
    if zero.size:
        raise NotPositiveDefinite(int(zero[0]) + 1)
    r = np.sign(diag)[:, None] * r
    return SpdFactor(np.tril(r.T))


def solve_spd(factor: SpdFactor, rhs: np.ndarray) -> np.ndarray:
    """求解 (L·Lᵀ)·w = rhs。"""
    rhs = np.asarray(rhs, dtype=float)
    _check_rows(factor, rhs)
    if factor.dimension == 0:
        return rhs.copy()
    return sla.cho_solve((factor.lower, True), rhs, check_finite=False)


def schur_complement(factor: SpdFactor, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """返回 (A·H⁻¹·Aᵀ, L⁻¹·Aᵀ)，H = L·Lᵀ。"""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    v = factor.solve_lower(a.T)
    return v.T @ v, v


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def nullspace(b: np.ndarray) -> NullspaceBasis:
    """ker(B) 的正交基，秩按 RANK_RCOND 相对截断判定。"""
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if b.shape[1] == 0:
        raise DimensionMismatch("零空间计算需要至少一列")
    z = sla.null_space(b, rcond=RANK_RCOND)
    return NullspaceBasis(basis=z, defining=b)


def numerical_rank(a: np.ndarray) -> int:
    s = sla.svdvals(np.atleast_2d(a))
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_RCOND * s[0]))
