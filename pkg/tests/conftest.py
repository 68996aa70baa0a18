import numpy as np
import pytest

from fullstep.cones.orthant import Orthant
from fullstep.config import PROBLEMS_DIR, make_solver_config
from fullstep.core import ConicProblem, Iterate
from fullstep.log import set_level


def simple_lp() -> ConicProblem:
    """min x₁ + x₂ s.t. x₁ + x₂ = 2, x ≥ 0"""
    return ConicProblem(a=[[1.0, 1.0]], b=[2.0], c=[1.0, 1.0], cone=Orthant(2))


def central_point(problem: ConicProblem, tau: float, offset: float = 0.0) -> Iterate:
    """simple_lp 中心路径上 x = (1, 1) 处的点，offset 把 s 沿 (1, 1) 平移。"""
    x = np.ones(2)
    y = np.array([1.0 - tau - offset])
    s = problem.c - problem.a.T @ y
    return Iterate(x=x, y=y, s=s, tau=tau, eval=problem.cone.evaluate(x))


@pytest.fixture
def lp() -> ConicProblem:
    return simple_lp()


@pytest.fixture
def checked_config():
    return make_solver_config(invariant_checks=True)


@pytest.fixture
def problems_dir():
    return PROBLEMS_DIR


@pytest.fixture(autouse=True)
def _log_to_current_stderr():
    # 让 loguru 输出到本用例捕获的 stderr
    set_level("WARNING")
    yield
