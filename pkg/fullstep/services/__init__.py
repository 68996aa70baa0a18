from .solve_service import InitMethod, SolveContext, SolveService, build_problem, exit_code_for
from .sos_service import SosContext, SosService, run_table

__all__ = [
    "InitMethod",
    "SolveContext",
    "SolveService",
    "SosContext",
    "SosService",
    "build_problem",
    "exit_code_for",
    "run_table",
]
