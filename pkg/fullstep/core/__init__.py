from .model import PathModel, StandardModel, as_model
from .newton import neighborhood_distance, newton_direction, take_step
from .problem import (
    ConicProblem,
    Iterate,
    SolveOutcome,
    SolveStatus,
    StandardDirection,
    TraceRecord,
)
from .solver import (
    check_iteration_invariants,
    follow_path,
    outcome_summary,
    solve,
    theoretical_iteration_bound,
)
from .strategies import (
    AdaptiveUpdate,
    FixedUpdate,
    LargestUpdate,
    Proposal,
    UpdateStrategy,
    get_strategy,
    tau_adaptive,
    tau_fixed,
    tau_largest,
)

__all__ = [
    "AdaptiveUpdate",
    "ConicProblem",
    "FixedUpdate",
    "Iterate",
    "LargestUpdate",
    "PathModel",
    "Proposal",
    "SolveOutcome",
    "SolveStatus",
    "StandardDirection",
    "StandardModel",
    "TraceRecord",
    "UpdateStrategy",
    "as_model",
    "check_iteration_invariants",
    "follow_path",
    "get_strategy",
    "neighborhood_distance",
    "newton_direction",
    "outcome_summary",
    "solve",
    "take_step",
    "tau_adaptive",
    "tau_fixed",
    "tau_largest",
    "theoretical_iteration_bound",
]
