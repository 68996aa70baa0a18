from .backwards import backwards_phase1
from .bounded import BoundedTransform, transform_bounded
from .membership import MembershipInstance, init_dual_membership
from .two_phase import (
    Phase1Report,
    build_phase1_problem,
    init_after_phase1,
    phase1_solve,
    two_phase_start,
)

__all__ = [
    "BoundedTransform",
    "MembershipInstance",
    "Phase1Report",
    "backwards_phase1",
    "build_phase1_problem",
    "init_after_phase1",
    "init_dual_membership",
    "phase1_solve",
    "transform_bounded",
    "two_phase_start",
]
