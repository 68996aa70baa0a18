from .embedding import (
    Embedding,
    HsdDirection,
    HsdState,
    build_embedding,
    equality_residual,
    hsd_newton,
    hsd_step,
    skew_matrix,
)
from .solver import (
    Certificate,
    HsdModel,
    HsdThresholds,
    Solution,
    Unclassified,
    extract,
    hsd_solve,
)

__all__ = [
    "Certificate",
    "Embedding",
    "HsdDirection",
    "HsdModel",
    "HsdState",
    "HsdThresholds",
    "Solution",
    "Unclassified",
    "build_embedding",
    "equality_residual",
    "extract",
    "hsd_newton",
    "hsd_solve",
    "hsd_step",
    "skew_matrix",
]
