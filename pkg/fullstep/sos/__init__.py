from .bounds import (
    TABLE_HEADER,
    Certified,
    NotCertified,
    SosMethod,
    SosResult,
    TableRow,
    build_lower_bound_problem,
    certified_bound,
    certify,
    conjecture_table,
    recenter,
    solve_sos_bound,
    sos_solver_config,
    table_csv,
    table_row,
    upper_bound_from_certificate,
    validate_table_degrees,
)
from .chebyshev import basis_matrix, chebyshev_nodes, clenshaw_curtis_weights
from .instance import (
    EXAMPLES,
    SemialgebraicInstance,
    conjectured_value,
    interval_instance,
    stengle_instance,
)
from .moment_cone import MomentCone, MomentConeSpec, build_moment_cone

__all__ = [
    "EXAMPLES",
    "TABLE_HEADER",
    "Certified",
    "MomentCone",
    "MomentConeSpec",
    "NotCertified",
    "SemialgebraicInstance",
    "SosMethod",
    "SosResult",
    "TableRow",
    "basis_matrix",
    "build_lower_bound_problem",
    "build_moment_cone",
    "certified_bound",
    "certify",
    "chebyshev_nodes",
    "clenshaw_curtis_weights",
    "conjecture_table",
    "conjectured_value",
    "interval_instance",
    "recenter",
    "solve_sos_bound",
    "sos_solver_config",
    "stengle_instance",
    "table_csv",
    "table_row",
    "upper_bound_from_certificate",
    "validate_table_degrees",
]
