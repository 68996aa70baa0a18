from .files import (
    load_problem_file,
    load_sos_instance,
    read_json,
    write_report,
    write_text,
    write_trace,
)
from .models import (
    BoundModel,
    ConeModel,
    ProblemFile,
    RunReport,
    SosInstanceFile,
    format_location,
    parse_model,
)

__all__ = [
    "BoundModel",
    "ConeModel",
    "ProblemFile",
    "RunReport",
    "SosInstanceFile",
    "format_location",
    "load_problem_file",
    "load_sos_instance",
    "parse_model",
    "read_json",
    "write_report",
    "write_text",
    "write_trace",
]
