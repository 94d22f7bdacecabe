"""Chern-Rund connections and flag curvatures of left-invariant Randers
metrics on metric Lie algebras, with the five-dimensional Heisenberg model
built in."""

from .connection import (
    ConnectionTable,
    almost_metric_defect,
    chern_rund_table,
    levi_civita_table,
    nabla_w_of_w,
    nabla_x_w_map,
    torsion_defect,
    w_perp,
)
from .curvature import (
    SPECIAL_FLAG_CASES,
    FlagReport,
    SignCertificate,
    curvature_operator,
    flag_curvature,
    flag_report,
    riemannian_sectional,
    sign_search,
    special_flag_closed_form,
    special_flag_vectors,
)
from .errors import (
    ConfigError,
    DegenerateReferenceVector,
    DimensionMismatch,
    DomainError,
    GeometryError,
    InternalConsistencyError,
    ParameterError,
    SearchFailure,
)
from .lie_algebra import MetricLieAlgebra, ValidationReport, heisenberg5
from .randers import BerwaldReport, OsculatingFrame, RandersStructure

__version__ = "0.1.0"

__all__ = [
    "BerwaldReport",
    "ConfigError",
    "ConnectionTable",
    "DegenerateReferenceVector",
    "DimensionMismatch",
    "DomainError",
    "FlagReport",
    "GeometryError",
    "InternalConsistencyError",
    "MetricLieAlgebra",
    "OsculatingFrame",
    "ParameterError",
    "RandersStructure",
    "SearchFailure",
    "SignCertificate",
    "SPECIAL_FLAG_CASES",
    "ValidationReport",
    "almost_metric_defect",
    "chern_rund_table",
    "curvature_operator",
    "flag_curvature",
    "flag_report",
    "heisenberg5",
    "levi_civita_table",
    "nabla_w_of_w",
    "nabla_x_w_map",
    "riemannian_sectional",
    "sign_search",
    "special_flag_closed_form",
    "special_flag_vectors",
    "torsion_defect",
    "w_perp",
]
