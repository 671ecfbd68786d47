"""Numerical verification engine for four-dimensional almost Hermitian charts.

Evaluates metrics and almost complex structures given as coordinate
expressions, computes curvature decompositions and differential identities
through truncated Taylor jets, and classifies structures against the Gray
curvature conditions.
"""

__version__ = "0.1.0"

from .charts import ChartSpec, FormBasis, StructurePoint, adapted_frame, catalog, load_chart, structure_at
from .decomp import DecompReport, decompose, j_invariance_residuals, so4_decompose, star_ricci, u2_decompose
from .errors import AK4Error, ChartError, DomainError, JetOrderError, ParseError, StructureError
from .exprs import eval_float, eval_jet, parse_expr
from .jets import Jet, Jet4, jet_arith
from .riemann import (
    ConnectionData,
    CurvatureData,
    HermitianFirstOrder,
    connection,
    curvature,
    hermitian_first_order,
    ricci_identity_check,
)
from .sandbox import AlgebraicCurvature, curvature_with_blocks, random_curvature

__all__ = [
    "AK4Error",
    "AlgebraicCurvature",
    "ChartError",
    "ChartSpec",
    "ConnectionData",
    "CurvatureData",
    "DecompReport",
    "DomainError",
    "FormBasis",
    "HermitianFirstOrder",
    "Jet",
    "Jet4",
    "JetOrderError",
    "ParseError",
    "StructureError",
    "StructurePoint",
    "adapted_frame",
    "catalog",
    "connection",
    "curvature",
    "curvature_with_blocks",
    "decompose",
    "eval_float",
    "eval_jet",
    "hermitian_first_order",
    "j_invariance_residuals",
    "jet_arith",
    "load_chart",
    "parse_expr",
    "random_curvature",
    "ricci_identity_check",
    "so4_decompose",
    "star_ricci",
    "structure_at",
    "u2_decompose",
]
