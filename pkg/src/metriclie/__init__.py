"""Left-invariant Riemannian geometry and Ricci solitons on Lie algebras
whose derived algebra has dimension one or two."""

from .catalog import FamilySpec, build
from .decomp import DerivedDecomposition, Kind, decompose
from .errors import MetricLieError
from .geom import MetricLieAlgebra, RicciData
from .liealg import LieAlgebra
from .soliton import CrossReport, SolitonVerdict, cross_validate, oracle_solve

__version__ = "0.1.0"

__all__ = [
    "CrossReport", "DerivedDecomposition", "FamilySpec", "Kind", "LieAlgebra", "MetricLieAlgebra",
    "MetricLieError", "RicciData", "SolitonVerdict", "build", "cross_validate", "decompose",
    "oracle_solve",
]
