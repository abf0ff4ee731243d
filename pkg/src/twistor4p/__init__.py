"""Perturbative twistor lines on the symmetric four-punctured sphere."""

from .deformation import DerivativeSeries, derive, first_order, lax_solve, trace_derivatives
from .errors import (DegenerateError, DepthCapError, OrderInconsistencyError,
                     PathSingularityError, SingularSystemError, StepSizeError, Twistor4pError)
from .iterints import OmegaTable, omega_table, omega_tables
from .laurent import LaurentPoly, PolyMatrix
from .monodromy import loop_monodromy, reality_residual, sweep, transport
from .potential import ModuliConfig, central_values

__version__ = "0.1.0"

__all__ = [
    "DegenerateError", "DepthCapError", "DerivativeSeries", "LaurentPoly", "ModuliConfig",
    "OmegaTable", "OrderInconsistencyError", "PathSingularityError", "PolyMatrix",
    "SingularSystemError", "StepSizeError", "Twistor4pError", "central_values", "derive",
    "first_order", "lax_solve", "loop_monodromy", "omega_table", "omega_tables",
    "reality_residual", "sweep", "trace_derivatives", "transport",
]
