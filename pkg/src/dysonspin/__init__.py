"""Time-dependent Dyson maps for PT-symmetric spin models."""
__version__ = "0.1.0"

from .spin import HALF, ONE, THREE_HALVES, ModelParams, hamiltonian, spin_operators
from .ermakov import EPSolution, chi_closed_form
from .dyson import DysonSpec, dyson_map, hermitian_counterpart, metric
from .evolution import closed_form_state, map_state, rk4_propagate
from .verify import RunConfig, run_verification

__all__ = [
    "HALF", "ONE", "THREE_HALVES", "ModelParams", "hamiltonian", "spin_operators",
    "EPSolution", "chi_closed_form", "DysonSpec", "dyson_map", "hermitian_counterpart",
    "metric", "closed_form_state", "map_state", "rk4_propagate", "RunConfig",
    "run_verification",
]
