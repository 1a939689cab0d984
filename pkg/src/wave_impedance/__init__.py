"""Quantum wave impedance of piecewise-constant 1-D potentials.

Two equivalent engines evaluate the input impedance of a cascade of
constant-potential regions: an O(N) iterative matrix recursion and an
explicit O(2^N) sum over sign configurations.  A plane-wave transfer-matrix
solver is kept alongside as an independent check.
"""

from .core import (
    BAND_EPSILON,
    DegenerateState,
    EvanescentLead,
    ImpedanceError,
    PotentialProfile,
    ProfileTooLarge,
    PropagatingLead,
    Region,
    RegionParams,
    UnitMode,
    UnitSystem,
    lead_impedance,
    region_params,
)
from .iterative import input_impedance_iterative, step_matrix, transmission_iterative
from .analytical import (
    N_MAX,
    AnalyticalTerm,
    bound_state_residual,
    enumerate_terms,
    input_impedance_analytical,
    transmission,
)
from .oracle import oracle_impedance, oracle_reflection, oracle_transmission

__all__ = [
    "BAND_EPSILON",
    "N_MAX",
    "AnalyticalTerm",
    "DegenerateState",
    "EvanescentLead",
    "ImpedanceError",
    "PotentialProfile",
    "ProfileTooLarge",
    "PropagatingLead",
    "Region",
    "RegionParams",
    "UnitMode",
    "UnitSystem",
    "bound_state_residual",
    "enumerate_terms",
    "input_impedance_analytical",
    "input_impedance_iterative",
    "lead_impedance",
    "oracle_impedance",
    "oracle_reflection",
    "oracle_transmission",
    "region_params",
    "step_matrix",
    "transmission",
    "transmission_iterative",
]
