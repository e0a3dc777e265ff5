"""Quantum correlations and teleportation in a graphene pseudo-spin/valley model."""
from .errors import ConfigError, DomainError, InvalidArgument, QcorrError, UnsupportedParameters
from .graphene import GrapheneParams, analytic_eigensystem, build_hamiltonian, ground_state, thermal_state
from .kernels import BACKEND
from .measures import (
    bures_entanglement,
    concurrence_mixed,
    concurrence_pure,
    full_report,
    tmin_closed,
    tmin_oracle,
    uin_closed,
    uin_oracle,
)
from .qmat import canonicalize_fano, hermitian_eig, pauli_decompose, sqrtm_psd, trace_norm
from .teleport import average_fidelity, teleport

__version__ = "0.1.0"
