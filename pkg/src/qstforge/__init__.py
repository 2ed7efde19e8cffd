"""Quantum state transfer on 2D superconducting-qubit lattices.

Exact diagonalization in fixed-excitation subspaces, simulated-annealing
coupling design, level statistics, speed limits and robustness sweeps.
"""
__version__ = "0.1.0"

from .errors import InsufficientDataError, ResourceLimitError
from .fock import FockBasis, build_basis, parity_sectors
from .hamiltonian import (
    MHZ,
    CouplingConfig,
    Symmetry,
    build_hamiltonian,
    product_protocol_2d,
    standard_protocol,
    tj_to_ns,
    uniform_couplings,
)
from .lattice import BondKind, LatticeSpec, Site, build_grid

__all__ = [
    "__version__",
    "InsufficientDataError",
    "ResourceLimitError",
    "FockBasis",
    "build_basis",
    "parity_sectors",
    "MHZ",
    "CouplingConfig",
    "Symmetry",
    "build_hamiltonian",
    "product_protocol_2d",
    "standard_protocol",
    "tj_to_ns",
    "uniform_couplings",
    "BondKind",
    "LatticeSpec",
    "Site",
    "build_grid",
]
